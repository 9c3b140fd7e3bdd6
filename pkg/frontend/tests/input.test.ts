import { describe, expect, it } from "vitest";

import { AxisStreamer, gamepadToAxes, mergeAxes } from "../src/input.js";

function pad(axes: number[], buttons: Array<{ pressed: boolean; value: number }> = []) {
  const full = [...buttons];
  while (full.length < 14) full.push({ pressed: false, value: 0 });
  return { axes, buttons: full };
}

describe("gamepad mapping", () => {
  it("left stick drives the translation rows with the expected signs", () => {
    const axes = gamepadToAxes(pad([0.5, -0.25, 0, 0]));
    expect(axes[0]).toBeCloseTo(0.5);   // tx follows stick x
    expect(axes[1]).toBeCloseTo(0.25);  // ty is stick-up positive
  });

  it("applies a deadzone", () => {
    const axes = gamepadToAxes(pad([0.03, -0.02, 0.01, 0.0]));
    expect(axes.every((a) => a === 0)).toBe(true);
  });

  it("dpad vertical drives the dilation axis", () => {
    const buttons = Array.from({ length: 14 }, () => ({ pressed: false, value: 0 }));
    buttons[12] = { pressed: true, value: 1 };
    expect(gamepadToAxes(pad([0, 0, 0, 0], buttons))[6]).toBe(1);
    buttons[12] = { pressed: false, value: 0 };
    buttons[13] = { pressed: true, value: 1 };
    expect(gamepadToAxes(pad([0, 0, 0, 0], buttons))[6]).toBe(-1);
  });
});

describe("axis merge", () => {
  it("the larger magnitude wins per axis", () => {
    const merged = mergeAxes([0.2, 0, 0, 0, 0, 0, -0.9], [0.5, 0, 0, 0, 0, 0, 0.1]);
    expect(merged[0]).toBe(0.5);
    expect(merged[6]).toBe(-0.9);
  });

  it("without a gamepad the sliders pass through", () => {
    expect(mergeAxes([0.1, 0, 0, 0, 0, 0, 0], null)[0]).toBe(0.1);
  });
});

describe("zero-on-blur guarantee", () => {
  it("sends an explicit zero command immediately on blur", () => {
    let t = 0;
    const sent: Array<{ at: number; axes: number[] }> = [];
    const streamer = new AxisStreamer((axes) => sent.push({ at: t, axes: axes.slice() }), 20, 100);

    t = 0;
    streamer.tick([0.7, 0, 0, 0, 0, 0, -0.4]);
    t = 12;
    streamer.onBlur();  // blur between ticks
    const zeroAt = sent.findIndex((s) => s.axes.every((a) => a === 0));
    expect(zeroAt).toBeGreaterThan(0);
    expect(sent[zeroAt].at - 0).toBeLessThanOrEqual(100);
    expect(sent[zeroAt].at).toBe(12);  // immediate, not waiting for the timer

    // while blurred, periodic ticks keep sending zeros even if the UI state
    // still holds the old slider values
    t = 32;
    streamer.tick([0.7, 0, 0, 0, 0, 0, -0.4]);
    expect(sent[sent.length - 1].axes.every((a) => a === 0)).toBe(true);

    // focus restores command flow
    streamer.onFocus();
    t = 52;
    streamer.tick([0.3, 0, 0, 0, 0, 0, 0]);
    expect(sent[sent.length - 1].axes[0]).toBe(0.3);
  });
});
