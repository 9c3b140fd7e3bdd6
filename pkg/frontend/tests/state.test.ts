import { describe, expect, it } from "vitest";

import { ConfigMessage, StateMessage } from "../src/protocol.js";
import * as state from "../src/state.js";

const cfg: ConfigMessage = {
  type: "config", system: "leap_like", dt: 0.01,
  axis_gains: [0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2], mask: [3, 4, 5, 6], role: "commander",
};

function stateMsg(tick: number): StateMessage {
  return { type: "state", tick, t: tick * 0.01, q: [0, 0], params: null, bivector: null, versor: null, flags: {} };
}

describe("panel state reducers", () => {
  it("tracks the connection lifecycle and zeroes axes on close", () => {
    let s = state.initialState();
    s = state.onConnecting(s);
    expect(s.connection).toBe("connecting");
    s = state.onOpen(s);
    expect(s.connection).toBe("connected");
    s = state.setAxis(s, 6, -0.7);
    s = state.onClose(s);
    expect(s.connection).toBe("disconnected");
    expect(s.commandedAxes.every((a) => a === 0)).toBe(true);
  });

  it("applies config and state messages; the render state only reflects received updates", () => {
    let s = state.onOpen(state.initialState());
    s = state.onMessage(s, cfg);
    expect(s.config?.role).toBe("commander");
    s = state.onMessage(s, stateMsg(5));
    expect(s.lastState?.tick).toBe(5);
    // an out-of-order update never rewinds the scene
    s = state.onMessage(s, stateMsg(3));
    expect(s.lastState?.tick).toBe(5);
    expect(s.staleTicks).toBe(1);
    s = state.onMessage(s, stateMsg(6));
    expect(s.lastState?.tick).toBe(6);
    expect(s.receivedStates).toBe(2);
  });

  it("clamps slider values and records errors", () => {
    let s = state.initialState();
    s = state.setAxis(s, 0, 4.0);
    expect(s.commandedAxes[0]).toBe(1);
    s = state.onMessage(s, { type: "error", message: "boom" });
    expect(s.lastError).toBe("boom");
    s = state.zeroAxes(s);
    expect(Math.max(...s.commandedAxes.map(Math.abs))).toBe(0);
  });

  it("hands out monotone sequence numbers", () => {
    let s = state.initialState();
    const seqs: number[] = [];
    for (let i = 0; i < 5; i++) {
      const [next, seq] = state.nextSeq(s);
      s = next;
      seqs.push(seq);
    }
    expect(seqs).toEqual([1, 2, 3, 4, 5]);
  });
});
