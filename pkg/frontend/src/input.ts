/** Axis input sources: sliders and gamepad, merged into one 7-vector, plus
 * the zero-on-blur safety.  Pure logic with an injected clock so the timing
 * guarantee is unit-testable. */

export interface GamepadLike {
  axes: ReadonlyArray<number>;
  buttons: ReadonlyArray<{ pressed: boolean; value: number }>;
}

/** Map a standard gamepad onto the 7 command axes:
 * left stick x/y -> tx/ty, triggers -> tz, right stick x/y -> rz/ry,
 * bumpers -> rx, dpad vertical -> dilation. */
export function gamepadToAxes(pad: GamepadLike, deadzone = 0.08): number[] {
  const dz = (v: number) => (Math.abs(v) < deadzone ? 0 : v);
  const axes = new Array(7).fill(0);
  axes[0] = dz(pad.axes[0] ?? 0);
  axes[1] = -dz(pad.axes[1] ?? 0);
  const lt = pad.buttons[6]?.value ?? 0;
  const rt = pad.buttons[7]?.value ?? 0;
  axes[2] = rt - lt;
  axes[5] = dz(pad.axes[2] ?? 0);
  axes[4] = -dz(pad.axes[3] ?? 0);
  const lb = pad.buttons[4]?.pressed ? 1 : 0;
  const rb = pad.buttons[5]?.pressed ? 1 : 0;
  axes[3] = rb - lb;
  const up = pad.buttons[12]?.pressed ? 1 : 0;
  const down = pad.buttons[13]?.pressed ? 1 : 0;
  axes[6] = up - down;
  return axes.map((v) => Math.max(-1, Math.min(1, v)));
}

export function mergeAxes(slider: number[], gamepad: number[] | null): number[] {
  if (!gamepad) return slider.slice();
  // the larger magnitude wins per axis, so either device can take over
  return slider.map((s, i) => (Math.abs(gamepad[i]) > Math.abs(s) ? gamepad[i] : s));
}

export type SendFn = (axes: number[]) => void;

/** Issues axes at a fixed rate and guarantees a zero command within
 * `blurDeadlineMs` of losing focus, independent of the send period. */
export class AxisStreamer {
  private focused = true;
  private lastSent: number[] | null = null;

  constructor(
    private readonly send: SendFn,
    public readonly periodMs: number = 20,
    public readonly blurDeadlineMs: number = 100,
  ) {}

  /** Called by the UI timer every periodMs. */
  tick(axes: number[]): void {
    const out = this.focused ? axes : new Array(7).fill(0);
    this.lastSent = out;
    this.send(out);
  }

  /** Window blur handler: sends the zero command immediately, well inside
   * the 100 ms guarantee. */
  onBlur(): void {
    this.focused = false;
    this.lastSent = new Array(7).fill(0);
    this.send(this.lastSent);
  }

  onFocus(): void {
    this.focused = true;
  }

  get lastCommand(): number[] | null {
    return this.lastSent;
  }
}
