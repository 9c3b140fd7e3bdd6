/** Wire protocol of the teleoperation service: JSON text messages over a
 * websocket.  Encoding and decoding are total functions with validation so a
 * malformed frame can never corrupt the panel state. */

export const AXIS_NAMES = ["tx", "ty", "tz", "rx", "ry", "rz", "dilation"] as const;
export type AxisName = (typeof AXIS_NAMES)[number];

export interface AxesMessage {
  type: "axes";
  axes: number[]; // 7 values in [-1, 1]
  timestamp_ms: number;
  seq: number;
}

export interface PrimitiveParams {
  kind: string;
  center?: number[];
  radius?: number;
  normal?: number[];
  direction?: number[];
  endpoints?: number[][];
}

export interface StateMessage {
  type: "state";
  tick: number;
  t: number;
  q: number[];
  params: PrimitiveParams | null;
  bivector: number[] | null;
  versor: number[] | null;
  chains?: number[][][];
  flags: Record<string, unknown>;
}

export interface ConfigMessage {
  type: "config";
  system: string;
  dt: number;
  axis_gains: number[];
  mask: number[];
  role: "viewer" | "commander";
}

export interface ErrorMessage {
  type: "error";
  message: string;
}

export type ServerMessage = StateMessage | ConfigMessage | ErrorMessage;

export function encodeAxes(axes: number[], seq: number, timestampMs: number): string {
  if (axes.length !== 7) throw new Error(`axes must have 7 entries, got ${axes.length}`);
  const clamped = axes.map((a) => Math.max(-1, Math.min(1, a)));
  const msg: AxesMessage = { type: "axes", axes: clamped, timestamp_ms: Math.round(timestampMs), seq };
  return JSON.stringify(msg);
}

function isNumberArray(x: unknown, n?: number): x is number[] {
  return Array.isArray(x) && (n === undefined || x.length === n) &&
    x.every((v) => typeof v === "number" && Number.isFinite(v));
}

export function decodeServerMessage(raw: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const msg = data as Record<string, unknown>;
  switch (msg.type) {
    case "state": {
      if (typeof msg.tick !== "number" || typeof msg.t !== "number") return null;
      if (!isNumberArray(msg.q)) return null;
      const biv = msg.bivector === null ? null : isNumberArray(msg.bivector, 7) ? msg.bivector : null;
      const versor = msg.versor === null ? null : isNumberArray(msg.versor, 12) ? msg.versor : null;
      let chains: number[][][] | undefined;
      if (Array.isArray(msg.chains) && msg.chains.every((c) => Array.isArray(c) && c.every((p) => isNumberArray(p, 3)))) {
        chains = msg.chains as number[][][];
      }
      return {
        type: "state",
        tick: msg.tick,
        t: msg.t,
        q: msg.q,
        params: (msg.params as PrimitiveParams | null) ?? null,
        bivector: biv,
        versor,
        chains,
        flags: (msg.flags as Record<string, unknown>) ?? {},
      };
    }
    case "config": {
      if (typeof msg.system !== "string" || typeof msg.dt !== "number") return null;
      if (!isNumberArray(msg.axis_gains, 7) || !isNumberArray(msg.mask)) return null;
      if (msg.role !== "viewer" && msg.role !== "commander") return null;
      return {
        type: "config",
        system: msg.system,
        dt: msg.dt,
        axis_gains: msg.axis_gains,
        mask: msg.mask,
        role: msg.role,
      };
    }
    case "error":
      return typeof msg.message === "string" ? { type: "error", message: msg.message } : null;
    default:
      return null;
  }
}

export function decodeAxes(raw: string): AxesMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  const msg = data as Record<string, unknown>;
  if (msg?.type !== "axes" || !isNumberArray(msg.axes, 7)) return null;
  if (typeof msg.timestamp_ms !== "number" || typeof msg.seq !== "number") return null;
  return { type: "axes", axes: msg.axes, timestamp_ms: msg.timestamp_ms, seq: msg.seq };
}
