/** Panel state and its pure reducers.  The render layer reads this; socket
 * callbacks and input handlers are the only writers.  The panel never
 * predicts: the scene reflects only received state updates. */

import { ConfigMessage, ServerMessage, StateMessage } from "./protocol.js";

export type Connection = "disconnected" | "connecting" | "connected";

export interface PanelState {
  connection: Connection;
  config: ConfigMessage | null;
  lastState: StateMessage | null;
  lastError: string | null;
  commandedAxes: number[];
  sendSeq: number;
  receivedStates: number;
  staleTicks: number;
}

export function initialState(): PanelState {
  return {
    connection: "disconnected",
    config: null,
    lastState: null,
    lastError: null,
    commandedAxes: new Array(7).fill(0),
    sendSeq: 0,
    receivedStates: 0,
    staleTicks: 0,
  };
}

export function onConnecting(s: PanelState): PanelState {
  return { ...initialState(), connection: "connecting" };
}

export function onOpen(s: PanelState): PanelState {
  return { ...s, connection: "connected", lastError: null };
}

export function onClose(s: PanelState): PanelState {
  // axes are zeroed so a reconnect never replays a stale command
  return { ...s, connection: "disconnected", commandedAxes: new Array(7).fill(0) };
}

export function onMessage(s: PanelState, msg: ServerMessage): PanelState {
  switch (msg.type) {
    case "config":
      return { ...s, config: msg };
    case "state": {
      const stale = s.lastState !== null && msg.tick <= s.lastState.tick;
      return stale
        ? { ...s, staleTicks: s.staleTicks + 1 }
        : { ...s, lastState: msg, receivedStates: s.receivedStates + 1 };
    }
    case "error":
      return { ...s, lastError: msg.message };
  }
}

export function setAxis(s: PanelState, index: number, value: number): PanelState {
  const axes = s.commandedAxes.slice();
  axes[index] = Math.max(-1, Math.min(1, value));
  return { ...s, commandedAxes: axes };
}

export function zeroAxes(s: PanelState): PanelState {
  return { ...s, commandedAxes: new Array(7).fill(0) };
}

export function nextSeq(s: PanelState): [PanelState, number] {
  return [{ ...s, sendSeq: s.sendSeq + 1 }, s.sendSeq + 1];
}
