/** Browser wiring: websocket client, sliders, gamepad polling, canvas
 * renderer.  All logic lives in the imported pure modules; this file only
 * touches the DOM. */

import { AxisStreamer, gamepadToAxes, mergeAxes } from "./input.js";
import { AXIS_NAMES, decodeServerMessage, encodeAxes, StateMessage } from "./protocol.js";
import { Camera, defaultCamera, primitiveWireframe, projectPolyline, Vec3 } from "./projection.js";
import * as state from "./state.js";

const params = new URLSearchParams(window.location.search);
const url = params.get("url") ?? `ws://${window.location.hostname || "127.0.0.1"}:8765`;

let panel = state.initialState();
let socket: WebSocket | null = null;
const cam: Camera = defaultCamera();

const root = document.getElementById("panel")!;
const canvas = document.getElementById("view") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const statusEl = document.getElementById("status")!;
const rateEl = document.getElementById("rate")!;
const flagsEl = document.getElementById("flags")!;

const sliders: HTMLInputElement[] = AXIS_NAMES.map((name, i) => {
  const row = document.createElement("div");
  row.className = "axis-row";
  const label = document.createElement("label");
  label.textContent = name;
  const slider = document.createElement("input");
  slider.type = "range";
  slider.min = "-1";
  slider.max = "1";
  slider.step = "0.01";
  slider.value = "0";
  slider.addEventListener("input", () => {
    panel = state.setAxis(panel, i, parseFloat(slider.value));
  });
  slider.addEventListener("dblclick", () => {
    slider.value = "0";
    panel = state.setAxis(panel, i, 0);
  });
  const value = document.createElement("span");
  value.className = "axis-value";
  row.append(label, slider, value);
  root.append(row);
  return slider;
});

function syncSliders(): void {
  sliders.forEach((s, i) => {
    const v = panel.commandedAxes[i];
    if (Math.abs(parseFloat(s.value) - v) > 1e-9) s.value = String(v);
    (s.nextElementSibling as HTMLElement).textContent = v.toFixed(2);
  });
}

const streamer = new AxisStreamer((axes) => {
  if (socket?.readyState === WebSocket.OPEN) {
    const [next, seq] = state.nextSeq(panel);
    panel = next;
    socket.send(encodeAxes(axes, seq, Date.now()));
  }
});

window.addEventListener("blur", () => streamer.onBlur());
window.addEventListener("focus", () => streamer.onFocus());

function connect(): void {
  panel = state.onConnecting(panel);
  socket = new WebSocket(url);
  socket.onopen = () => {
    panel = state.onOpen(panel);
  };
  socket.onclose = () => {
    panel = state.onClose(panel);
    setTimeout(connect, 1000);
  };
  socket.onmessage = (ev) => {
    const msg = decodeServerMessage(String(ev.data));
    if (msg) panel = state.onMessage(panel, msg);
  };
}

connect();

// command stream at 50 Hz
setInterval(() => {
  const pads = navigator.getGamepads ? navigator.getGamepads() : [];
  const pad = pads && pads[0] ? gamepadToAxes(pads[0]) : null;
  streamer.tick(mergeAxes(panel.commandedAxes, pad));
}, streamer.periodMs);

// camera orbit with mouse drag, zoom with wheel
let dragging = false;
let lastXY = [0, 0];
canvas.addEventListener("mousedown", (e) => {
  dragging = true;
  lastXY = [e.clientX, e.clientY];
});
window.addEventListener("mouseup", () => (dragging = false));
window.addEventListener("mousemove", (e) => {
  if (!dragging) return;
  cam.azimuth -= (e.clientX - lastXY[0]) * 0.01;
  cam.elevation = Math.max(-1.4, Math.min(1.4, cam.elevation + (e.clientY - lastXY[1]) * 0.01));
  lastXY = [e.clientX, e.clientY];
});
canvas.addEventListener("wheel", (e) => {
  cam.distance = Math.max(0.5, Math.min(30, cam.distance * Math.exp(e.deltaY * 0.001)));
  e.preventDefault();
});

function drawPolyline(points: Vec3[], color: string, width: number): void {
  const projected = projectPolyline(points, cam);
  const w = canvas.width;
  const h = canvas.height;
  const scale = Math.min(w, h) / 2;
  ctx.strokeStyle = color;
  ctx.lineWidth = width;
  ctx.beginPath();
  let pen = false;
  for (const p of projected) {
    if (!p) {
      pen = false;
      continue;
    }
    const x = w / 2 + p[0] * scale;
    const y = h / 2 - p[1] * scale;
    if (pen) ctx.lineTo(x, y);
    else ctx.moveTo(x, y);
    pen = true;
  }
  ctx.stroke();
}

function render(): void {
  syncSliders();
  const st: StateMessage | null = panel.lastState;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  // ground grid
  for (let i = -3; i <= 3; i++) {
    drawPolyline([[i, -3, 0], [i, 3, 0]], "#233", 1);
    drawPolyline([[-3, i, 0], [3, i, 0]], "#233", 1);
  }
  if (st) {
    for (const chain of st.chains ?? []) {
      drawPolyline(chain as Vec3[], "#8bd", 2.5);
      for (const p of chain) drawPolyline([[p[0], p[1], p[2]], [p[0], p[1], p[2] + 0.001]], "#cef", 5);
    }
    if (st.params) {
      const singular = Boolean(st.flags["near_singular"] || st.flags["degenerate"]);
      for (const line of primitiveWireframe(st.params)) {
        drawPolyline(line, singular ? "#f66" : "#6f9", 2);
      }
    }
  }
  statusEl.textContent = `${panel.connection}${panel.config ? ` (${panel.config.role}, ${panel.config.system})` : ""}`;
  statusEl.className = panel.connection;
  rateEl.textContent = st ? `tick ${st.tick}  t=${st.t.toFixed(2)}s  states ${panel.receivedStates}` : "waiting for state";
  const flags = st ? Object.keys(st.flags).filter((k) => st.flags[k]) : [];
  flagsEl.textContent = panel.lastError ? `error: ${panel.lastError}` : flags.join(" ") || "nominal";
  flagsEl.className = flags.length || panel.lastError ? "warn" : "";
  requestAnimationFrame(render);
}

requestAnimationFrame(render);
