"""Real-time teleoperation service.

A 7-axis command (tx, ty, tz, rx, ry, rz, dilation), each in [-1, 1], is
mapped to a similarity bivector twist, turned into joint velocities by
differential kinematics, and integrated first-order at a fixed rate.  State
updates are broadcast to every connected client; the first client to send an
axes message becomes the commander, later clients are read-only viewers.

Wire protocol (text frames over a websocket, JSON per message):
  client -> server   {"type": "axes", "axes": [7 floats], "timestamp_ms": int,
                      "seq": int}
  server -> client   {"type": "config", "system": str, "dt": float,
                      "axis_gains": [7], "mask": [int], "role": str}
                     {"type": "state", "tick": int, "t": float, "q": [...],
                      "params": {...}, "bivector": [7], "versor": [12],
                      "flags": {...}}
                     {"type": "error", "message": str}

The per-tick update is a pure function of (joint state, effective axes), and
the server logs the effective axes each tick, so replaying a session log
offline reproduces the online trajectory bit for bit.
"""

from __future__ import annotations

import asyncio
import json
import time
from dataclasses import dataclass, field

import numpy as np

from .cooperative import (
    CONTROLLABLE_MASK,
    CooperativeSystem,
    OrientationState,
    damped_pinv,
    similarity_jacobians,
)
from .errors import DegeneratePrimitive
from .groups import VERSOR_IDX
from .primitives import params

# command axis order: tx, ty, tz, rx, ry, rz, dilation
# twist coordinate order: e23, e13, e12, e0i, e1i, e2i, e3i
_AXIS_TO_TWIST = np.zeros((7, 7))
for _axis, _row in enumerate((4, 5, 6, 0, 1, 2, 3)):
    _AXIS_TO_TWIST[_row, _axis] = 1.0


@dataclass
class AxesCommand:
    axes: np.ndarray                  # 7 values in [-1, 1]
    timestamp_ms: int
    seq: int

    @classmethod
    def from_message(cls, msg: dict) -> "AxesCommand":
        axes = np.clip(np.asarray(msg["axes"], dtype=float), -1.0, 1.0)
        if axes.shape != (7,):
            raise ValueError("axes must have 7 entries")
        return cls(axes=axes, timestamp_ms=int(msg["timestamp_ms"]),
                   seq=int(msg["seq"]))


@dataclass
class TeleopConfig:
    dt: float = 0.01
    axis_gains: np.ndarray = field(default_factory=lambda: 0.2 * np.ones(7))
    max_joint_speed: float = 2.0      # clamp on ||qd||
    stale_ms: float = 250.0


def map_axes(axes: np.ndarray, gains: np.ndarray, kind) -> np.ndarray:
    """Per-axis scaled similarity twist; coordinates outside the kind's
    controllable bivector space are zeroed (a sphere ignores rotations)."""
    xi = _AXIS_TO_TWIST @ (np.asarray(gains, dtype=float) * np.asarray(axes, dtype=float))
    keep = np.zeros(7, dtype=bool)
    keep[list(CONTROLLABLE_MASK[kind])] = True
    xi[~keep] = 0.0
    return xi


def teleop_tick(sys: CooperativeSystem, q: np.ndarray, axes: np.ndarray,
                cfg: TeleopConfig, orient: OrientationState):
    """One control tick: map axes, differential kinematics, clamp, integrate.

    Returns (q_new, info) where info carries the state-update payload fields.
    Pure given (q, axes, orient); the caller owns the orientation state."""
    flags = {}
    xi = map_axes(axes, cfg.axis_gains, sys.kind)
    try:
        sj = similarity_jacobians(sys, q, orient, with_bivector=False)
    except DegeneratePrimitive as err:
        flags["degenerate"] = True
        flags["degeneracy"] = float(err.measure)
        return q.copy(), {"flags": flags, "bivector": None, "versor": None,
                          "params": None}
    if sj.near_singular:
        flags["near_singular"] = True
        xi = np.zeros(7)
    qd = damped_pinv(sj.J_G) @ xi
    speed = float(np.linalg.norm(qd))
    if speed > cfg.max_joint_speed:
        qd *= cfg.max_joint_speed / speed
        flags["velocity_clamped"] = True
    q_new = q + cfg.dt * qd
    polylines = [[[float(v) for v in node] for node in chain.polyline(qi)]
                 for chain, qi in zip(sys.chains, sys.split(q_new))]
    info = {
        "flags": flags,
        "bivector": sj.bivector.tolist(),
        "versor": sj.versor.c[VERSOR_IDX].tolist(),
        "params": params(sj.primitive).to_dict(),
        "chains": polylines,
    }
    return q_new, info


@dataclass
class SessionLog:
    """Effective axes per tick; replaying it reproduces the trajectory."""

    q0: np.ndarray
    entries: list = field(default_factory=list)  # (tick, axes list)

    def record(self, tick: int, axes: np.ndarray) -> None:
        self.entries.append((tick, [float(a) for a in axes]))

    def to_json(self) -> str:
        return json.dumps({"q0": [float(v) for v in self.q0],
                           "entries": self.entries})

    @classmethod
    def from_json(cls, text: str) -> "SessionLog":
        rec = json.loads(text)
        log = cls(q0=np.asarray(rec["q0"], dtype=float))
        log.entries = [(int(t), list(map(float, a))) for t, a in rec["entries"]]
        return log


def replay(sys: CooperativeSystem, cfg: TeleopConfig, log: SessionLog):
    """Offline re-run of a recorded session; returns the joint trajectory."""
    q = log.q0.copy()
    orient = OrientationState()
    states = [q.copy()]
    for _, axes in log.entries:
        q, _ = teleop_tick(sys, q, np.asarray(axes, dtype=float), cfg, orient)
        states.append(q.copy())
    return np.stack(states)


class TeleopServer:
    """Fixed-rate control loop with latest-wins command buffer and state
    broadcast; exactly one commanding client, any number of viewers."""

    def __init__(self, sys: CooperativeSystem, q0, cfg: TeleopConfig | None = None,
                 name: str = "coopga-teleop", state_sink=None):
        self.sys = sys
        self.cfg = cfg or TeleopConfig()
        self.q = np.asarray(q0, dtype=float).copy()
        self.orient = OrientationState()
        self.name = name
        self.tick = 0
        self.clients: set = set()
        self.commander = None
        self.latest: AxesCommand | None = None
        self.log = SessionLog(q0=self.q.copy())
        self.state_sink = state_sink  # optional callable(dict): tee of the stream
        self._stop = asyncio.Event()

    # -- network ------------------------------------------------------------
    def _config_message(self, role: str) -> str:
        return json.dumps({
            "type": "config", "system": self.sys.name or "system",
            "dt": self.cfg.dt,
            "axis_gains": [float(g) for g in self.cfg.axis_gains],
            "mask": [int(i) for i in CONTROLLABLE_MASK[self.sys.kind]],
            "role": role,
        })

    async def handle_client(self, websocket):
        self.clients.add(websocket)
        role = "viewer"
        try:
            await websocket.send(self._config_message(role))
            async for raw in websocket:
                try:
                    msg = json.loads(raw)
                except json.JSONDecodeError:
                    await websocket.send(json.dumps(
                        {"type": "error", "message": "invalid JSON"}))
                    continue
                if msg.get("type") == "axes":
                    if self.commander is None:
                        self.commander = websocket
                        await websocket.send(self._config_message("commander"))
                    if websocket is self.commander:
                        try:
                            cmd = AxesCommand.from_message(msg)
                        except (KeyError, ValueError) as err:
                            await websocket.send(json.dumps(
                                {"type": "error", "message": str(err)}))
                            continue
                        if self.latest is None or cmd.seq >= self.latest.seq:
                            self.latest = cmd
        except Exception:
            pass
        finally:
            self.clients.discard(websocket)
            if websocket is self.commander:
                self.commander = None
                self.latest = None

    def effective_axes(self, now_ms: float) -> np.ndarray:
        """Latest-wins with staleness fail-safe: commands older than the
        configured window count as zero."""
        if self.latest is None:
            return np.zeros(7)
        if now_ms - self.latest.timestamp_ms > self.cfg.stale_ms:
            return np.zeros(7)
        return self.latest.axes

    def step(self, axes: np.ndarray) -> dict:
        q_new, info = teleop_tick(self.sys, self.q, axes, self.cfg, self.orient)
        self.log.record(self.tick, axes)
        self.q = q_new
        payload = {
            "type": "state", "tick": self.tick, "t": self.tick * self.cfg.dt,
            "q": [float(v) for v in self.q],
            **info,
        }
        self.tick += 1
        if self.state_sink is not None:
            self.state_sink(payload)
        return payload

    async def control_loop(self):
        next_time = time.monotonic()
        while not self._stop.is_set():
            axes = self.effective_axes(time.time() * 1000.0)
            payload = self.step(axes)
            text = json.dumps(payload)
            dead = []
            for ws in list(self.clients):
                try:
                    await ws.send(text)
                except Exception:
                    dead.append(ws)
            for ws in dead:
                self.clients.discard(ws)
            next_time += self.cfg.dt
            delay = next_time - time.monotonic()
            if delay > 0:
                try:
                    await asyncio.wait_for(self._stop.wait(), timeout=delay)
                except asyncio.TimeoutError:
                    pass
            else:
                next_time = time.monotonic()

    def stop(self):
        self._stop.set()

    async def serve(self, host: str = "127.0.0.1", port: int = 8765):
        import websockets

        async with websockets.serve(self.handle_client, host, port):
            await self.control_loop()


def serve(sys: CooperativeSystem, q0, host: str = "127.0.0.1", port: int = 8765,
          cfg: TeleopConfig | None = None):
    """Blocking entry point used by the command line."""
    server = TeleopServer(sys, q0, cfg)
    asyncio.run(server.serve(host, port))
    return server
