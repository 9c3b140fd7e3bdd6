"""Teleoperation without a network: drive the 16-dof hand's cooperative
sphere with a scripted 7-axis command stream (a dilation pulse closes and
opens the hand), then replay the recorded session log offline and check the
trajectories agree bit for bit."""

import numpy as np

from coopga.cooperative import cooperative_primitive
from coopga.primitives import params
from coopga.robots import LEAP_Q0, leap_like
from coopga.teleop import SessionLog, TeleopConfig, TeleopServer, replay

sys = leap_like()
cfg = TeleopConfig(axis_gains=0.5 * np.ones(7))
server = TeleopServer(sys, LEAP_Q0, cfg)

print(f"{'tick':>5} {'radius':>9}  command")
for tick in range(60):
    axes = np.zeros(7)
    if tick < 25:
        axes[6] = -1.0          # close the hand
    elif tick < 50:
        axes[6] = +1.0          # open it again
    server.step(axes)
    if tick % 10 == 9:
        r = params(cooperative_primitive(sys, server.q)).radius
        print(f"{tick:>5} {r:9.4f}  dilation={axes[6]:+.0f}")

states = replay(leap_like(), cfg, SessionLog.from_json(server.log.to_json()))
print("offline replay bit-identical:", np.array_equal(states[-1], server.q))
