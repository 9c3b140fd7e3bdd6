"""iLQR reaching for the 3-arm circle formation: a contracted initial circle
grows to the nominal one, so the dilation component of the task bivector is
necessarily nonzero along the trajectory (for a plane target it is zero)."""

import numpy as np

from coopga.sim import reaching_experiment

for kind in ("circle", "plane"):
    res = reaching_experiment(kind)
    sol = res["solution"]
    print(f"== {kind} reaching")
    print(f"  converged {sol.converged} in {sol.iterations} iterations, "
          f"terminal |B_e| = {sol.terminal_norm:.2e}")
    if res["initial_params"].get("radius"):
        print(f"  radius {res['initial_params']['radius']:.3f} -> "
              f"{res['target_params']['radius']:.3f}")
    print(f"  max |dilation row| of the bivector command: {res['dilation_row_max']:.2e}")
    biv = res["bivector_commands"]
    head = np.array2string(biv[0], precision=3, suppress_small=True)
    print(f"  initial error bivector: {head}")
