"""Geometric singularity: three fully-actuated points are driven toward a
collinear arrangement.  The circle's radius grows without bound, the
manipulability spectrum collapses, and the degeneracy guard finally raises."""

import numpy as np

from coopga.sim import singularity_sweep

sw = singularity_sweep()
print(f"{'radius':>12} {'min manip eig':>14} {'degeneracy':>12}")
for r, e, d in zip(sw["radii"][::8], sw["min_eigs"][::8], sw["degeneracies"][::8]):
    print(f"{r:12.3f} {e:14.3e} {d:12.3e}")
print("...")
print(f"{sw['radii'][-1]:12.1f} {sw['min_eigs'][-1]:14.3e} {sw['degeneracies'][-1]:12.3e}")
print("DegeneratePrimitive raised:", sw["degenerate_raised"])
