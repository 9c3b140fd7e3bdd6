"""Geometric nullspace: one arm of the 3-arm circle formation slides its end
point along the circle toward a target while the cooperative similarity
transformation stays fixed; running the same task unprojected visibly moves
the circle."""

from coopga.sim import nullspace_experiment

res = nullspace_experiment(projected=True)
print("projected into the nullspace:")
print(f"  reach error improved by {res['reach_improvement'] * 100:.1f}%")
print(f"  max similarity distance  {res['max_similarity_distance']:.2e}")

res = nullspace_experiment(projected=False, duration=1.5)
print("unprojected (for contrast):")
print(f"  max similarity distance  {res['max_similarity_distance']:.2e}")
