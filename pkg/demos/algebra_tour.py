"""A quick tour of the Cl(4,1) toolkit: products, conformal points, geometric
primitives, meets, and the five transformation groups."""

import numpy as np

from coopga.algebra import Multivector, e0, e1, e2, e3, einf, embed_point, extract_point
from coopga.groups import decompose_similarity, log_versor, make_dilator, make_rotor, make_translator
from coopga.primitives import GeometricPrimitive, PrimitiveKind, construct, meet, params, project_point

print("== null basis identities")
print("e0 * e0       =", e0 * e0)
print("einf * einf   =", einf * einf)
print("e0 * einf     =", e0 * einf, "   (scalar part -1 plus the Minkowski plane)")

print("\n== conformal points")
P = embed_point([1.0, 2.0, 0.5])
print("P(1,2,0.5)    =", P)
print("null check    =", P.norm_squared_signed())
print("round trip    =", extract_point(P))

print("\n== a circle through three points")
C = construct([embed_point(p) for p in ([1, 0, 1], [0, 1, 1], [-1, 0, 1])])
print("params        =", params(C).to_dict())

print("\n== the meet: unit sphere with the plane z = 0.5")
S = construct([embed_point(v) for v in ([1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, 0, 0])])
E = construct([embed_point(v) for v in ([0, 0, 0.5], [1, 0, 0.5], [0, 1, 0.5])], flat=True)
ring = GeometricPrimitive(PrimitiveKind.CIRCLE, meet(S, E), False)
print("intersection  =", params(ring).to_dict())
print("(a circle of radius sqrt(1 - 0.25) =", np.sqrt(0.75), ")")

print("\n== projection of a point onto the sphere")
q = project_point(embed_point([2.0, 1.0, 0.3]), S)
print("projected     =", extract_point(q), " |x| =", np.linalg.norm(extract_point(q)))

print("\n== versors: translate, rotate, dilate")
V = make_translator([0, 0, 1]).compose(make_rotor([0, 0, 1], np.pi / 4)).compose(make_dilator(2.0))
img = V.apply(embed_point([1, 0, 0]))
print("T R D applied to (1,0,0):", extract_point(img))
T, R, D = decompose_similarity(V)
print("recovered translation    :", log_versor(T).coords[4:7])
print("recovered rotation coords:", log_versor(R).coords[:3])
print("recovered scale          :", np.exp(log_versor(D).coords[3]))
