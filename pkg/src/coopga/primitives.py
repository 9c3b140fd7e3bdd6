"""Geometric primitives as outer-product blades of conformal points.

Covers construction with degeneracy checks, metric queries (radius, center,
normal, direction), point projection, the meet, canonical unit primitives, and
the similarity transformation between two primitives of the same kind.

Radius note: the projection of infinity P_inf = (einf | X) X^-1 has norm 1/r
for every round primitive (point pair, circle, sphere); the radius is its
inverse norm.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernel as K
from .algebra import Multivector, embed_point, extract_point, einf, e0
from .errors import AntipodalNormals, DegeneratePoint, DegeneratePrimitive
from .groups import (
    Versor,
    identity_versor,
    make_dilator,
    make_translator,
    rotor_between,
    translator_between,
)

DEGENERACY_TOL = 1e-9


class PrimitiveKind(str, Enum):
    POINT = "point"
    POINT_PAIR = "pointpair"
    LINE = "line"
    CIRCLE = "circle"
    PLANE = "plane"
    SPHERE = "sphere"


ROUND_KINDS = (PrimitiveKind.POINT_PAIR, PrimitiveKind.CIRCLE, PrimitiveKind.SPHERE)
FLAT_KINDS = (PrimitiveKind.LINE, PrimitiveKind.PLANE)

_KIND_FROM_COUNT = {
    (1, False): PrimitiveKind.POINT,
    (2, False): PrimitiveKind.POINT_PAIR,
    (2, True): PrimitiveKind.LINE,
    (3, False): PrimitiveKind.CIRCLE,
    (3, True): PrimitiveKind.PLANE,
    (4, False): PrimitiveKind.SPHERE,
}

KIND_GRADE = {
    PrimitiveKind.POINT: 1,
    PrimitiveKind.POINT_PAIR: 2,
    PrimitiveKind.LINE: 3,
    PrimitiveKind.CIRCLE: 3,
    PrimitiveKind.PLANE: 4,
    PrimitiveKind.SPHERE: 4,
}


@dataclass
class GeometricPrimitive:
    kind: PrimitiveKind
    blade: Multivector
    flat: bool

    def normalized_blade(self) -> Multivector:
        """Blade rescaled so its largest-magnitude coefficient is +1."""
        c = self.blade.c
        i = int(np.argmax(np.abs(c)))
        if abs(c[i]) < 1e-300:
            raise DegeneratePrimitive(self.kind.value, 0.0)
        return Multivector(c / c[i])

    def degeneracy_measure(self) -> float:
        """Scalar that vanishes as the construction points become
        coincident/collinear/coplanar.

        Flats use |blade ~blade|.  For rounds that quantity stays finite as
        e.g. a circle degenerates into a line, so the measure is
        |(blade ^ einf) reverse(blade ^ einf)| instead: the carrier flat of a
        round collapses exactly at degeneracy (and as the radius collapses to
        zero).  Points are null vectors; their measure is the origin
        coefficient."""
        if self.kind is PrimitiveKind.POINT:
            return abs(float(self.blade.c[1]))
        if self.kind in ROUND_KINDS:
            return abs((self.blade ^ einf).norm_squared_signed())
        return abs(self.blade.norm_squared_signed())

    def to_record(self) -> dict:
        rec = {"kind": self.kind.value, "blade": self.blade.c.tolist()}
        try:
            rec["params"] = params(self).to_dict()
        except (DegeneratePrimitive, DegeneratePoint):
            rec["params"] = None
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "GeometricPrimitive":
        kind = PrimitiveKind(rec["kind"])
        return cls(kind, Multivector(np.asarray(rec["blade"])), kind in FLAT_KINDS)


@dataclass
class PrimitiveParams:
    kind: PrimitiveKind
    center: np.ndarray | None = None
    radius: float | None = None
    normal: np.ndarray | None = None
    direction: np.ndarray | None = None
    endpoints: tuple[np.ndarray, np.ndarray] | None = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value}
        if self.center is not None:
            out["center"] = [float(v) for v in self.center]
        if self.radius is not None:
            out["radius"] = float(self.radius)
        if self.normal is not None:
            out["normal"] = [float(v) for v in self.normal]
        if self.direction is not None:
            out["direction"] = [float(v) for v in self.direction]
        if self.endpoints is not None:
            out["endpoints"] = [[float(v) for v in p] for p in self.endpoints]
        return out


def _normalize_point(P: Multivector) -> Multivector:
    w = P.c[1]
    if abs(w) < 1e-12:
        raise DegeneratePoint("cannot normalize a point at infinity")
    return Multivector(P.c / w)


def construct(points: list[Multivector], flat: bool = False) -> GeometricPrimitive:
    """Outer product of conformal points (wedged with einf when flat)."""
    n = len(points)
    if (n, flat) not in _KIND_FROM_COUNT:
        raise ValueError(f"no primitive for {n} points with flat={flat}")
    kind = _KIND_FROM_COUNT[(n, flat)]
    blade = _normalize_point(points[0])
    for P in points[1:]:
        blade = blade ^ _normalize_point(P)
    if flat:
        blade = blade ^ einf
    prim = GeometricPrimitive(kind, blade, flat)
    measure = prim.degeneracy_measure()
    if measure < DEGENERACY_TOL:
        raise DegeneratePrimitive(kind.value, measure)
    return prim


def incidence_residual(X: GeometricPrimitive, P: Multivector) -> float:
    """Norm of X ^ P for the scale-normalized blade and point."""
    w = _normalize_point(P)
    blade = X.normalized_blade()
    return float(np.max(np.abs(K.op(blade.c, w.c))))


def project_point(P: Multivector, X: GeometricPrimitive) -> Multivector:
    """Closest point of X to the conformal point P.

    For flats the subspace projection (P | X) X^-1 already lies on the
    primitive.  For rounds that formula lands on the carrier span, so the
    on-primitive point is recovered by meeting X with the radial flat through
    P (line through the center for point pairs and spheres, axial plane for
    circles) and taking the nearer intersection point.
    """
    if X.degeneracy_measure() < DEGENERACY_TOL:
        raise DegeneratePrimitive(X.kind.value, X.degeneracy_measure())
    P = _normalize_point(P)

    if X.kind in FLAT_KINDS:
        raw = (P | X.blade) * X.blade.inverse()
        pt = raw.grade(1)
        if abs(pt.c[1]) < 1e-12:
            raise DegeneratePoint("projection has no finite point part")
        return embed_point(pt.euclidean() / pt.c[1])

    if X.kind is PrimitiveKind.POINT:
        return _normalize_point(X.blade)

    x = extract_point(P)
    c = extract_point(center(X))
    if X.kind is PrimitiveKind.CIRCLE:
        n = circle_normal(X).euclidean()
        radial = x - c - np.dot(x - c, n) * n
        if np.linalg.norm(radial) < 1e-12:
            raise DegeneratePoint("projection onto a circle from its axis")
        cut = construct([embed_point(c), embed_point(c + n), P], flat=True)
    else:
        if np.linalg.norm(x - c) < 1e-12:
            raise DegeneratePoint("projection from the center of a round")
        cut = construct([embed_point(c), P], flat=True)
    pair = GeometricPrimitive(PrimitiveKind.POINT_PAIR, meet(X, cut), False)
    p = params(pair)
    ends = p.endpoints
    dists = [np.linalg.norm(e - x) for e in ends]
    return embed_point(ends[int(np.argmin(dists))])


def meet(X1: GeometricPrimitive | Multivector, X2: GeometricPrimitive | Multivector) -> Multivector:
    """Intersection blade (X1* ^ X2*)*, defined up to scale; total."""
    a = X1.blade if isinstance(X1, GeometricPrimitive) else X1
    b = X2.blade if isinstance(X2, GeometricPrimitive) else X2
    return (a.dual() ^ b.dual()).dual()


def infinity_projection(X: GeometricPrimitive | Multivector) -> Multivector:
    blade = X.blade if isinstance(X, GeometricPrimitive) else X
    return (einf | blade) * blade.inverse()


def radius(X: GeometricPrimitive) -> float:
    """Radius of a round primitive (half the separation for point pairs)."""
    if X.kind not in ROUND_KINDS:
        raise ValueError(f"radius undefined for {X.kind.value}")
    n = infinity_projection(X).norm()
    if n < DEGENERACY_TOL:
        raise DegeneratePrimitive(X.kind.value, n)
    return 1.0 / n


def center(X: GeometricPrimitive) -> Multivector:
    """Center of a round primitive: reflect infinity in the blade, X einf X."""
    if X.kind not in ROUND_KINDS and X.kind is not PrimitiveKind.POINT:
        raise ValueError(f"center undefined for {X.kind.value}")
    if X.kind is PrimitiveKind.POINT:
        return _normalize_point(X.blade)
    raw = X.blade * einf * X.blade
    return embed_point(extract_point(raw.grade(1)))


def plane_normal(E: GeometricPrimitive | Multivector) -> Multivector:
    """Unit Euclidean normal of a plane blade: the dual with its einf
    component removed, then normalized."""
    blade = E.blade if isinstance(E, GeometricPrimitive) else E
    d = blade.dual()
    n = d.euclidean()
    nn = np.linalg.norm(n)
    if nn < DEGENERACY_TOL:
        raise DegeneratePrimitive("plane", nn)
    return Multivector.from_euclidean(n / nn)


def plane_offset(E: GeometricPrimitive | Multivector) -> float:
    """Signed distance of the plane from the origin along its unit normal."""
    blade = E.blade if isinstance(E, GeometricPrimitive) else E
    d = blade.dual()
    n = d.euclidean()
    nn = np.linalg.norm(n)
    if nn < DEGENERACY_TOL:
        raise DegeneratePrimitive("plane", nn)
    return float(d["ei"] / nn)


def circle_normal(X: GeometricPrimitive | Multivector) -> Multivector:
    """Unit normal of the plane a circle lies in (orientation follows the
    blade sign, i.e. the order of the construction points)."""
    blade = X.blade if isinstance(X, GeometricPrimitive) else X
    return plane_normal(blade ^ einf)


def direction(X: GeometricPrimitive) -> np.ndarray:
    """Unit direction of a line or point pair (from blade orientation)."""
    if X.kind is PrimitiveKind.LINE:
        u = (einf | X.blade).c[[K.BLADE_INDEX["e1i"], K.BLADE_INDEX["e2i"], K.BLADE_INDEX["e3i"]]]
    elif X.kind is PrimitiveKind.POINT_PAIR:
        u = (einf | X.blade).euclidean()
    else:
        raise ValueError(f"direction undefined for {X.kind.value}")
    nn = np.linalg.norm(u)
    if nn < DEGENERACY_TOL:
        raise DegeneratePrimitive(X.kind.value, nn)
    return u / nn


def params(X: GeometricPrimitive) -> PrimitiveParams:
    """Explicit parameterization (center, radius, normal, ...) of a blade."""
    kind = X.kind
    if kind is PrimitiveKind.POINT:
        return PrimitiveParams(kind, center=extract_point(_normalize_point(X.blade)))
    if kind is PrimitiveKind.POINT_PAIR:
        c = extract_point(center(X))
        r = radius(X)
        u = direction(X)
        return PrimitiveParams(kind, center=c, radius=r, direction=u,
                               endpoints=(c + r * u, c - r * u))
    if kind is PrimitiveKind.LINE:
        anchor = extract_point(project_point(e0, X))
        return PrimitiveParams(kind, center=anchor, direction=direction(X))
    if kind is PrimitiveKind.CIRCLE:
        return PrimitiveParams(kind, center=extract_point(center(X)), radius=radius(X),
                               normal=circle_normal(X).euclidean())
    if kind is PrimitiveKind.PLANE:
        n = plane_normal(X).euclidean()
        return PrimitiveParams(kind, center=plane_offset(X) * n, normal=n)
    if kind is PrimitiveKind.SPHERE:
        return PrimitiveParams(kind, center=extract_point(center(X)), radius=radius(X))
    raise ValueError(kind)


def unit_primitive(kind: PrimitiveKind) -> GeometricPrimitive:
    """Canonical primitive at the origin the cooperative similarity versor is
    anchored to.  Point pairs and lines run along +e2; circle and plane
    normals are +e3; rounds have unit radius."""
    if kind is PrimitiveKind.POINT:
        return GeometricPrimitive(kind, embed_point([0, 0, 0]), False)
    if kind is PrimitiveKind.POINT_PAIR:
        return construct([embed_point([0, 1, 0]), embed_point([0, -1, 0])])
    if kind is PrimitiveKind.LINE:
        return construct([embed_point([0, 1, 0]), embed_point([0, 0, 0])], flat=True)
    if kind is PrimitiveKind.CIRCLE:
        return construct([embed_point([1, 0, 0]), embed_point([0, 1, 0]),
                          embed_point([-1, 0, 0])])
    if kind is PrimitiveKind.PLANE:
        return construct([embed_point([0, 0, 0]), embed_point([1, 0, 0]),
                          embed_point([0, 1, 0])], flat=True)
    if kind is PrimitiveKind.SPHERE:
        return construct([embed_point([1, 0, 0]), embed_point([0, 1, 0]),
                          embed_point([0, 0, 1]), embed_point([-1, 0, 0])])
    raise ValueError(kind)


def _axis_vector(X: GeometricPrimitive) -> Multivector:
    """Unit orientation vector entering the rotor factor (normal for circles
    and planes, direction for lines and point pairs)."""
    if X.kind in (PrimitiveKind.CIRCLE,):
        return circle_normal(X)
    if X.kind is PrimitiveKind.PLANE:
        return plane_normal(X)
    return Multivector.from_euclidean(direction(X))


def similarity_between(X1: GeometricPrimitive, X2: GeometricPrimitive) -> Versor:
    """Similarity versor V with V X1 ~V proportional to X2.

    Returns the canonical T*R*D construction: translator from centers (or
    anchor points for flats), shortest-arc rotor between orientation vectors,
    dilator from the radius ratio.  Deterministic; orientation must agree
    (antipodal orientations raise AntipodalNormals).
    """
    if X1.kind is not X2.kind:
        raise ValueError(f"kind mismatch: {X1.kind.value} vs {X2.kind.value}")
    kind = X1.kind
    for X in (X1, X2):
        m = X.degeneracy_measure()
        if m < DEGENERACY_TOL:
            raise DegeneratePrimitive(kind.value, m)

    if kind is PrimitiveKind.POINT:
        return translator_between(_normalize_point(X1.blade), _normalize_point(X2.blade))

    if kind in (PrimitiveKind.LINE, PrimitiveKind.PLANE):
        R = rotor_between(_axis_vector(X1), _axis_vector(X2))
        a1 = project_point(e0, X1)
        a2 = project_point(e0, X2)
        T = translator_between(R.apply(a1), a2)
        return T.compose(R)

    if kind is PrimitiveKind.SPHERE:
        D = make_dilator(radius(X2) / radius(X1))
        T = translator_between(D.apply(center(X1)), center(X2))
        return T.compose(D)

    # point pair / circle: full T*R*D
    D = make_dilator(radius(X2) / radius(X1))
    R = rotor_between(_axis_vector(X1), _axis_vector(X2))
    RD = R.compose(D)
    T = translator_between(RD.apply(center(X1)), center(X2))
    return T.compose(RD)


def sandwich_residual(V: Versor, X1: GeometricPrimitive, X2: GeometricPrimitive) -> float:
    """Distance between normalized blades of V X1 ~V and X2."""
    img = GeometricPrimitive(X1.kind, V.apply(X1.blade), X1.flat)
    a = img.normalized_blade()
    b = X2.normalized_blade()
    return float(np.max(np.abs(a.c - b.c)))


def apply_to_primitive(V: Versor, X: GeometricPrimitive) -> GeometricPrimitive:
    return GeometricPrimitive(X.kind, V.apply(X.blade), X.flat)
