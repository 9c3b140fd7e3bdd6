"""Cooperative task space of up to four parallel kinematic chains.

The end-effector points of the chains form a cooperative geometric primitive
X_c(q); the cooperative similarity versor V_Sc(q) carries the canonical unit
primitive onto X_c(q).  This module evaluates both, their analytic / geometric /
bivector Jacobians, the controllable bivector masks, the nullspace projector,
and the similarity manipulability.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernel as K
from .algebra import Multivector, MultivectorJacobian
from .calculus import MVJet, SJet
from .chains import KinematicChain
from .errors import DegeneratePrimitive, SingularManipulability
from .groups import (
    SIM_BIVECTOR_BASIS,
    VERSOR_IDX,
    GroupBivector,
    Versor,
    coords_to_bivector,
    log_versor,
)
from .primitives import (
    GeometricPrimitive,
    PrimitiveKind,
    construct,
    similarity_between,
    unit_primitive,
)

PK = PrimitiveKind

KIND_CHAIN_COUNT = {
    PK.POINT: 1, PK.POINT_PAIR: 2, PK.LINE: 2,
    PK.CIRCLE: 3, PK.PLANE: 3, PK.SPHERE: 4,
}

# controllable similarity bivector coordinates per kind, in the coordinate
# order (e23, e13, e12, e0i, e1i, e2i, e3i), w.r.t. the cooperative versor
CONTROLLABLE_MASK = {
    PK.POINT: (4, 5, 6),
    PK.POINT_PAIR: (0, 2, 3, 4, 5, 6),
    PK.LINE: (0, 2, 4, 6),
    PK.CIRCLE: (0, 1, 3, 4, 5, 6),
    PK.PLANE: (0, 1, 6),
    PK.SPHERE: (3, 4, 5, 6),
}

_EUCLID_ROWS = np.array([2, 3, 4])
_EINF = K.blade("ei")
_E0 = K.blade("e0")
_ONE = np.zeros(K.DIM)
_ONE[0] = 1.0
_DIL_BLADE = coords_to_bivector(np.eye(7)[3])
_AXIS_U = {PK.CIRCLE: K.blade("e3"), PK.PLANE: K.blade("e3"),
           PK.POINT_PAIR: K.blade("e2"), PK.LINE: K.blade("e2")}
_ORIENTED_KINDS = frozenset(_AXIS_U)

# transposed product matrices for the constant operands of the hot pipeline
_LC_EINF_LT = K.left_matrix(_EINF, "lc").T      # einf | X
_LC_E0_LT = K.left_matrix(_E0, "lc").T          # e0 | X
_GP_EINF_RT = K.right_matrix(_EINF, "gp").T     # X * einf
_OP_EINF_RT = K.right_matrix(_EINF, "op").T     # X ^ einf
_GP_AXIS_RT = {k: K.right_matrix(v, "gp").T for k, v in _AXIS_U.items()}
_LINE_DIR_ROWS = np.array([K.BLADE_INDEX["e1i"], K.BLADE_INDEX["e2i"], K.BLADE_INDEX["e3i"]])


@dataclass
class CooperativeSystem:
    """1-4 parallel chains sharing a world frame, plus the primitive kind the
    end-effector points form."""

    chains: list[KinematicChain]
    kind: PrimitiveKind
    name: str = ""

    def __post_init__(self):
        expected = KIND_CHAIN_COUNT[self.kind]
        if len(self.chains) != expected:
            raise ValueError(
                f"{self.kind.value} needs {expected} chains, got {len(self.chains)}")

    @property
    def flat(self) -> bool:
        return self.kind in (PK.LINE, PK.PLANE)

    @property
    def dof(self) -> int:
        return sum(c.dof for c in self.chains)

    def slices(self) -> list[slice]:
        out, start = [], 0
        for c in self.chains:
            out.append(slice(start, start + c.dof))
            start += c.dof
        return out

    def split(self, q: np.ndarray) -> list[np.ndarray]:
        q = np.asarray(q, dtype=float)
        if q.shape != (self.dof,):
            raise ValueError(f"expected {self.dof} joint values, got {q.shape}")
        return [q[s] for s in self.slices()]

    def to_record(self) -> dict:
        return {
            "schema": "coopga/system/v1",
            "name": self.name,
            "primitive": self.kind.value,
            "chains": [c.to_record() for c in self.chains],
        }

    @classmethod
    def from_record(cls, rec: dict) -> "CooperativeSystem":
        if rec.get("schema") != "coopga/system/v1":
            raise ValueError(f"unsupported system schema: {rec.get('schema')!r}")
        return cls([KinematicChain.from_record(c) for c in rec["chains"]],
                   PrimitiveKind(rec["primitive"]), name=rec.get("name", ""))


@dataclass
class OrientationState:
    """Continuity memory for the normal/direction sign across a trajectory.

    Circle normals (and line/pointpair directions) flip with the blade sign;
    across consecutive evaluations the sign maximizing the dot product with
    the previous axis is kept, preventing versor sign flips mid-run.  The
    first evaluation is referenced against the canonical unit-primitive axis,
    which also keeps the rotor construction away from its antipodal pole.
    """

    reference_axis: np.ndarray | None = None
    flips: int = 0

    def pick_sign(self, axis: np.ndarray, default_ref: np.ndarray) -> float:
        ref = self.reference_axis if self.reference_axis is not None else default_ref
        sign = 1.0
        if float(ref @ axis) < 0.0:
            sign = -1.0
            self.flips += 1
        self.reference_axis = sign * axis
        return sign


def end_effector_points(sys: CooperativeSystem, q) -> list[Multivector]:
    return [c.end_effector_point(qi) for c, qi in zip(sys.chains, sys.split(q))]


def cooperative_primitive(sys: CooperativeSystem, q) -> GeometricPrimitive:
    """Outer product of the chains' end-effector points (with einf when flat)."""
    return construct(end_effector_points(sys, q), flat=sys.flat)


def _primitive_value_and_jacobian(sys: CooperativeSystem, q):
    points, jacs = [], []
    for c, qi in zip(sys.chains, sys.split(q)):
        P, JP = c.point_with_jacobian(qi)
        points.append(P.c)
        jacs.append(JP)
    n = len(points)
    prefix = [None] * n  # prefix[i] = P_0 ^ ... ^ P_{i-1}
    acc = _ONE
    for i in range(n):
        prefix[i] = acc
        acc = K.op(acc, points[i])
    suffix = [None] * n  # suffix[i] = P_{i+1} ^ ... ^ (einf)
    acc = _EINF if sys.flat else _ONE
    for i in range(n - 1, -1, -1):
        suffix[i] = acc
        acc = K.op(points[i], acc)
    value = acc  # full wedge
    blocks = []
    for i in range(n):
        block = K.gp_mj(prefix[i], jacs[i], "op")
        block = K.gp_jm(block, suffix[i], "op")
        blocks.append(block)
    return value, np.concatenate(blocks, axis=1)


def cooperative_primitive_jacobian(sys: CooperativeSystem, q) -> MultivectorJacobian:
    """Columnwise derivative of the cooperative primitive w.r.t. the stacked
    joint vector; columns of chain i only touch the i-th wedge factor."""
    value, jac = _primitive_value_and_jacobian(sys, q)
    prim = GeometricPrimitive(sys.kind, Multivector(value), sys.flat)
    if prim.degeneracy_measure() < 1e-9:
        raise DegeneratePrimitive(sys.kind.value, prim.degeneracy_measure())
    return MultivectorJacobian(jac)


def _axis_of_blade(kind: PrimitiveKind, c: np.ndarray) -> np.ndarray:
    """Unit normal (circle/plane) or direction (pointpair/line) of a blade."""
    if kind in (PK.CIRCLE, PK.PLANE):
        blade = K.op(c, _EINF) if kind is PK.CIRCLE else c
        v = K.dual(blade)[_EUCLID_ROWS]
    elif kind is PK.POINT_PAIR:
        v = K.lc(_EINF, c)[_EUCLID_ROWS]
    else:  # line
        v = K.lc(_EINF, c)[[K.BLADE_INDEX["e1i"], K.BLADE_INDEX["e2i"], K.BLADE_INDEX["e3i"]]]
    n = np.linalg.norm(v)
    if n < 1e-12:
        raise DegeneratePrimitive(kind.value, n)
    return v / n


def _oriented_sign(sys: CooperativeSystem, blade_c: np.ndarray,
                   orient: OrientationState | None) -> float:
    if sys.kind not in _ORIENTED_KINDS:
        return 1.0
    axis = _axis_of_blade(sys.kind, blade_c)
    ref = _AXIS_U[sys.kind][_EUCLID_ROWS]
    if orient is None:
        # no memory: keep the construction orientation unless it is (nearly)
        # antipodal to the unit axis, where the rotor would be undefined
        return -1.0 if float(ref @ axis) < -1.0 + 1e-9 else 1.0
    return orient.pick_sign(axis, ref)


def cooperative_similarity(sys: CooperativeSystem, q,
                           orient: OrientationState | None = None) -> Versor:
    """Similarity versor carrying the canonical unit primitive onto X_c(q)."""
    prim = cooperative_primitive(sys, q)
    sign = _oriented_sign(sys, prim.blade.c, orient)
    oriented = GeometricPrimitive(sys.kind, Multivector(sign * prim.blade.c), sys.flat)
    V = similarity_between(unit_primitive(sys.kind), oriented)
    return Versor("S", V.mv)


# -- similarity versor as a jet ------------------------------------------------


def _line_direction_jet(X: MVJet) -> MVJet:
    """Direction of a line blade, remapped onto Euclidean vector rows."""
    d = MVJet(np.zeros(K.DIM), np.zeros_like(X.j))
    contraction = X.lmul_const(_LC_EINF_LT)
    d.v[_EUCLID_ROWS] = contraction.v[_LINE_DIR_ROWS]
    d.j[_EUCLID_ROWS] = contraction.j[_LINE_DIR_ROWS]
    return d


def _dilator_jet(beta: SJet, m: int) -> MVJet:
    ch, sh = beta.cosh_half(), beta.sinh_half()
    v = -sh.v * _DIL_BLADE
    v[0] += ch.v
    j = np.outer(-_DIL_BLADE, sh.g)
    j[0] += ch.g
    return MVJet(v, j)


def _similarity_versor_jet(kind: PrimitiveKind, X: MVJet) -> MVJet:
    """V(X) with V X_u ~V proportional to X, differentiated through the
    radius/axis/center constructions (the unit primitive is constant, sits at
    the origin, has unit radius, and axis e3 or e2)."""
    m = X.m

    # translator from the center (rounds) or the origin projection (flats)
    if kind is PK.POINT:
        anchor = X.normalized_point()
    elif kind in (PK.LINE, PK.PLANE):
        Xinv = X.inverse()
        anchor = (X.lmul_const(_LC_E0_LT) * Xinv).grade(1).normalized_point()
    else:
        anchor = (X.rmul_const(_GP_EINF_RT) * X).grade(1).normalized_point()
    t = anchor.select(_EUCLID_ROWS)
    T = t.rmul_const(_OP_EINF_RT) * (-0.5)
    T.v[0] += 1.0
    V = T

    # shortest-arc rotor from the canonical axis to the blade's axis
    if kind in _ORIENTED_KINDS:
        if kind is PK.CIRCLE:
            axis_raw = X.rmul_const(_OP_EINF_RT).dual().select(_EUCLID_ROWS)
        elif kind is PK.PLANE:
            axis_raw = X.dual().select(_EUCLID_ROWS)
        elif kind is PK.POINT_PAIR:
            axis_raw = X.lmul_const(_LC_EINF_LT).select(_EUCLID_ROWS)
        else:
            axis_raw = _line_direction_jet(X)
        Rpre = axis_raw.normalized().rmul_const(_GP_AXIS_RT[kind])
        Rpre.v[0] += 1.0
        V = V * Rpre.normalized()

    # dilator from the radius (the unit primitive has radius 1)
    if kind in (PK.POINT_PAIR, PK.CIRCLE, PK.SPHERE):
        p_inf = X.lmul_const(_LC_EINF_LT) * X.inverse()
        beta = p_inf.norm().reciprocal().log()  # log of the radius
        V = V * _dilator_jet(beta, m)
    return V


def _log_rotor_factor(s: SJet) -> SJet:
    """-2 acos(s)/sin(acos(s)) with a series branch near the identity."""
    from .errors import RotationSingularity

    if s.v <= -1.0 + 1e-9:
        raise RotationSingularity(f"rotation angle at 2*pi: scalar {s.v:+.9f}")
    if s.v >= 1.0 - 1e-6:
        u = 1.0 - s.v
        val = -2.0 * (1.0 + u / 3.0 + 7.0 * u * u / 90.0)
        dv_ds = 2.0 / 3.0 + 14.0 * u / 45.0
        return SJet(val, dv_ds * s.g)
    num = s.arccos() * (-2.0)
    den = (1.0 - s * s).sqrt()
    return num / den


def log_versor_jet(V: MVJet) -> tuple[np.ndarray, np.ndarray]:
    """Similarity bivector coordinates of log(V) and their Jacobian (7, m)."""
    m = V.m
    lam = (V.rmul_const(_GP_EINF_RT) * V.reverse()).coefficient(K.BLADE_INDEX["ei"])
    beta = lam.log()
    D = _dilator_jet(beta, m)
    M = V * D.reverse()
    from .groups import ROTOR_PART_IDX

    R = M.select(ROTOR_PART_IDX).normalized()
    T = M * R.reverse()

    coords = np.zeros(7)
    jac = np.zeros((7, m))

    s = R.coefficient(0)
    s.v = float(np.clip(s.v, -1.0, 1.0))
    f = _log_rotor_factor(s)
    rot_v = SIM_BIVECTOR_BASIS.T[:3] @ R.v
    rot_j = SIM_BIVECTOR_BASIS.T[:3] @ R.j
    coords[:3] = f.v * rot_v
    jac[:3] = f.v * rot_j + np.outer(rot_v, f.g)

    coords[3] = beta.v
    jac[3] = beta.g

    coords[4:7] = -2.0 * (SIM_BIVECTOR_BASIS.T[4:7] @ T.v)
    jac[4:7] = -2.0 * (SIM_BIVECTOR_BASIS.T[4:7] @ T.j)
    return coords, jac


def similarity_versor_jet(sys: CooperativeSystem, q,
                          orient: OrientationState | None = None
                          ) -> tuple[MVJet, GeometricPrimitive, float]:
    """Cooperative similarity versor as a jet w.r.t. the joint vector, plus
    the (unoriented) primitive and its degeneracy measure."""
    value, jac = _primitive_value_and_jacobian(sys, q)
    prim = GeometricPrimitive(sys.kind, Multivector(value), sys.flat)
    degeneracy = prim.degeneracy_measure()
    if degeneracy < 1e-9:
        raise DegeneratePrimitive(sys.kind.value, degeneracy)
    sign = _oriented_sign(sys, value, orient)
    X = MVJet(sign * value, sign * jac)
    return _similarity_versor_jet(sys.kind, X), prim, degeneracy


@dataclass
class SimilarityJacobians:
    versor: Versor
    primitive: GeometricPrimitive
    J_A: MultivectorJacobian          # dV/dq, 32 x m
    J_G: np.ndarray                   # body-frame similarity twist rows, 7 x m
    J_B: np.ndarray                   # d log(V)/dq, 7 x m
    bivector: np.ndarray              # log(V) coordinates, 7
    degeneracy: float
    min_manip_eig: float
    near_singular: bool


def similarity_jacobians(sys: CooperativeSystem, q,
                         orient: OrientationState | None = None,
                         with_bivector: bool = True) -> SimilarityJacobians:
    """Cooperative similarity versor with its analytic Jacobian J_A = dV/dq,
    the geometric Jacobian rows J_G (from -2 ~V J_A), and the bivector
    Jacobian J_B = d log(V)/dq, all differentiated analytically."""
    V, prim, degeneracy = similarity_versor_jet(sys, q, orient)
    versor = Versor("S", Multivector(V.v.copy()))
    J_A = MultivectorJacobian(V.j.copy())
    J_G = SIM_BIVECTOR_BASIS.T @ (-2.0 * K.gp_mj(K.rev(V.v), V.j))
    if with_bivector:
        bivector, J_B = log_versor_jet(V)
    else:
        bivector = log_versor(versor).coords
        J_B = np.zeros((7, J_G.shape[1]))

    # smallest manipulability eigenvalue on the controllable subspace (the
    # trailing 7 - |mask| eigenvalues are structurally zero for every kind)
    eigs = np.linalg.eigvalsh(J_G @ J_G.T)[::-1]
    d = min(len(CONTROLLABLE_MASK[sys.kind]), J_G.shape[1])
    min_eig = float(eigs[d - 1]) if d >= 1 else 0.0
    return SimilarityJacobians(
        versor=versor, primitive=prim, J_A=J_A, J_G=J_G, J_B=J_B,
        bivector=bivector, degeneracy=degeneracy, min_manip_eig=min_eig,
        near_singular=min_eig < 1e-8,
    )


def log_map_jacobian(V: Versor, method: str = "fd", h: float = 1e-7) -> np.ndarray:
    """Jacobian of the similarity log map w.r.t. the 12 versor coefficients.

    The default is central finite differences (the verifiable baseline); the
    analytic path runs the log through the forward-mode rules.  Both agree to
    ~1e-5 away from the rotor-log singular set.
    """
    if method == "analytic":
        jet = MVJet.seed(V.c, rows=VERSOR_IDX)
        return log_versor_jet(jet)[1]
    if method != "fd":
        raise ValueError(f"unknown method {method!r}")
    cols = []
    for idx in VERSOR_IDX:
        cp, cm = V.c.copy(), V.c.copy()
        cp[idx] += h
        cm[idx] -= h
        bp = log_versor(Versor("S", Multivector(cp))).coords
        bm = log_versor(Versor("S", Multivector(cm))).coords
        cols.append((bp - bm) / (2.0 * h))
    return np.stack(cols, axis=1)


def damped_pinv(J: np.ndarray, threshold: float = 1e-6, lam: float = 1e-6) -> np.ndarray:
    """Moore-Penrose pseudoinverse with damped-least-squares fallback when the
    smallest singular value drops below `threshold`."""
    U, s, Vt = np.linalg.svd(J, full_matrices=False)
    if s.size and s[-1] >= threshold:
        return Vt.T @ np.diag(1.0 / s) @ U.T
    return Vt.T @ np.diag(s / (s**2 + lam**2)) @ U.T


def nullspace_projector(sys: CooperativeSystem, q,
                        orient: OrientationState | None = None) -> np.ndarray:
    """N = I - pinv(J_G) J_G; joint velocities N v leave the cooperative
    similarity transformation unchanged to first order."""
    J = similarity_jacobians(sys, q, orient).J_G
    return nullspace_projector_from_jacobian(J)


def nullspace_projector_from_jacobian(J: np.ndarray) -> np.ndarray:
    m = J.shape[1]
    return np.eye(m) - damped_pinv(J) @ J


def manipulability(sys: CooperativeSystem, q,
                   orient: OrientationState | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Similarity manipulability J_G J_G^T and its eigenvalues (descending)."""
    J = similarity_jacobians(sys, q, orient).J_G
    M = J @ J.T
    eigs = np.linalg.eigvalsh(M)[::-1]
    return M, eigs


def force_manipulability(sys: CooperativeSystem, q,
                         orient: OrientationState | None = None) -> np.ndarray:
    M, eigs = manipulability(sys, q, orient)
    if eigs[-1] <= 1e-12:
        raise SingularManipulability(f"smallest eigenvalue {eigs[-1]:.3e}")
    return np.linalg.inv(M)
