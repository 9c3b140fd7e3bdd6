"""Serial kinematic chains: joints as motor bivector screw axes, forward
kinematics as a product of joint motors, analytic and geometric Jacobians.

Joint motors are the one-parameter subgroups M_j(q) = exp(q B_j) of the screw
axis bivector B_j.  For an offset revolute axis this is the commuting-split
closed form (translation along the axis times a Rodrigues rotor about it),
which equals the conjugated rotor T_p R ~T_p; the factored motor exponential
exp(B_T) exp(B_R) of the group module is *not* the screw motion for offset
axes and is not used here.  Either way dM/dq = -1/2 B M exactly, which is what
the analytic Jacobian uses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernel as K
from .algebra import Multivector, MultivectorJacobian
from .errors import JointLimit, RotationSingularity
from .groups import (
    GroupBivector,
    Versor,
    bivector_to_coords,
    coords_to_bivector,
    exp_versor,
    identity_versor,
    log_versor,
    make_translator,
    rotation_bivector,
    translation_bivector,
)

E0_ARR = K.blade("e0")


@dataclass
class Joint:
    """One joint: a unit screw-axis bivector in the chain's base frame."""

    bivector: GroupBivector
    name: str = ""
    limits: tuple[float, float] | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        # split B = (pitch along axis) + (offset rotation generator), cached
        # for the closed-form exponential
        coords = self.bivector.coords
        rot = coords[:3]
        trans = coords[4:7]
        self._theta = float(np.linalg.norm(rot))
        self._half_biv = -0.5 * coords_to_bivector(coords)
        if self._theta < 1e-14:
            self._line_unit = None
            tpar = trans
        else:
            axis = np.array([rot[0], -rot[1], rot[2]]) / self._theta
            tpar = float(trans @ axis) * axis
            line = np.zeros(7)
            line[:3] = rot
            line[4:7] = trans - tpar
            self._line_unit = coords_to_bivector(line) / self._theta
        pitch = np.zeros(7)
        pitch[4:7] = tpar
        self._pitch = coords_to_bivector(pitch) if np.any(tpar) else None

    @classmethod
    def revolute(cls, axis, origin=(0.0, 0.0, 0.0), name: str = "",
                 limits=None) -> "Joint":
        """Revolute joint about `axis` through `origin` (radians)."""
        B = rotation_bivector(axis, 1.0)
        Tp = make_translator(origin)
        shifted = K.gp(K.gp(Tp.c, coords_to_bivector(B.coords)), K.rev(Tp.c))
        coords = bivector_to_coords(shifted)
        coords[3] = 0.0  # motor bivectors have no dilation component
        gb = GroupBivector("M", coords)
        return cls(gb, name=name, limits=limits,
                   meta={"type": "revolute",
                         "axis": [float(v) for v in np.asarray(axis, dtype=float)],
                         "origin": [float(v) for v in np.asarray(origin, dtype=float)]})

    @classmethod
    def prismatic(cls, axis, name: str = "", limits=None) -> "Joint":
        """Prismatic joint translating along the unit `axis` (meters)."""
        a = np.asarray(axis, dtype=float)
        a = a / np.linalg.norm(a)
        gb = GroupBivector("M", translation_bivector(a).coords)
        return cls(gb, name=name, limits=limits,
                   meta={"type": "prismatic", "axis": [float(v) for v in a]})

    def motor(self, q: float) -> np.ndarray:
        """Blade coefficients of exp(q * bivector), the true screw motion."""
        if self._line_unit is None:
            out = -0.5 * q * self._pitch if self._pitch is not None else np.zeros(K.DIM)
            out[0] += 1.0
            return out
        half = 0.5 * q * self._theta
        rotor = -np.sin(half) * self._line_unit
        rotor[0] += np.cos(half)
        if self._pitch is None:
            return rotor
        pitch = -0.5 * q * self._pitch
        pitch[0] += 1.0
        return K.gp(pitch, rotor)

    def to_record(self) -> dict:
        rec = dict(self.meta)
        if not rec:
            rec = {"bivector": [float(v) for v in self.bivector.coords[[0, 1, 2, 4, 5, 6]]]}
        if self.name:
            rec["name"] = self.name
        if self.limits is not None:
            rec["limits"] = [float(self.limits[0]), float(self.limits[1])]
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "Joint":
        limits = tuple(rec["limits"]) if "limits" in rec else None
        name = rec.get("name", "")
        if rec.get("type") == "revolute":
            return cls.revolute(rec["axis"], rec.get("origin", (0, 0, 0)), name, limits)
        if rec.get("type") == "prismatic":
            return cls.prismatic(rec["axis"], name, limits)
        coords = np.zeros(7)
        coords[[0, 1, 2, 4, 5, 6]] = np.asarray(rec["bivector"], dtype=float)
        return cls(GroupBivector("M", coords), name=name, limits=limits)


@dataclass
class KinematicChain:
    name: str
    joints: list[Joint]
    base: Versor = field(default_factory=lambda: identity_versor("M"))
    ee_offset: Versor = field(default_factory=lambda: identity_versor("M"))
    enforce_limits: bool = False
    _packed: tuple | None = field(default=None, init=False, repr=False, compare=False)
    _packed_key: tuple | None = field(default=None, init=False, repr=False, compare=False)

    @property
    def dof(self) -> int:
        return len(self.joints)

    def _pack(self):
        from . import fastkernel

        key = (id(self.base), id(self.ee_offset), id(self.joints),
               tuple(id(j) for j in self.joints))
        if self._packed is None or self._packed_key != key:
            self._packed = fastkernel.pack_chain(self)
            self._packed_key = key
        return self._packed

    def _check(self, q: np.ndarray) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        if q.shape != (self.dof,):
            raise ValueError(f"expected {self.dof} joint values, got {q.shape}")
        if self.enforce_limits:
            for joint, qi in zip(self.joints, q):
                if joint.limits is not None and not (joint.limits[0] <= qi <= joint.limits[1]):
                    raise JointLimit(f"{joint.name or 'joint'}: {qi} outside {joint.limits}")
        return q

    def joint_motors(self, q) -> list[np.ndarray]:
        q = self._check(q)
        return [joint.motor(qi) for joint, qi in zip(self.joints, q)]

    def forward_kinematics(self, q) -> Versor:
        c = self.base.c
        for M in self.joint_motors(q):
            c = K.gp(c, M)
        return Versor("M", Multivector(K.gp(c, self.ee_offset.c)))

    def end_effector_point(self, q) -> Multivector:
        M = self.forward_kinematics(q).c
        return Multivector(K.gp(K.gp(M, E0_ARR), K.rev(M)))

    def _prefix_suffix(self, q):
        motors = self.joint_motors(q)
        n = len(motors)
        prefix = [self.base.c]
        for M in motors:
            prefix.append(K.gp(prefix[-1], M))
        suffix = [self.ee_offset.c]
        for M in reversed(motors):
            suffix.append(K.gp(M, suffix[-1]))
        suffix.reverse()  # suffix[j] = M_j ... M_n * ee
        return motors, prefix, suffix

    def fk_with_jacobian(self, q) -> tuple[Versor, MultivectorJacobian]:
        """Forward kinematics and the analytic Jacobian dM/dq columnwise,
        from the product rule with dM_j/dq_j = -1/2 B_j M_j."""
        from . import fastkernel

        q = self._check(q)
        if fastkernel.HAVE_NUMBA:
            M, JA, _, _ = fastkernel.chain_core(q, *self._pack())
            return Versor("M", Multivector(M)), MultivectorJacobian(JA)
        motors, prefix, suffix = self._prefix_suffix(q)
        n = len(motors)
        M = K.gp(prefix[-1], self.ee_offset.c)
        cols = np.zeros((K.DIM, n))
        for j in range(n):
            left = K.gp(prefix[j], self.joints[j]._half_biv)
            cols[:, j] = K.gp(left, suffix[j])
        return Versor("M", Multivector(M)), MultivectorJacobian(cols)

    def analytic_jacobian(self, q) -> MultivectorJacobian:
        return self.fk_with_jacobian(q)[1]

    def geometric_jacobian(self, q) -> MultivectorJacobian:
        """Body-frame Jacobian -2 ~M J^A; columns are motor bivectors."""
        M, JA = self.fk_with_jacobian(q)
        return MultivectorJacobian(-2.0 * K.gp_mj(K.rev(M.c), JA.m))

    def point_with_jacobian(self, q) -> tuple[Multivector, np.ndarray]:
        """End-effector point P = M e0 ~M and its Jacobian (32, dof):
        J_P = J^A e0 ~M + M e0 reverse(J^A)."""
        from . import fastkernel

        q = self._check(q)
        if fastkernel.HAVE_NUMBA:
            _, _, P, JP = fastkernel.chain_core(q, *self._pack())
            return Multivector(P), JP
        M, JA = self.fk_with_jacobian(q)
        Me0 = K.gp(M.c, E0_ARR)
        P = K.gp(Me0, K.rev(M.c))
        JArev = K.REVERSE_SIGNS[:, None] * JA.m
        JP = K.gp_jm(K.gp_jm(JA.m, E0_ARR), K.rev(M.c)) + K.gp_mj(Me0, JArev)
        return Multivector(P), JP

    def polyline(self, q) -> list[np.ndarray]:
        """World positions of the joint origins and the end effector, for
        drawing the chain as a point polyline (clients need no kinematics)."""
        from .algebra import Multivector, extract_point

        q = self._check(q)
        motors, prefix, _ = self._prefix_suffix(q)
        nodes = []
        anchors = []
        for joint in self.joints:
            anchors.append(np.asarray(joint.meta.get("origin", (0.0, 0.0, 0.0)), dtype=float))
        for j, anchor in enumerate(anchors):
            c = np.zeros(K.DIM)
            c[1] = 1.0
            c[2:5] = anchor
            c[5] = 0.5 * float(anchor @ anchor)
            world = K.gp(K.gp(prefix[j], c), K.rev(prefix[j]))
            nodes.append(extract_point(Multivector(world)))
        M = K.gp(prefix[-1], self.ee_offset.c)
        nodes.append(extract_point(Multivector(K.gp(K.gp(M, E0_ARR), K.rev(M)))))
        return nodes

    def to_record(self) -> dict:
        return {
            "schema": "coopga/chain/v1",
            "name": self.name,
            "base_pose": _versor_record(self.base),
            "joints": [j.to_record() for j in self.joints],
            "ee_offset": _versor_record(self.ee_offset),
        }

    @classmethod
    def from_record(cls, rec: dict) -> "KinematicChain":
        if rec.get("schema") != "coopga/chain/v1":
            raise ValueError(f"unsupported chain schema: {rec.get('schema')!r}")
        return cls(
            name=rec.get("name", ""),
            joints=[Joint.from_record(j) for j in rec["joints"]],
            base=_versor_from_record(rec.get("base_pose")),
            ee_offset=_versor_from_record(rec.get("ee_offset")),
        )


def _versor_record(V: Versor) -> dict:
    B = log_versor(V)
    return {
        "translation": [float(v) for v in B.coords[4:7]],
        "rotation_bivector": [float(v) for v in B.coords[:3]],
    }


def _versor_from_record(rec: dict | None) -> Versor:
    if rec is None:
        return identity_versor("M")
    coords = np.zeros(7)
    coords[4:7] = np.asarray(rec.get("translation", (0, 0, 0)), dtype=float)
    coords[:3] = np.asarray(rec.get("rotation_bivector", (0, 0, 0)), dtype=float)
    return exp_versor(GroupBivector("M", coords))


def cdts_motors(chain1: KinematicChain, q1, chain2: KinematicChain, q2) -> tuple[Versor, Versor]:
    """Relative and absolute motors of the cooperative dual task space:
    M_r = ~M_2 M_1 and M_a = M_2 exp(log(M_r)/2)."""
    M1 = chain1.forward_kinematics(q1)
    M2 = chain2.forward_kinematics(q2)
    rel = Versor("M", Multivector(K.gp(K.rev(M2.c), M1.c)))
    B = log_versor(rel)
    half = exp_versor(GroupBivector("M", 0.5 * B.coords))
    absolute = Versor("M", Multivector(K.gp(M2.c, half.c)))
    return rel, absolute
