"""Shipped example kinematic chains and cooperative systems.

These are geometric stand-ins ("iiwa-like", "g1-like", "leap-like"), not
vendor-accurate robot models: screw axes and link lengths are plausible but
simplified.  Every builder returns fresh objects, so callers may mutate them.
"""

from __future__ import annotations

import numpy as np

from .chains import Joint, KinematicChain
from .cooperative import CooperativeSystem
from .groups import GroupBivector, exp_versor, make_translator
from .primitives import PrimitiveKind

# nominal configuration used across experiments (one 7-dof arm)
IIWA_Q0 = np.array([0.0, -0.7854, 0.0, 1.3962, 0.0, 0.6109, 0.0])


def _pose(translation, yaw: float = 0.0):
    coords = np.zeros(7)
    coords[4:7] = np.asarray(translation, dtype=float)
    coords[2] = yaw
    return exp_versor(GroupBivector("M", coords))


def iiwa_like(name: str = "iiwa_like", base: KinematicChain | None = None) -> KinematicChain:
    """7-dof serial arm with alternating z/y screw axes."""
    joints = [
        Joint.revolute([0, 0, 1], [0, 0, 0.00], name="j1"),
        Joint.revolute([0, 1, 0], [0, 0, 0.36], name="j2"),
        Joint.revolute([0, 0, 1], [0, 0, 0.36], name="j3"),
        Joint.revolute([0, -1, 0], [0, 0, 0.78], name="j4"),
        Joint.revolute([0, 0, 1], [0, 0, 0.78], name="j5"),
        Joint.revolute([0, 1, 0], [0, 0, 1.18], name="j6"),
        Joint.revolute([0, 0, 1], [0, 0, 1.18], name="j7"),
    ]
    return KinematicChain(name, joints, ee_offset=make_translator([0, 0, 1.306]))


def planar_arm(lengths=(1.0, 1.0), name: str = "planar") -> KinematicChain:
    """Planar arm in the xy-plane, joints about +z; handy for tests."""
    joints = []
    x = 0.0
    for i, L in enumerate(lengths):
        joints.append(Joint.revolute([0, 0, 1], [x, 0, 0], name=f"j{i + 1}"))
        x += L
    return KinematicChain(name, joints, ee_offset=make_translator([x, 0, 0]))


def cartesian_chain(base_point, name: str = "xyz") -> KinematicChain:
    """3-dof prismatic chain with directly controllable end point."""
    joints = [
        Joint.prismatic([1, 0, 0], name="px"),
        Joint.prismatic([0, 1, 0], name="py"),
        Joint.prismatic([0, 0, 1], name="pz"),
    ]
    return KinematicChain(name, joints, base=make_translator(base_point))


def single_arm_point(name: str = "single_arm") -> CooperativeSystem:
    """One 7-dof arm; the cooperative primitive is its end-effector point."""
    return CooperativeSystem([iiwa_like()], PrimitiveKind.POINT, name=name)


def _arm_on_circle(index: int, n: int, radius: float, name: str) -> KinematicChain:
    angle = 2.0 * np.pi * index / n
    pos = [radius * np.cos(angle), radius * np.sin(angle), 0.0]
    arm = iiwa_like(name)
    arm.base = _pose(pos, yaw=angle + np.pi)  # arms face the shared center
    return arm


def triple_arm_circle(name: str = "triple_arm_circle", radius: float = 1.6) -> CooperativeSystem:
    """Three 7-dof arms around a circle; cooperative primitive: circle (21 dof)."""
    chains = [_arm_on_circle(i, 3, radius, f"arm{i + 1}") for i in range(3)]
    return CooperativeSystem(chains, PrimitiveKind.CIRCLE, name=name)


def triple_arm_plane(name: str = "triple_arm_plane", radius: float = 1.6) -> CooperativeSystem:
    chains = [_arm_on_circle(i, 3, radius, f"arm{i + 1}") for i in range(3)]
    return CooperativeSystem(chains, PrimitiveKind.PLANE, name=name)


def _humanoid_arm(side: float, waist: bool, name: str) -> KinematicChain:
    """7-dof arm from a shoulder at lateral offset `side`; optionally with a
    3-dof waist in front of it (yielding 10 dof)."""
    shoulder = np.array([0.0, side * 0.22, 1.35])
    joints = []
    if waist:
        joints += [
            Joint.revolute([0, 0, 1], [0, 0, 0.95], name="waist_yaw"),
            Joint.revolute([0, 1, 0], [0, 0, 0.95], name="waist_pitch"),
            Joint.revolute([1, 0, 0], [0, 0, 0.95], name="waist_roll"),
        ]
    joints += [
        Joint.revolute([0, 1, 0], shoulder, name="shoulder_pitch"),
        Joint.revolute([1, 0, 0], shoulder, name="shoulder_roll"),
        Joint.revolute([0, 0, 1], shoulder, name="shoulder_yaw"),
        Joint.revolute([0, 1, 0], shoulder + [0, 0, -0.28], name="elbow"),
        Joint.revolute([1, 0, 0], shoulder + [0, 0, -0.28], name="wrist_roll"),
        Joint.revolute([0, 1, 0], shoulder + [0, 0, -0.50], name="wrist_pitch"),
        Joint.revolute([0, 0, 1], shoulder + [0, 0, -0.50], name="wrist_yaw"),
    ]
    return KinematicChain(name, joints,
                          ee_offset=make_translator(shoulder + [0.0, 0.0, -0.58]))


def g1_like(name: str = "g1_like", kind: PrimitiveKind = PrimitiveKind.LINE) -> CooperativeSystem:
    """17-dof dual-arm-with-waist stand-in: the waist belongs to the left
    chain (10 dof), the right arm (7 dof) hangs from a fixed torso.  The
    cooperative primitive connects the two wrists (line by default)."""
    left = _humanoid_arm(+1.0, waist=True, name="left_arm")
    right = _humanoid_arm(-1.0, waist=False, name="right_arm")
    return CooperativeSystem([left, right], kind, name=name)


def _finger(index: int, name: str) -> KinematicChain:
    """Finger pointing up from a palm circle; lengths differ per finger so the
    fingertips are not coplanar at the zero configuration."""
    angle = 0.5 * np.pi * index
    radial = np.array([np.cos(angle), np.sin(angle), 0.0])
    tangent = np.array([-np.sin(angle), np.cos(angle), 0.0])
    base = 0.06 * radial
    length = 0.11 + 0.015 * index
    joints = [
        Joint.revolute([0, 0, 1], base, name="mcp_spread"),
        Joint.revolute(tangent, base, name="mcp_flex"),
        Joint.revolute(tangent, base + [0, 0, 0.45 * length], name="pip"),
        Joint.revolute(tangent, base + [0, 0, 0.8 * length], name="dip"),
    ]
    return KinematicChain(name, joints, ee_offset=make_translator(base + [0, 0, length]))


def leap_like(name: str = "leap_like") -> CooperativeSystem:
    """16-dof four-fingered hand stand-in; cooperative primitive: sphere."""
    chains = [_finger(i, f"finger{i + 1}") for i in range(4)]
    return CooperativeSystem(chains, PrimitiveKind.SPHERE, name=name)


# a slightly curled hand: fingertips clearly off any common plane
LEAP_Q0 = np.concatenate([[0.0, 0.25 + 0.1 * i, 0.3, 0.2] for i in range(4)])


def cartesian_triple(name: str = "cartesian_triple",
                     points=((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (-1.0, 0.0, 0.0)),
                     kind: PrimitiveKind = PrimitiveKind.CIRCLE) -> CooperativeSystem:
    """Three fully actuated cartesian points; used for singularity sweeps."""
    chains = [cartesian_chain(p, f"pt{i + 1}") for i, p in enumerate(points)]
    return CooperativeSystem(chains, kind, name=name)


REGISTRY = {
    "single_arm_point": single_arm_point,
    "triple_arm_circle": triple_arm_circle,
    "triple_arm_plane": triple_arm_plane,
    "g1_like": g1_like,
    "leap_like": leap_like,
    "cartesian_triple": cartesian_triple,
}


def load_system(name: str) -> CooperativeSystem:
    if name not in REGISTRY:
        raise KeyError(f"unknown system {name!r}; available: {sorted(REGISTRY)}")
    return REGISTRY[name]()
