"""Transformation groups of Cl(4,1): rotors, translators, dilators, motors,
similarity versors, with exponential/logarithmic maps and the sandwich action.

Bivector coordinates are always ordered (e23, e13, e12, e0inf, e1inf, e2inf,
e3inf).  The dilation basis bivector is oriented as einf ^ e0 so that
exp(log(d) * e0inf) with d > 1 enlarges distances from the origin; with this
orientation every group shares the same closed-form exponential
exp(B) = cos/cosh(|B|/2) - sin/sinh(|B|/2) * B/|B|.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernel as K
from .algebra import Multivector
from .errors import RotationSingularity

SIM_COORD_NAMES = ("e23", "e13", "e12", "e0i", "e1i", "e2i", "e3i")

# blade-coefficient matrix of the 7 similarity bivector basis elements;
# column 3 carries -1 because the dilation bivector is einf ^ e0 = -(e0 ^ einf)
SIM_BIVECTOR_BASIS = np.zeros((K.DIM, 7))
for _j, _name in enumerate(SIM_COORD_NAMES):
    SIM_BIVECTOR_BASIS[K.BLADE_INDEX[_name], _j] = -1.0 if _name == "e0i" else 1.0

# the 12-dimensional subalgebra a similarity versor lives in
VERSOR_BLADES = ("1", "e23", "e13", "e12", "e0i", "e1i", "e2i", "e3i",
                 "e012i", "e013i", "e023i", "e123i")
VERSOR_IDX = np.array([K.BLADE_INDEX[n] for n in VERSOR_BLADES])
SIM_PRODUCT_TENSOR = K.GP[np.ix_(VERSOR_IDX, VERSOR_IDX, VERSOR_IDX)].copy()

KIND_SLOTS = {
    "R": (0, 1, 2),
    "T": (4, 5, 6),
    "D": (3,),
    "M": (0, 1, 2, 4, 5, 6),
    "S": (0, 1, 2, 3, 4, 5, 6),
}

ROTOR_PART_IDX = np.array([K.BLADE_INDEX[n] for n in ("1", "e23", "e13", "e12")])

VERSOR_TOL = 1e-10
RENORM_EVERY = 16
_ROTOR_SINGULARITY_TOL = 1e-9


def coords_to_bivector(coords: np.ndarray) -> np.ndarray:
    """Blade coefficients (32,) of a similarity bivector given its 7 coordinates."""
    return SIM_BIVECTOR_BASIS @ np.asarray(coords, dtype=float)


def bivector_to_coords(c: np.ndarray) -> np.ndarray:
    """Inverse of :func:`coords_to_bivector` (basis columns are orthonormal)."""
    return SIM_BIVECTOR_BASIS.T @ c


@dataclass(frozen=True)
class GroupBivector:
    """Lie-algebra element of one of the five groups, as 7 coordinates with
    entries outside the group's slots exactly zero."""

    kind: str
    coords: np.ndarray

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        if coords.shape != (7,):
            raise ValueError("expected 7 bivector coordinates")
        slots = KIND_SLOTS[self.kind]
        clean = np.zeros(7)
        clean[list(slots)] = coords[list(slots)]
        if np.any(coords[np.setdiff1d(np.arange(7), slots)] != 0.0):
            raise ValueError(f"coordinates outside the {self.kind} basis must be zero")
        object.__setattr__(self, "coords", clean)

    @property
    def mv(self) -> Multivector:
        return Multivector(coords_to_bivector(self.coords))

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))


def rotation_bivector(axis, angle: float) -> GroupBivector:
    """Rotation by `angle` (rad) about the unit `axis` through the origin."""
    a = np.asarray(axis, dtype=float)
    a = a / np.linalg.norm(a)
    coords = np.zeros(7)
    coords[0] = angle * a[0]
    coords[1] = -angle * a[1]
    coords[2] = angle * a[2]
    return GroupBivector("R", coords)


def translation_bivector(t) -> GroupBivector:
    coords = np.zeros(7)
    coords[4:7] = np.asarray(t, dtype=float)
    return GroupBivector("T", coords)


def dilation_bivector(scale: float) -> GroupBivector:
    if scale <= 0.0:
        raise ValueError("dilation scale must be positive")
    coords = np.zeros(7)
    coords[3] = np.log(scale)
    return GroupBivector("D", coords)


@dataclass
class Versor:
    """Group element acting on multivectors by the sandwich V X ~V."""

    kind: str
    mv: Multivector
    compositions: int = field(default=0, compare=False)

    @property
    def c(self) -> np.ndarray:
        return self.mv.c

    def reverse(self) -> "Versor":
        return Versor(self.kind, ~self.mv, self.compositions)

    def inverse(self) -> "Versor":
        s = float(K.gp(self.c, K.rev(self.c))[0])
        return Versor(self.kind, Multivector(K.rev(self.c) / s), self.compositions)

    def constraint_residual(self) -> float:
        p = K.gp(self.c, K.rev(self.c))
        p[0] -= 1.0
        return float(np.max(np.abs(p)))

    def compose(self, other: "Versor") -> "Versor":
        """Group product self * other, renormalizing every few compositions
        to contain drift over long sessions."""
        kind = _compose_kind(self.kind, other.kind)
        count = self.compositions + other.compositions + 1
        c = K.gp(self.c, other.c)
        if count >= RENORM_EVERY:
            s = float(K.gp(c, K.rev(c))[0])
            c = c / np.sqrt(abs(s))
            count = 0
        return Versor(kind, Multivector(c), count)

    def __mul__(self, other: "Versor") -> "Versor":
        return self.compose(other)

    def apply(self, X: Multivector) -> Multivector:
        return Multivector(K.gp(K.gp(self.c, X.c), K.rev(self.c)))

    def log(self) -> GroupBivector:
        return log_versor(self)

    def is_close(self, other: "Versor", tol: float = 1e-12) -> bool:
        return self.mv.is_close(other.mv, tol)


_KIND_ORDER = {"R": 0, "T": 1, "D": 2, "M": 3, "S": 4}


def _compose_kind(a: str, b: str) -> str:
    if a == b:
        return a
    pair = {a, b}
    if pair <= {"R", "T", "M"}:
        return "M"
    return "S"


def identity_versor(kind: str = "S") -> Versor:
    return Versor(kind, Multivector.scalar(1.0))


def exp_versor(B: GroupBivector) -> Versor:
    """Exponential map; total for every kind."""
    coords = B.coords
    kind = B.kind
    if kind == "R":
        return Versor("R", Multivector(_exp_rotor(coords[:3])))
    if kind == "T":
        return Versor("T", Multivector(_exp_translator(coords[4:7])))
    if kind == "D":
        return Versor("D", Multivector(_exp_dilator(coords[3])))
    if kind == "M":
        c = K.gp(_exp_translator(coords[4:7]), _exp_rotor(coords[:3]))
        return Versor("M", Multivector(c))
    if kind == "S":
        c = K.gp(_exp_translator(coords[4:7]), _exp_rotor(coords[:3]))
        c = K.gp(c, _exp_dilator(coords[3]))
        return Versor("S", Multivector(c))
    raise ValueError(f"unknown group kind {kind!r}")


def _exp_rotor(rc: np.ndarray) -> np.ndarray:
    theta = np.linalg.norm(rc)
    out = np.zeros(K.DIM)
    out[0] = np.cos(0.5 * theta)
    # sin(theta/2)/theta, finite at zero
    f = 0.5 * np.sinc(theta / (2.0 * np.pi))
    biv = np.zeros(7)
    biv[:3] = -f * rc
    return out + coords_to_bivector(biv)


def _exp_translator(tc: np.ndarray) -> np.ndarray:
    out = np.zeros(K.DIM)
    out[0] = 1.0
    biv = np.zeros(7)
    biv[4:7] = -0.5 * tc
    return out + coords_to_bivector(biv)


def _exp_dilator(beta: float) -> np.ndarray:
    out = np.zeros(K.DIM)
    out[0] = np.cosh(0.5 * beta)
    biv = np.zeros(7)
    biv[3] = -np.sinh(0.5 * beta)
    return out + coords_to_bivector(biv)


def _log_rotor_coords(c: np.ndarray) -> np.ndarray:
    """Rotation coordinates of a (unit) rotor given as blade coefficients.

    The log factor -2*acos(s)/sin(acos(s)) has a regular limit -2 at s -> +1
    (tiny rotations; evaluated by series), but genuinely diverges at s -> -1,
    where the angle approaches 2*pi and the axis is lost.
    """
    s = float(np.clip(c[K.BLADE_INDEX["1"]], -1.0, 1.0))
    biv = bivector_to_coords(c)[:3]
    bnorm = float(np.linalg.norm(biv))
    if s <= -1.0 + _ROTOR_SINGULARITY_TOL:
        raise RotationSingularity(
            f"rotation angle at 2*pi: rotor scalar part {s:+.9f}")
    if s >= 1.0 - 1e-6:
        if bnorm < 1e-12:
            return np.zeros(3)
        u = 1.0 - s
        factor = -2.0 * (1.0 + u / 3.0 + 7.0 * u * u / 90.0)
    else:
        alpha = float(np.arccos(s))
        factor = -2.0 * alpha / np.sin(alpha)
    return factor * biv


def rotor_part(c: np.ndarray) -> np.ndarray:
    """Euclidean rotor factor of a motor/similarity versor (blade coefficients
    on 1, e23, e13, e12; exact for elements of the group)."""
    out = np.zeros(K.DIM)
    out[ROTOR_PART_IDX] = c[ROTOR_PART_IDX]
    n = float(np.sqrt(abs(K.gp(out, K.rev(out))[0])))
    return out / n


def _dilation_factor(c: np.ndarray) -> float:
    """Scale d of the dilator factor, from V einf ~V = d einf."""
    img = K.gp(K.gp(c, K.blade("ei")), K.rev(c))
    return float(img[K.BLADE_INDEX["ei"]])


def log_versor(V: Versor) -> GroupBivector:
    """Logarithmic map; inverse of :func:`exp_versor` on the canonical branch."""
    c = V.c
    kind = V.kind
    coords = np.zeros(7)
    if kind == "R":
        coords[:3] = _log_rotor_coords(c)
        return GroupBivector("R", coords)
    if kind == "T":
        coords[4:7] = -2.0 * bivector_to_coords(c)[4:7]
        return GroupBivector("T", coords)
    if kind == "D":
        coords[3] = 2.0 * np.arcsinh(-bivector_to_coords(c)[3])
        return GroupBivector("D", coords)
    if kind == "M":
        T, R = _split_motor(c)
        coords[:3] = _log_rotor_coords(R)
        coords[4:7] = -2.0 * bivector_to_coords(T)[4:7]
        return GroupBivector("M", coords)
    if kind == "S":
        T, R, D = _split_similarity(c)
        coords[:3] = _log_rotor_coords(R)
        coords[3] = 2.0 * np.arcsinh(-bivector_to_coords(D)[3])
        coords[4:7] = -2.0 * bivector_to_coords(T)[4:7]
        return GroupBivector("S", coords)
    raise ValueError(f"unknown group kind {kind!r}")


def _split_motor(c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    R = rotor_part(c)
    T = K.gp(c, K.rev(R))
    return T, R


def _split_similarity(c: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    d = _dilation_factor(c)
    if d <= 0.0:
        raise RotationSingularity("similarity versor does not scale einf positively")
    D = _exp_dilator(np.log(d))
    M = K.gp(c, K.rev(D))  # D^-1 = ~D for unit dilators
    T, R = _split_motor(M)
    return T, R, D


def decompose_similarity(V: Versor) -> tuple[Versor, Versor, Versor]:
    """Canonical factors (T, R, D) with V = T * R * D."""
    T, R, D = _split_similarity(V.c)
    return (
        Versor("T", Multivector(T)),
        Versor("R", Multivector(R)),
        Versor("D", Multivector(D)),
    )


def apply_versor(V: Versor, X: Multivector) -> Multivector:
    return V.apply(X)


def make_rotor(axis, angle: float) -> Versor:
    return exp_versor(rotation_bivector(axis, angle))


def make_translator(t) -> Versor:
    return exp_versor(translation_bivector(t))


def make_dilator(scale: float) -> Versor:
    return exp_versor(dilation_bivector(scale))


def translator_between(P1: Multivector, P2: Multivector) -> Versor:
    """Translator carrying conformal point P1 to P2: exp((P2 - P1) ^ einf)."""
    t = P2.euclidean() / P2.c[1] - P1.euclidean() / P1.c[1]
    return make_translator(t)


def rotor_between(n1: Multivector, n2: Multivector) -> Versor:
    """Shortest-arc rotor carrying unit Euclidean vector n1 to n2."""
    from .errors import AntipodalNormals

    c = Multivector.scalar(1.0) + n2 * n1
    s = float(K.gp(c.c, K.rev(c.c))[0])
    if s < 1e-12:
        raise AntipodalNormals("rotor between antipodal unit vectors is undefined")
    return Versor("R", Multivector(c.c / np.sqrt(s)))


def random_group_bivector(rng: np.random.Generator, kind: str,
                          rot_range=(0.0, np.pi - 0.1),
                          trans_scale: float = 1.0,
                          dil_scale: float = 1.0) -> GroupBivector:
    """Random Lie-algebra element with rotation norm inside `rot_range`."""
    coords = np.zeros(7)
    if kind in ("R", "M", "S"):
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        angle = rng.uniform(*rot_range)
        coords[:3] = rotation_bivector(axis, angle).coords[:3]
    if kind in ("T", "M", "S"):
        coords[4:7] = trans_scale * rng.normal(size=3)
    if kind in ("D", "S"):
        coords[3] = dil_scale * rng.normal()
    return GroupBivector(kind, coords)
