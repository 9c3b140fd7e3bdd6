"""Dense Cl(4,1) multivectors, conformal points, and multivector calculus helpers.

Conventions (fixed once, tested everywhere):
  * ``*`` is the geometric product, ``^`` the outer product, ``|`` the left
    contraction, ``~`` the reverse.
  * ``dual`` multiplies by the pseudoscalar I = e0^e1^e2^e3^einf; since
    I*I = -1, ``undual`` is multiplication by -I.
  * Norms are ``sqrt(|<X ~X>_0|)``; normalization and inversion require
    X ~X to be scalar (checked to tolerance).
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from . import kernel as K
from .errors import DegeneratePoint, NonScalarNorm, NullMultivector

NON_SCALAR_TOL = 1e-9
NULL_TOL = 1e-12


class Multivector:
    """A general element of Cl(4,1) as 32 coefficients in the null blade basis."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable[float] | np.ndarray):
        c = np.asarray(coeffs, dtype=float)
        if c.shape != (K.DIM,):
            raise ValueError(f"expected {K.DIM} coefficients, got shape {c.shape}")
        self.c = c

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls) -> "Multivector":
        return cls(np.zeros(K.DIM))

    @classmethod
    def scalar(cls, s: float) -> "Multivector":
        c = np.zeros(K.DIM)
        c[0] = s
        return cls(c)

    @classmethod
    def basis(cls, name: str) -> "Multivector":
        return cls(K.blade(name))

    @classmethod
    def from_blades(cls, blades: Mapping[str, float]) -> "Multivector":
        c = np.zeros(K.DIM)
        for name, value in blades.items():
            c[K.BLADE_INDEX[name]] = value
        return cls(c)

    @classmethod
    def from_euclidean(cls, x) -> "Multivector":
        c = np.zeros(K.DIM)
        c[2:5] = np.asarray(x, dtype=float)
        return cls(c)

    # -- products ----------------------------------------------------------
    def __mul__(self, other):
        if isinstance(other, Multivector):
            return Multivector(K.gp(self.c, other.c))
        return Multivector(self.c * float(other))

    def __rmul__(self, other):
        return Multivector(self.c * float(other))

    def __xor__(self, other: "Multivector") -> "Multivector":
        return Multivector(K.op(self.c, other.c))

    def __or__(self, other: "Multivector") -> "Multivector":
        return Multivector(K.lc(self.c, other.c))

    def __add__(self, other):
        if isinstance(other, Multivector):
            return Multivector(self.c + other.c)
        return Multivector(self.c + Multivector.scalar(float(other)).c)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Multivector):
            return Multivector(self.c - other.c)
        return Multivector(self.c - Multivector.scalar(float(other)).c)

    def __rsub__(self, other):
        return Multivector(Multivector.scalar(float(other)).c - self.c)

    def __neg__(self) -> "Multivector":
        return Multivector(-self.c)

    def __truediv__(self, s: float) -> "Multivector":
        return Multivector(self.c / float(s))

    def __invert__(self) -> "Multivector":
        return Multivector(K.rev(self.c))

    # -- structure ---------------------------------------------------------
    def reverse(self) -> "Multivector":
        return ~self

    def grade(self, k: int) -> "Multivector":
        return Multivector(K.grade_part(self.c, k))

    def grades(self, tol: float = 0.0) -> list[int]:
        return [k for k in range(6) if np.max(np.abs(self.c[K.GRADE_MASKS[k]])) > tol]

    def dual(self) -> "Multivector":
        return Multivector(K.dual(self.c))

    def undual(self) -> "Multivector":
        return Multivector(K.undual(self.c))

    def scalar_part(self) -> float:
        return float(self.c[0])

    def __getitem__(self, name: str) -> float:
        return float(self.c[K.BLADE_INDEX[name]])

    def euclidean(self) -> np.ndarray:
        """Coefficients on e1, e2, e3."""
        return self.c[2:5].copy()

    # -- metric ------------------------------------------------------------
    def norm_squared_signed(self) -> float:
        """Scalar part of X ~X (may be negative for null/imaginary blades)."""
        return float(K.gp(self.c, K.rev(self.c))[0])

    def norm(self) -> float:
        return float(np.sqrt(abs(self.norm_squared_signed())))

    def _scalar_reverse_square(self) -> float:
        s = K.gp(self.c, K.rev(self.c))
        scalar = s[0]
        rest = np.linalg.norm(s[1:])
        if rest > NON_SCALAR_TOL * max(1.0, abs(scalar)):
            raise NonScalarNorm(f"non-scalar part {rest:.3e} of X ~X")
        if abs(scalar) < NULL_TOL:
            raise NullMultivector("X ~X is numerically zero")
        return float(scalar)

    def normalized(self) -> "Multivector":
        s = self._scalar_reverse_square()
        return Multivector(self.c / np.sqrt(abs(s)))

    def inverse(self) -> "Multivector":
        s = self._scalar_reverse_square()
        return Multivector(K.rev(self.c) / s)

    # -- misc ----------------------------------------------------------------
    def copy(self) -> "Multivector":
        return Multivector(self.c.copy())

    def is_close(self, other: "Multivector", tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.c - other.c)) <= tol)

    def __repr__(self) -> str:
        parts = []
        for i, v in enumerate(self.c):
            if abs(v) > 1e-12:
                parts.append(f"{v:+.6g}*{K.BLADE_NAMES[i]}")
        return " ".join(parts) if parts else "0"


class MultivectorJacobian:
    """Columns of multivector partial derivatives, one per scalar parameter."""

    __slots__ = ("m",)

    def __init__(self, m: np.ndarray):
        m = np.asarray(m, dtype=float)
        if m.ndim != 2 or m.shape[0] != K.DIM:
            raise ValueError(f"expected (32, n) array, got {m.shape}")
        self.m = m

    @classmethod
    def zero(cls, n: int) -> "MultivectorJacobian":
        return cls(np.zeros((K.DIM, n)))

    @classmethod
    def from_columns(cls, columns: Iterable[Multivector]) -> "MultivectorJacobian":
        cols = [col.c for col in columns]
        if not cols:
            return cls.zero(0)
        return cls(np.stack(cols, axis=1))

    @property
    def n_params(self) -> int:
        return self.m.shape[1]

    def column(self, j: int) -> Multivector:
        return Multivector(self.m[:, j].copy())

    def columns(self) -> list[Multivector]:
        return [self.column(j) for j in range(self.n_params)]

    def __repr__(self) -> str:
        return f"MultivectorJacobian(n={self.n_params})"


# -- conformal embedding -----------------------------------------------------

e0 = Multivector.basis("e0")
e1 = Multivector.basis("e1")
e2 = Multivector.basis("e2")
e3 = Multivector.basis("e3")
einf = Multivector.basis("ei")
pseudoscalar = Multivector.basis("e0123i")


def embed_point(x) -> Multivector:
    """Conformal embedding e0 + x + x^2/2 einf of a Euclidean point."""
    x = np.asarray(x, dtype=float)
    c = np.zeros(K.DIM)
    c[1] = 1.0
    c[2:5] = x
    c[5] = 0.5 * float(x @ x)
    return Multivector(c)


def extract_point(P: Multivector, tol: float = 1e-9) -> np.ndarray:
    """Euclidean point of a conformal point; inverse of :func:`embed_point`."""
    w = P.c[1]
    if abs(w) < tol:
        raise DegeneratePoint("point at infinity: zero e0 coefficient")
    return P.c[2:5] / w


# -- multivector calculus (Jacobians of normalize / inverse) -----------------


def jacobian_normalize(X: Multivector, Jx: MultivectorJacobian) -> MultivectorJacobian:
    """Columnwise derivative of X / sqrt(|X ~X|) given the derivative of X."""
    s = X._scalar_reverse_square()
    J = Jx.m
    # d|s|^(-1/2) = -sign(s)/2 |s|^(-3/2) ds with ds = <J ~X + X ~J>_0
    ds = (K.GRAM0_REV @ X.c) @ J + (X.c @ K.GRAM0_REV) @ J
    out = J / np.sqrt(abs(s)) - 0.5 * np.sign(s) * abs(s) ** (-1.5) * np.outer(X.c, ds)
    return MultivectorJacobian(out)


def jacobian_inverse(X: Multivector, Jx: MultivectorJacobian) -> MultivectorJacobian:
    """Columnwise derivative of ~X (X ~X)^-1 given the derivative of X."""
    s = X._scalar_reverse_square()
    J = Jx.m
    Jr = K.REVERSE_SIGNS[:, None] * J
    ds_half = (X.c @ K.GRAM0) @ Jr  # <X ~J>_0
    out = Jr / s - (2.0 / s**2) * np.outer(K.rev(X.c), ds_half)
    return MultivectorJacobian(out)
