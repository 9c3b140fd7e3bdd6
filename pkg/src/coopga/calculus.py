"""Forward-mode derivatives of multivector expressions.

A jet carries a value together with its Jacobian w.r.t. a fixed set of m
scalar parameters.  Products follow the bilinear product rule; normalization
and inversion follow the closed-form derivative rules of the multivector
calculus helpers in :mod:`coopga.algebra`.  Every analytic Jacobian in the
package (chain points, cooperative primitives, similarity versors, log maps)
is a composition of these rules, so a single central-difference oracle
validates them all.
"""

from __future__ import annotations

import numpy as np

from . import kernel as K
from .errors import NullMultivector


class SJet:
    """Scalar value with gradient."""

    __slots__ = ("v", "g")

    def __init__(self, v: float, g: np.ndarray):
        self.v = float(v)
        self.g = np.asarray(g, dtype=float)

    @classmethod
    def constant(cls, v: float, m: int) -> "SJet":
        return cls(v, np.zeros(m))

    def __add__(self, other):
        if isinstance(other, SJet):
            return SJet(self.v + other.v, self.g + other.g)
        return SJet(self.v + other, self.g)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, SJet):
            return SJet(self.v - other.v, self.g - other.g)
        return SJet(self.v - other, self.g)

    def __rsub__(self, other):
        return SJet(other - self.v, -self.g)

    def __mul__(self, other):
        if isinstance(other, SJet):
            return SJet(self.v * other.v, self.v * other.g + other.v * self.g)
        return SJet(self.v * other, self.g * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, SJet):
            return SJet(self.v / other.v,
                        self.g / other.v - self.v * other.g / other.v**2)
        return SJet(self.v / other, self.g / other)

    def __neg__(self):
        return SJet(-self.v, -self.g)

    def sqrt(self) -> "SJet":
        r = np.sqrt(self.v)
        return SJet(r, 0.5 / r * self.g)

    def log(self) -> "SJet":
        return SJet(np.log(self.v), self.g / self.v)

    def reciprocal(self) -> "SJet":
        return SJet(1.0 / self.v, -self.g / self.v**2)

    def abs(self) -> "SJet":
        s = np.sign(self.v)
        return SJet(abs(self.v), s * self.g)

    def cos_half(self) -> "SJet":
        return SJet(np.cos(0.5 * self.v), -0.5 * np.sin(0.5 * self.v) * self.g)

    def sin_half(self) -> "SJet":
        return SJet(np.sin(0.5 * self.v), 0.5 * np.cos(0.5 * self.v) * self.g)

    def cosh_half(self) -> "SJet":
        return SJet(np.cosh(0.5 * self.v), 0.5 * np.sinh(0.5 * self.v) * self.g)

    def sinh_half(self) -> "SJet":
        return SJet(np.sinh(0.5 * self.v), 0.5 * np.cosh(0.5 * self.v) * self.g)

    def arccos(self) -> "SJet":
        return SJet(np.arccos(self.v), -self.g / np.sqrt(1.0 - self.v**2))

    def arcsinh(self) -> "SJet":
        return SJet(np.arcsinh(self.v), self.g / np.sqrt(1.0 + self.v**2))

    def sin_over_x(self) -> "SJet":
        """sin(v)/v with the v -> 0 limit."""
        x = self.v
        if abs(x) < 1e-6:
            val = 1.0 - x * x / 6.0
            der = -x / 3.0
        else:
            val = np.sin(x) / x
            der = (np.cos(x) - val) / x
        return SJet(val, der * self.g)


class MVJet:
    """Multivector value (32,) with Jacobian (32, m)."""

    __slots__ = ("v", "j")

    def __init__(self, v: np.ndarray, j: np.ndarray):
        self.v = v
        self.j = j

    @classmethod
    def constant(cls, v: np.ndarray, m: int) -> "MVJet":
        return cls(np.asarray(v, dtype=float), np.zeros((K.DIM, m)))

    @classmethod
    def seed(cls, v: np.ndarray, rows: np.ndarray | None = None) -> "MVJet":
        """Jet of v w.r.t. its own coefficients (all 32, or a row subset)."""
        v = np.asarray(v, dtype=float)
        if rows is None:
            return cls(v, np.eye(K.DIM))
        j = np.zeros((K.DIM, len(rows)))
        j[rows, np.arange(len(rows))] = 1.0
        return cls(v, j)

    @property
    def m(self) -> int:
        return self.j.shape[1]

    def _binary(self, other: "MVJet", product: str) -> "MVJet":
        L = K.left_matrix(self.v, product)
        R = K.right_matrix(other.v, product)
        return MVJet(other.v @ L, L.T @ other.j + R.T @ self.j)

    def rmul_const(self, Rt: np.ndarray) -> "MVJet":
        """Multiply by a constant operand from the right, given the transposed
        right-multiplication matrix (see kernel.right_matrix)."""
        return MVJet(Rt @ self.v, Rt @ self.j)

    def lmul_const(self, Lt: np.ndarray) -> "MVJet":
        """Multiply by a constant operand from the left (transposed matrix)."""
        return MVJet(Lt @ self.v, Lt @ self.j)

    def gp(self, other: "MVJet") -> "MVJet":
        return self._binary(other, "gp")

    def op(self, other: "MVJet") -> "MVJet":
        return self._binary(other, "op")

    def lc(self, other: "MVJet") -> "MVJet":
        return self._binary(other, "lc")

    def __mul__(self, other):
        if isinstance(other, MVJet):
            return self.gp(other)
        if isinstance(other, SJet):
            return MVJet(other.v * self.v, other.v * self.j + np.outer(self.v, other.g))
        return MVJet(self.v * other, self.j * other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __xor__(self, other: "MVJet") -> "MVJet":
        return self.op(other)

    def __or__(self, other: "MVJet") -> "MVJet":
        return self.lc(other)

    def __add__(self, other: "MVJet") -> "MVJet":
        return MVJet(self.v + other.v, self.j + other.j)

    def __sub__(self, other: "MVJet") -> "MVJet":
        return MVJet(self.v - other.v, self.j - other.j)

    def __neg__(self) -> "MVJet":
        return MVJet(-self.v, -self.j)

    def reverse(self) -> "MVJet":
        return MVJet(K.rev(self.v), K.REVERSE_SIGNS[:, None] * self.j)

    def __invert__(self) -> "MVJet":
        return self.reverse()

    def dual(self) -> "MVJet":
        return MVJet(K.DUAL_MAT @ self.v, K.DUAL_MAT @ self.j)

    def grade(self, k: int) -> "MVJet":
        mask = K.GRADE_MASKS[k]
        v = np.zeros(K.DIM)
        j = np.zeros_like(self.j)
        v[mask] = self.v[mask]
        j[mask] = self.j[mask]
        return MVJet(v, j)

    def select(self, rows: np.ndarray) -> "MVJet":
        """Keep only the given coefficient rows (a linear projection)."""
        v = np.zeros(K.DIM)
        j = np.zeros_like(self.j)
        v[rows] = self.v[rows]
        j[rows] = self.j[rows]
        return MVJet(v, j)

    def coefficient(self, idx: int) -> SJet:
        return SJet(self.v[idx], self.j[idx].copy())

    def scalar_reverse_square(self) -> SJet:
        s = float(self.v @ K.GRAM0_REV @ self.v)
        g = (K.GRAM0_REV @ self.v) @ self.j + (self.v @ K.GRAM0_REV) @ self.j
        return SJet(s, g)

    def norm(self) -> SJet:
        return self.scalar_reverse_square().abs().sqrt()

    def normalized(self) -> "MVJet":
        s = self.scalar_reverse_square()
        if abs(s.v) < 1e-300:
            raise NullMultivector("cannot normalize a null jet")
        scale = s.abs().sqrt().reciprocal()
        return self * scale

    def inverse(self) -> "MVJet":
        s = self.scalar_reverse_square()
        if abs(s.v) < 1e-300:
            raise NullMultivector("cannot invert a null jet")
        return self.reverse() * s.reciprocal()

    def normalized_point(self) -> "MVJet":
        """Divide a conformal point jet by its e0 coefficient."""
        w = self.coefficient(1)
        return self * w.reciprocal()
