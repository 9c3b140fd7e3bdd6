"""Cl(4,1) product tables in the conformal null basis.

The 32 basis blades are indexed grade-major, lexicographic within each grade
over the ordered symbols (0, 1, 2, 3, i), where 0 is the origin null vector
e0 = (e5 - e4)/2 and i is the infinity null vector einf = e4 + e5.  All
arithmetic happens directly on null-basis coefficient vectors; the tables are
generated once from the orthogonal basis e1..e5 with metric (+,+,+,+,-).

Table entries are dyadic rationals and are snapped to an exact 1/16 grid, so
algebraic cancellations (e.g. the closure of the similarity subalgebra) hold
exactly in floating point.
"""

from __future__ import annotations

import itertools

import numpy as np

DIM = 32

_METRIC = np.array([1.0, 1.0, 1.0, 1.0, -1.0])

# symbols: 0..3 -> e0,e1,e2,e3 ; 4 -> einf
_SYMBOLS = "0123i"

BLADE_TUPLES: list[tuple[int, ...]] = []
for _g in range(6):
    BLADE_TUPLES.extend(itertools.combinations(range(5), _g))

BLADE_NAMES = ["1"] + ["e" + "".join(_SYMBOLS[s] for s in t) for t in BLADE_TUPLES[1:]]
BLADE_INDEX = {name: i for i, name in enumerate(BLADE_NAMES)}

GRADES = np.array([len(t) for t in BLADE_TUPLES])
GRADE_MASKS = [GRADES == k for k in range(6)]

# reverse sign per grade: (-1)^(k(k-1)/2)
REVERSE_SIGNS = np.array([1.0, 1.0, -1.0, -1.0, 1.0, 1.0])[GRADES]

PSEUDOSCALAR_INDEX = 31


def _orth_gp_blades(mask_a: int, mask_b: int) -> tuple[float, int]:
    """Product of two orthogonal-basis blades given as bitmasks over e1..e5."""
    a = mask_a >> 1
    swaps = 0
    while a:
        swaps += bin(a & mask_b).count("1")
        a >>= 1
    sign = -1.0 if swaps & 1 else 1.0
    for bit in range(5):
        if mask_a & mask_b & (1 << bit):
            sign *= _METRIC[bit]
    return sign, mask_a ^ mask_b


def _orth_gp(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros(DIM)
    nz_a = np.nonzero(a)[0]
    nz_b = np.nonzero(b)[0]
    for i in nz_a:
        for j in nz_b:
            s, m = _orth_gp_blades(int(i), int(j))
            out[m] += s * a[i] * b[j]
    return out


def _orth_outer(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros(DIM)
    nz_a = np.nonzero(a)[0]
    nz_b = np.nonzero(b)[0]
    for i in nz_a:
        for j in nz_b:
            if int(i) & int(j):
                continue
            s, m = _orth_gp_blades(int(i), int(j))
            out[m] += s * a[i] * b[j]
    return out


def _snap(x: np.ndarray, grid: float = 16.0) -> np.ndarray:
    snapped = np.round(x * grid) / grid
    if not np.allclose(snapped, x, atol=1e-12):
        raise AssertionError("table entry not on the expected dyadic grid")
    return snapped


def _build_tables():
    # null basis vectors expressed in the orthogonal basis (bitmask indexing)
    e_orth = {}
    e_orth[0] = np.zeros(DIM)
    e_orth[0][1 << 3] = -0.5  # e0 = (e5 - e4)/2
    e_orth[0][1 << 4] = 0.5
    for k in (1, 2, 3):
        v = np.zeros(DIM)
        v[1 << (k - 1)] = 1.0
        e_orth[k] = v
    e_orth[4] = np.zeros(DIM)
    e_orth[4][1 << 3] = 1.0  # einf = e4 + e5
    e_orth[4][1 << 4] = 1.0

    # null blades as orthogonal-basis multivectors
    basis = np.zeros((DIM, DIM))
    for j, t in enumerate(BLADE_TUPLES):
        mv = np.zeros(DIM)
        mv[0] = 1.0
        for sym in t:
            mv = _orth_outer(mv, e_orth[sym])
        basis[:, j] = mv

    to_orth = basis
    to_null = _snap(np.linalg.inv(to_orth))
    ident = to_orth @ to_null
    if not np.array_equal(ident, np.eye(DIM)):
        raise AssertionError("null basis change is not exactly invertible")

    gp = np.zeros((DIM, DIM, DIM))
    for i in range(DIM):
        for j in range(DIM):
            prod = _orth_gp(to_orth[:, i], to_orth[:, j])
            gp[i, j, :] = _snap(to_null @ prod)

    g_i = GRADES[:, None, None]
    g_j = GRADES[None, :, None]
    g_k = GRADES[None, None, :]
    outer = np.where(g_k == g_i + g_j, gp, 0.0)
    lc = np.where(g_k == g_j - g_i, gp, 0.0)
    return gp, outer, lc


GP, OP, LC = _build_tables()

# reshaped views for building left/right multiplication matrices with one GEMV
_GP_L = GP.reshape(DIM, DIM * DIM)
_GP_R = np.ascontiguousarray(GP.transpose(1, 0, 2)).reshape(DIM, DIM * DIM)
_OP_L = OP.reshape(DIM, DIM * DIM)
_OP_R = np.ascontiguousarray(OP.transpose(1, 0, 2)).reshape(DIM, DIM * DIM)
_LC_L = LC.reshape(DIM, DIM * DIM)
_LC_R = np.ascontiguousarray(LC.transpose(1, 0, 2)).reshape(DIM, DIM * DIM)

_LEFT = {"gp": _GP_L, "op": _OP_L, "lc": _LC_L}
_RIGHT = {"gp": _GP_R, "op": _OP_R, "lc": _LC_R}

# dual = right-multiplication by the pseudoscalar e0123i
DUAL_MAT = GP[:, PSEUDOSCALAR_INDEX, :].T.copy()
UNDUAL_MAT = -DUAL_MAT

# bilinear form of the scalar part: <a b>_0 = a @ GRAM0 @ b
GRAM0 = GP[:, :, 0].copy()
# <a ~b>_0 = a @ GRAM0_REV @ b
GRAM0_REV = GRAM0 * REVERSE_SIGNS[None, :]


def left_matrix(a: np.ndarray, product: str = "gp") -> np.ndarray:
    """Matrix L with (a o b) = b @ L for the chosen product."""
    return (a @ _LEFT[product]).reshape(DIM, DIM)


def right_matrix(b: np.ndarray, product: str = "gp") -> np.ndarray:
    """Matrix R with (a o b) = a @ R for the chosen product."""
    return (b @ _RIGHT[product]).reshape(DIM, DIM)


def gp(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return b @ left_matrix(a, "gp")


def op(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return b @ left_matrix(a, "op")


def lc(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return b @ left_matrix(a, "lc")


def rev(a: np.ndarray) -> np.ndarray:
    return REVERSE_SIGNS * a


def grade_part(a: np.ndarray, k: int) -> np.ndarray:
    out = np.zeros(DIM)
    out[GRADE_MASKS[k]] = a[GRADE_MASKS[k]]
    return out


def dual(a: np.ndarray) -> np.ndarray:
    return DUAL_MAT @ a


def undual(a: np.ndarray) -> np.ndarray:
    return UNDUAL_MAT @ a


def gp_mj(a: np.ndarray, J: np.ndarray, product: str = "gp") -> np.ndarray:
    """Product of a fixed multivector with each column of a (32, m) Jacobian."""
    return left_matrix(a, product).T @ J


def gp_jm(J: np.ndarray, b: np.ndarray, product: str = "gp") -> np.ndarray:
    """Product of each Jacobian column with a fixed multivector."""
    return right_matrix(b, product).T @ J


def blade(name: str) -> np.ndarray:
    out = np.zeros(DIM)
    out[BLADE_INDEX[name]] = 1.0
    return out
