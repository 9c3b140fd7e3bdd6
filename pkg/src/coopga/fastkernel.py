"""Numba-accelerated inner loops for the chain-evaluation hot path.

Everything here reproduces the numpy kernel exactly (same tables, same
operation order up to float associativity); the test suite cross-checks the
two.  When numba is unavailable the package falls back to the numpy paths.
"""

from __future__ import annotations

import numpy as np

from . import kernel as K

try:
    from numba import njit

    HAVE_NUMBA = True
except Exception:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def deco(f):
            return f

        return deco if not (args and callable(args[0])) else args[0]


_II, _JJ, _KK = (idx.astype(np.int64) for idx in np.nonzero(K.GP))
_VV = K.GP[np.nonzero(K.GP)].copy()

REVERSE_SIGNS = K.REVERSE_SIGNS.copy()


@njit(cache=True)
def _gp(a, b, out):
    for t in range(_II.shape[0]):
        out[_KK[t]] += _VV[t] * a[_II[t]] * b[_JJ[t]]


@njit(cache=True)
def gp_nb(a, b):
    out = np.zeros(32)
    _gp(a, b, out)
    return out


@njit(cache=True)
def sandwich_nb(v, x):
    """v x reverse(v)"""
    tmp = np.zeros(32)
    _gp(v, x, tmp)
    vr = REVERSE_SIGNS * v
    out = np.zeros(32)
    _gp(tmp, vr, out)
    return out


@njit(cache=True)
def chain_core(q, thetas, line_units, pitches, has_line, has_pitch,
               half_bivs, base, ee):
    """Forward kinematics, analytic Jacobian, end-effector point and its
    Jacobian for one chain, all in blade coefficients.

    Returns (M, JA, P, JP) with JA, JP of shape (32, n).
    """
    n = q.shape[0]
    motors = np.zeros((n, 32))
    for j in range(n):
        if has_line[j]:
            half = 0.5 * q[j] * thetas[j]
            motors[j] = -np.sin(half) * line_units[j]
            motors[j, 0] += np.cos(half)
            if has_pitch[j]:
                pitch = -0.5 * q[j] * pitches[j]
                pitch[0] += 1.0
                motors[j] = gp_nb(pitch, motors[j])
        else:
            motors[j] = -0.5 * q[j] * pitches[j]
            motors[j, 0] += 1.0

    prefix = np.zeros((n + 1, 32))
    prefix[0] = base
    for j in range(n):
        prefix[j + 1] = gp_nb(prefix[j], motors[j])
    suffix = np.zeros((n + 1, 32))
    suffix[n] = ee
    for j in range(n - 1, -1, -1):
        suffix[j] = gp_nb(motors[j], suffix[j + 1])

    M = gp_nb(prefix[n], ee)
    JA = np.zeros((32, n))
    for j in range(n):
        left = gp_nb(prefix[j], half_bivs[j])
        JA[:, j] = gp_nb(left, suffix[j])

    e0 = np.zeros(32)
    e0[1] = 1.0
    Mr = REVERSE_SIGNS * M
    Me0 = gp_nb(M, e0)
    P = gp_nb(Me0, Mr)
    JP = np.zeros((32, n))
    for j in range(n):
        col = JA[:, j].copy()
        term1 = gp_nb(gp_nb(col, e0), Mr)
        term2 = gp_nb(Me0, REVERSE_SIGNS * col)
        JP[:, j] = term1 + term2
    return M, JA, P, JP


def pack_chain(chain) -> tuple:
    """Constant arrays consumed by chain_core, cached on the chain."""
    n = chain.dof
    thetas = np.zeros(n)
    line_units = np.zeros((n, 32))
    pitches = np.zeros((n, 32))
    has_line = np.zeros(n, dtype=np.bool_)
    has_pitch = np.zeros(n, dtype=np.bool_)
    half_bivs = np.zeros((n, 32))
    for j, joint in enumerate(chain.joints):
        thetas[j] = joint._theta
        half_bivs[j] = joint._half_biv
        if joint._line_unit is not None:
            has_line[j] = True
            line_units[j] = joint._line_unit
        if joint._pitch is not None:
            has_pitch[j] = True
            pitches[j] = joint._pitch
        elif joint._line_unit is None:
            pitches[j] = np.zeros(32)
    return (thetas, line_units, pitches, has_line, has_pitch, half_bivs,
            chain.base.c.astype(float), chain.ee_offset.c.astype(float))
