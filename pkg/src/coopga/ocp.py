"""iLQR solver for the similarity reaching problem.

Double-integrator joint dynamics (exact discretization), control-effort
running cost u^T R u, and the terminal cost ||log(~V_c(q_n) V_d)||^2_Q.  The
dynamics are linear, so the backward pass only propagates the Gauss-Newton
quadratic model of the terminal cost (built from the bivector Jacobian), and
the rollout of the returned controls reproduces the returned states exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .control import error_with_jacobian, similarity_error
from .cooperative import CooperativeSystem, OrientationState
from .errors import DegeneratePrimitive
from .groups import Versor


@dataclass
class OcpConfig:
    horizon: int = 250
    dt: float = 1e-3
    R: float | np.ndarray = 1e-4       # control weight (scalar or m x m SPD)
    Q: float | np.ndarray = 1e6        # terminal precision (scalar or 7 x 7 SPD)
    max_iter: int = 50
    tol: float = 1e-3                  # terminal bivector norm at convergence
    reg_init: float = 1e-9
    reg_floor: float = 1e-9
    reg_up: float = 10.0
    reg_down: float = 0.5
    alphas: tuple = (1.0, 0.5, 0.25, 0.1, 0.03, 0.01)

    def weights(self, m: int) -> tuple[np.ndarray, np.ndarray]:
        R = self.R * np.eye(m) if np.isscalar(self.R) else np.asarray(self.R, dtype=float)
        Q = self.Q * np.eye(7) if np.isscalar(self.Q) else np.asarray(self.Q, dtype=float)
        return R, Q


@dataclass
class OcpSolution:
    states: np.ndarray                 # (n+1, 2m): [q, qd] rows
    controls: np.ndarray               # (n, m) joint accelerations
    cost_trace: list[float]
    terminal_bivector: np.ndarray
    terminal_norm: float
    converged: bool
    iterations: int
    info: dict = field(default_factory=dict)


def _rollout(x0: np.ndarray, U: np.ndarray, dt: float) -> np.ndarray:
    n, m = U.shape
    X = np.zeros((n + 1, 2 * m))
    X[0] = x0
    for k in range(n):
        q, qd = X[k, :m], X[k, m:]
        X[k + 1, :m] = q + dt * qd + 0.5 * dt * dt * U[k]
        X[k + 1, m:] = qd + dt * U[k]
    return X


def solve_reaching(sys: CooperativeSystem, x0, V_desired: Versor,
                   cfg: OcpConfig | None = None,
                   orient: OrientationState | None = None) -> OcpSolution:
    """Best-effort iLQR solve of the reaching problem; convergence means the
    terminal error bivector norm dropped below cfg.tol."""
    cfg = cfg or OcpConfig()
    m = sys.dof
    x0 = np.asarray(x0, dtype=float)
    if x0.shape == (m,):
        x0 = np.concatenate([x0, np.zeros(m)])
    n = cfg.horizon
    dt = cfg.dt
    R, Q = cfg.weights(m)

    A = np.eye(2 * m)
    A[:m, m:] = dt * np.eye(m)
    B = np.vstack([0.5 * dt * dt * np.eye(m), dt * np.eye(m)])

    def terminal_error(X):
        return similarity_error(sys, X[-1, :m], V_desired, orient)

    def total_cost(X, U):
        e = terminal_error(X)
        run = float(np.einsum("ki,ij,kj->", U, R, U))
        return run + float(e @ Q @ e), e

    U = np.zeros((n, m))
    X = _rollout(x0, U, dt)
    try:
        cost, e_term = total_cost(X, U)
    except DegeneratePrimitive:
        raise DegeneratePrimitive(sys.kind.value, 0.0)
    cost_trace = [cost]
    reg = cfg.reg_init
    converged = bool(np.linalg.norm(e_term) <= cfg.tol)
    iterations = 0

    while not converged and iterations < cfg.max_iter:
        iterations += 1
        e, J_e, _ = error_with_jacobian(sys, X[-1, :m], V_desired, orient)
        # Gauss-Newton quadratic model of the terminal cost in state space
        Jx = np.zeros((7, 2 * m))
        Jx[:, :m] = J_e
        V_x = 2.0 * Jx.T @ Q @ e
        V_xx = 2.0 * Jx.T @ Q @ Jx

        # backward pass (linear dynamics, quadratic value function)
        ks = np.zeros((n, m))
        Ks = np.zeros((n, m, 2 * m))
        feasible = True
        for kstep in range(n - 1, -1, -1):
            Q_x = A.T @ V_x
            Q_u = 2.0 * R @ U[kstep] + B.T @ V_x
            Q_xx = A.T @ V_xx @ A
            Q_uu = 2.0 * R + B.T @ V_xx @ B + reg * np.eye(m)
            Q_ux = B.T @ V_xx @ A
            try:
                np.linalg.cholesky(Q_uu)
            except np.linalg.LinAlgError:
                feasible = False
                break
            k = -np.linalg.solve(Q_uu, Q_u)
            Kmat = -np.linalg.solve(Q_uu, Q_ux)
            V_x = Q_x + Kmat.T @ Q_uu @ k + Kmat.T @ Q_u + Q_ux.T @ k
            V_xx = Q_xx + Kmat.T @ Q_uu @ Kmat + Kmat.T @ Q_ux + Q_ux.T @ Kmat
            V_xx = 0.5 * (V_xx + V_xx.T)
            ks[kstep] = k
            Ks[kstep] = Kmat
        if not feasible:
            reg = max(cfg.reg_floor, reg * cfg.reg_up)
            continue

        accepted = False
        for alpha in cfg.alphas:
            X_new = np.zeros_like(X)
            U_new = np.zeros_like(U)
            X_new[0] = x0
            for kstep in range(n):
                U_new[kstep] = (U[kstep] + alpha * ks[kstep]
                                + Ks[kstep] @ (X_new[kstep] - X[kstep]))
                q, qd = X_new[kstep, :m], X_new[kstep, m:]
                X_new[kstep + 1, :m] = q + dt * qd + 0.5 * dt * dt * U_new[kstep]
                X_new[kstep + 1, m:] = qd + dt * U_new[kstep]
            try:
                cost_new, e_term_new = total_cost(X_new, U_new)
            except DegeneratePrimitive:
                continue
            if cost_new < cost:
                X, U, cost, e_term = X_new, U_new, cost_new, e_term_new
                cost_trace.append(cost)
                reg = max(cfg.reg_floor, reg * cfg.reg_down)
                accepted = True
                break
        if not accepted:
            reg = max(cfg.reg_floor, reg * cfg.reg_up)
            if reg > 1e8:
                break
            continue
        converged = bool(np.linalg.norm(e_term) <= cfg.tol)

    term_norm = float(np.linalg.norm(e_term))
    return OcpSolution(states=X, controls=U, cost_trace=cost_trace,
                       terminal_bivector=e_term, terminal_norm=term_norm,
                       converged=converged, iterations=iterations,
                       info={"regularization": reg})
