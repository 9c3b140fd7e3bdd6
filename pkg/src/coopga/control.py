"""Task-space dynamics and the closed-form controllers: differential
kinematics, Gauss-Newton inverse kinematics, similarity impedance, and
nullspace-projected secondary tasks.

The geometric similarity Jacobian has structural rank |controllable mask| < 7
for every primitive kind, so the 7x7 task-space inertia is inverted on the
controllable subspace (pseudoinverse); genuinely ill-conditioned
configurations still raise.  The Coriolis provider's output is treated as the
force vector C(q, qd) qd.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernel as K
from .algebra import Multivector
from .calculus import MVJet
from .cooperative import (
    CONTROLLABLE_MASK,
    CooperativeSystem,
    OrientationState,
    SimilarityJacobians,
    damped_pinv,
    log_versor_jet,
    nullspace_projector_from_jacobian,
    similarity_jacobians,
    similarity_versor_jet,
)
from .errors import (
    DegeneratePrimitive,
    NearSingularWarning,
    SingularTaskInertia,
    UncontrollableCommandWarning,
)
from .groups import Versor, log_versor


@dataclass
class JointDynamicsModel:
    """Providers for the joint-space dynamics terms.

    `coriolis(q, qd)` returns the force vector C(q, qd) qd, and `gravity(q)`
    the gravity torque vector."""

    mass: Callable[[np.ndarray], np.ndarray]
    coriolis: Callable[[np.ndarray, np.ndarray], np.ndarray]
    gravity: Callable[[np.ndarray], np.ndarray]

    @classmethod
    def default(cls, dof: int, inertia: float = 1.0) -> "JointDynamicsModel":
        """Constant diagonal mass, zero Coriolis, zero gravity: an SPD
        stand-in that makes the task-space control law exercisable."""
        M = inertia * np.eye(dof)
        return cls(mass=lambda q: M,
                   coriolis=lambda q, qd: np.zeros(dof),
                   gravity=lambda q: np.zeros(dof))


@dataclass
class Gains:
    K: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        for name in ("K", "D"):
            G = np.asarray(getattr(self, name), dtype=float)
            if G.shape != (7, 7) or np.max(np.abs(G - G.T)) > 1e-12:
                raise ValueError(f"{name} must be a symmetric 7x7 matrix")
            if np.min(np.linalg.eigvalsh(G)) <= 0.0:
                raise ValueError(f"{name} must be positive definite")
            setattr(self, name, G)

    @classmethod
    def diagonal(cls, k, d) -> "Gains":
        return cls(np.diag(np.broadcast_to(k, 7).astype(float)),
                   np.diag(np.broadcast_to(d, 7).astype(float)))


def reference_gains() -> Gains:
    """Stiffness/damping used in the impedance experiments: rotation rows 1.0,
    dilation and translation rows 7.5; uniform damping 5.0."""
    return Gains.diagonal([1.0, 1.0, 1.0, 7.5, 7.5, 7.5, 7.5], [5.0] * 7)


@dataclass
class TaskSpaceDynamics:
    M_S: np.ndarray          # 7x7 task-space inertia (controllable subspace)
    C_S: np.ndarray          # 7 task-space Coriolis force
    g_S: np.ndarray          # 7 task-space gravity force
    jacobians: SimilarityJacobians
    J_dot_qd: np.ndarray     # 7-vector dJ_G/dt qd along the flow


def _subspace_inverse(A: np.ndarray, rel_cut: float = 1e-9) -> np.ndarray:
    """Inverse of a symmetric PSD matrix on its numerically nonzero
    eigenspace (the gauge direction of J_G is structurally zero)."""
    w, Q = np.linalg.eigh(A)
    top = float(w[-1])
    if top <= 0.0:
        raise SingularTaskInertia("task inertia eigenvalues are all zero")
    keep = w > rel_cut * top
    winv = np.where(keep, 1.0 / np.where(keep, w, 1.0), 0.0)
    return (Q * winv) @ Q.T


def _body_twist(sys: CooperativeSystem, q, qd,
                orient: OrientationState | None) -> np.ndarray:
    """J_G(q) qd evaluated with a single directional jet (cheap: one column)."""
    from coopga.cooperative import SIM_BIVECTOR_BASIS, _primitive_value_and_jacobian
    from coopga.cooperative import _oriented_sign, _similarity_versor_jet

    value, jac = _primitive_value_and_jacobian(sys, q)
    sign = _oriented_sign(sys, value, orient)
    X = MVJet(sign * value, sign * (jac @ np.asarray(qd, dtype=float)[:, None]))
    V = _similarity_versor_jet(sys.kind, X)
    return SIM_BIVECTOR_BASIS.T @ (-2.0 * K.gp_mj(K.rev(V.v), V.j))[:, 0]


def assemble_task_dynamics(kind, J: np.ndarray, J_dot_qd: np.ndarray,
                           model: JointDynamicsModel, q: np.ndarray,
                           qd: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """M_S, C_S, g_S from the Jacobian and its flow derivative contraction."""
    M = model.mass(q)
    Minv = np.linalg.inv(M)
    A = J @ Minv @ J.T
    # controllable-subspace conditioning check
    eigs = np.linalg.eigvalsh(A)[::-1]
    d = len(CONTROLLABLE_MASK[kind])
    if eigs[min(d, len(eigs)) - 1] < 1e-10:
        raise SingularTaskInertia(
            f"controllable-subspace inertia eigenvalue {eigs[d - 1]:.3e}")
    M_S = _subspace_inverse(A)
    C_vec = model.coriolis(q, qd)
    C_S = M_S @ (J @ Minv @ C_vec - J_dot_qd)
    g_S = M_S @ (J @ Minv @ model.gravity(q))
    return M_S, C_S, g_S


def task_space_dynamics(sys: CooperativeSystem, q, qd,
                        model: JointDynamicsModel,
                        orient: OrientationState | None = None,
                        h: float = 1e-6,
                        jac: SimilarityJacobians | None = None) -> TaskSpaceDynamics:
    """Similarity task-space inertia, Coriolis, and gravity terms.

    M_S = (J_G M^-1 J_G^T)^+, C_S = M_S (J_G M^-1 C - dJ/dt qd),
    g_S = M_S J_G M^-1 g.  The flow derivative dJ/dt qd is the central
    difference of the twist J(q +- h qd) qd along the state flow."""
    q = np.asarray(q, dtype=float)
    qd = np.asarray(qd, dtype=float)
    sj = jac if jac is not None else similarity_jacobians(sys, q, orient,
                                                          with_bivector=False)
    J = sj.J_G
    ref = orient.reference_axis if orient is not None else None
    if np.any(qd):
        xi_p = _body_twist(sys, q + h * qd, qd, _temp_orient(ref))
        xi_m = _body_twist(sys, q - h * qd, qd, _temp_orient(ref))
        J_dot_qd = (xi_p - xi_m) / (2.0 * h)
    else:
        J_dot_qd = np.zeros(7)

    M_S, C_S, g_S = assemble_task_dynamics(sys.kind, J, J_dot_qd, model, q, qd)
    return TaskSpaceDynamics(M_S=M_S, C_S=C_S, g_S=g_S, jacobians=sj,
                             J_dot_qd=J_dot_qd)


def _temp_orient(reference_axis) -> OrientationState | None:
    if reference_axis is None:
        return None
    return OrientationState(reference_axis=np.array(reference_axis, dtype=float))


def differential_kinematics(sys: CooperativeSystem, q, xi_cmd,
                            orient: OrientationState | None = None,
                            jac: SimilarityJacobians | None = None) -> np.ndarray:
    """Joint velocities realizing a body-frame similarity twist:
    qd = pinv(J_G) xi.  Twist components outside the kind's controllable
    bivector space are projected out with a warning."""
    xi = np.asarray(xi_cmd, dtype=float).copy()
    if xi.shape != (7,):
        raise ValueError("similarity twist must have 7 coordinates")
    mask = CONTROLLABLE_MASK[sys.kind]
    outside = np.setdiff1d(np.arange(7), list(mask))
    if outside.size and np.max(np.abs(xi[outside])) > 0.0:
        warnings.warn("twist outside the controllable bivector space zeroed",
                      UncontrollableCommandWarning, stacklevel=2)
        xi[outside] = 0.0
    sj = jac if jac is not None else similarity_jacobians(sys, q, orient)
    if sj.near_singular:
        warnings.warn(f"near-singular Jacobian (eig {sj.min_manip_eig:.2e}); "
                      "damped inverse engaged", NearSingularWarning, stacklevel=2)
    return damped_pinv(sj.J_G) @ xi


def error_with_jacobian(sys: CooperativeSystem, q, V_desired: Versor,
                        orient: OrientationState | None = None
                        ) -> tuple[np.ndarray, np.ndarray, MVJet]:
    """Similarity error e = log(~V_c V_d) and its Jacobian de/dq."""
    Vjet, _, _ = similarity_versor_jet(sys, q, orient)
    Wjet = Vjet.reverse() * MVJet.constant(V_desired.c, Vjet.m)
    e, J_e = log_versor_jet(Wjet)
    return e, J_e, Wjet


def similarity_error(sys: CooperativeSystem, q, V_desired: Versor,
                     orient: OrientationState | None = None) -> np.ndarray:
    from .cooperative import cooperative_similarity

    Vc = cooperative_similarity(sys, q, orient)
    W = Versor("S", Multivector(K.gp(K.rev(Vc.c), V_desired.c)))
    return log_versor(W).coords


@dataclass
class IKOptions:
    tol: float = 1e-6
    max_iter: int = 100
    armijo_c: float = 1e-4
    min_step: float = 1e-10


@dataclass
class IKResult:
    q: np.ndarray
    converged: bool
    iterations: int
    residual: float
    residual_trace: list[float] = field(default_factory=list)


def gauss_newton_ik(sys: CooperativeSystem, q0, V_desired: Versor,
                    opts: IKOptions | None = None,
                    orient: OrientationState | None = None) -> IKResult:
    """Gauss-Newton on min ||log(~V_c(q) V_d)||^2 with backtracking line
    search; returns the best iterate with diagnostics (no exception on
    non-convergence)."""
    opts = opts or IKOptions()
    q = np.asarray(q0, dtype=float).copy()
    e, J_e, _ = error_with_jacobian(sys, q, V_desired, orient)
    cost = float(e @ e)
    trace = [np.sqrt(cost)]
    best_q, best_cost = q.copy(), cost
    iterations = 0
    for iterations in range(1, opts.max_iter + 1):
        if np.sqrt(cost) <= opts.tol:
            iterations -= 1
            break
        step = damped_pinv(J_e) @ e
        alpha = 1.0
        accepted = False
        grad_sq = float(e @ J_e @ step)  # descent rate of ||e||^2 / 2
        while alpha >= opts.min_step:
            q_try = q - alpha * step
            try:
                e_try, J_try, _ = error_with_jacobian(sys, q_try, V_desired, orient)
            except DegeneratePrimitive:
                alpha *= 0.5
                continue
            cost_try = float(e_try @ e_try)
            if cost_try <= cost - 2.0 * opts.armijo_c * alpha * grad_sq:
                q, e, J_e, cost = q_try, e_try, J_try, cost_try
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            break
        trace.append(np.sqrt(cost))
        if cost < best_cost:
            best_q, best_cost = q.copy(), cost
    residual = float(np.sqrt(best_cost))
    return IKResult(q=best_q, converged=residual <= opts.tol,
                    iterations=iterations, residual=residual,
                    residual_trace=trace)


def impedance_torque(sys: CooperativeSystem, q, qd, V_desired: Versor,
                     gains: Gains, model: JointDynamicsModel,
                     orient: OrientationState | None = None,
                     dynamics: TaskSpaceDynamics | None = None) -> np.ndarray:
    """Operational-space impedance in the similarity task space (regulation,
    desired versor constant): the desired wrench M_S (K B_e + D(-xi/2)) + C_S
    + g_S is mapped to joint torques through J_G^T."""
    q = np.asarray(q, dtype=float)
    qd = np.asarray(qd, dtype=float)
    dyn = dynamics if dynamics is not None else task_space_dynamics(sys, q, qd, model, orient)
    sj = dyn.jacobians
    W = Versor("S", Multivector(K.gp(K.rev(sj.versor.c), V_desired.c)))
    B_e = log_versor(W).coords
    xi = sj.J_G @ qd
    xi_dot_desired = gains.K @ B_e + gains.D @ (-0.5 * xi)
    wrench = dyn.M_S @ xi_dot_desired + dyn.C_S + dyn.g_S
    return sj.J_G.T @ wrench


def project_secondary(sys: CooperativeSystem, q, qd_task,
                      orient: OrientationState | None = None,
                      jac: SimilarityJacobians | None = None) -> np.ndarray:
    """Project a joint-velocity task into the geometric nullspace:
    qd = N(q) qd_task leaves the cooperative similarity transformation
    unchanged to first order."""
    qd_task = np.asarray(qd_task, dtype=float)
    sj = jac if jac is not None else similarity_jacobians(sys, q, orient)
    N = nullspace_projector_from_jacobian(sj.J_G)
    return N @ qd_task
