"""Scenario-driven simulation: kinematic and dynamic stepping, trajectory
recording, and reproductions of the reference experiments (impedance
regulation, reaching, line constraint, nullspace secondary task, geometric
singularity sweep).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .chains import KinematicChain
from .control import (
    Gains,
    IKOptions,
    JointDynamicsModel,
    TaskSpaceDynamics,
    differential_kinematics,
    gauss_newton_ik,
    impedance_torque,
    project_secondary,
    reference_gains,
    similarity_error,
    task_space_dynamics,
)
from .cooperative import (
    CooperativeSystem,
    OrientationState,
    cooperative_primitive,
    cooperative_similarity,
    damped_pinv,
    similarity_jacobians,
)
from .errors import DegeneratePrimitive, SingularMass
from .groups import Versor, log_versor
from .ocp import OcpConfig, solve_reaching
from .primitives import PrimitiveKind, params
from .robots import IIWA_Q0, load_system


def step_kinematic(q: np.ndarray, qd: np.ndarray, dt: float) -> np.ndarray:
    """First-order update q + dt qd."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    return np.asarray(q, dtype=float) + dt * np.asarray(qd, dtype=float)


def step_dynamic(q, qd, tau, model: JointDynamicsModel, dt: float):
    """Semi-implicit Euler on the joint-space dynamics:
    qdd = M^-1 (tau - C qd - g); qd' = qd + dt qdd; q' = q + dt qd'."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    q = np.asarray(q, dtype=float)
    qd = np.asarray(qd, dtype=float)
    M = model.mass(q)
    eigs = np.linalg.eigvalsh(M)
    if eigs[0] <= 0.0:
        raise SingularMass(f"mass matrix min eigenvalue {eigs[0]:.3e}")
    qdd = np.linalg.solve(M, np.asarray(tau, dtype=float)
                          - model.coriolis(q, qd) - model.gravity(q))
    qd_new = qd + dt * qdd
    return q + dt * qd_new, qd_new


@dataclass
class TrajectoryRecord:
    t: float
    q: np.ndarray
    qd: np.ndarray | None = None
    tau: np.ndarray | None = None
    primitive: dict | None = None
    bivector: np.ndarray | None = None      # log(V_Sc), 7 coordinates
    error_norm: float | None = None
    manip_eigs: np.ndarray | None = None
    degeneracy: float | None = None
    flags: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        def arr(a):
            return None if a is None else [float(v) for v in np.asarray(a).ravel()]

        return {
            "t": float(self.t),
            "q": arr(self.q),
            "qd": arr(self.qd),
            "tau": arr(self.tau),
            "primitive": self.primitive,
            "bivector": arr(self.bivector),
            "error_norm": None if self.error_norm is None else float(self.error_norm),
            "manip_eigs": arr(self.manip_eigs),
            "degeneracy": None if self.degeneracy is None else float(self.degeneracy),
            "flags": self.flags,
        }


def write_records(records: list[TrajectoryRecord], path) -> None:
    """Newline-delimited JSON, one record per line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_dict()) + "\n")


_TABLE_BIV = ("e23", "e13", "e12", "e0i", "e1i", "e2i", "e3i")


def write_table(records: list[TrajectoryRecord], path) -> None:
    """Plain columnar text table (header row + one line per step)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    cols = ["t", "error_norm", "degeneracy", "radius"]
    cols += [f"B_{n}" for n in _TABLE_BIV]
    with path.open("w") as fh:
        fh.write(" ".join(f"{c:>14}" for c in cols) + "\n")
        for rec in records:
            radius = ""
            if rec.primitive and rec.primitive.get("params"):
                radius = rec.primitive["params"].get("radius", "")
            vals = [rec.t, rec.error_norm, rec.degeneracy, radius]
            biv = rec.bivector if rec.bivector is not None else [None] * 7
            vals += list(biv)
            out = []
            for v in vals:
                out.append(f"{v:>14.6g}" if isinstance(v, (int, float)) and v is not None
                           else f"{'nan':>14}")
            fh.write(" ".join(out) + "\n")


def _snapshot(sys: CooperativeSystem, t, q, orient, qd=None, tau=None,
              V_desired: Versor | None = None) -> TrajectoryRecord:
    rec = TrajectoryRecord(t=t, q=np.array(q), qd=None if qd is None else np.array(qd),
                           tau=None if tau is None else np.array(tau))
    try:
        sj = similarity_jacobians(sys, q, orient, with_bivector=False)
        rec.primitive = sj.primitive.to_record()
        rec.bivector = sj.bivector
        rec.manip_eigs = np.linalg.eigvalsh(sj.J_G @ sj.J_G.T)[::-1]
        rec.degeneracy = sj.degeneracy
        rec.flags["near_singular"] = bool(sj.near_singular)
        if V_desired is not None:
            rec.error_norm = float(np.linalg.norm(
                similarity_error(sys, q, V_desired, orient)))
    except DegeneratePrimitive as err:
        rec.flags["degenerate"] = True
        rec.degeneracy = err.measure
    return rec


# -- scenario front-end --------------------------------------------------------


@dataclass
class Scenario:
    """Declarative description of one simulation run (schema coopga/scenario/v1)."""

    mode: str                       # kinematic | dynamic | ik | ocp | nullspace | singularity-sweep
    system: str | dict = "triple_arm_circle"
    duration: float = 4.0
    dt: float = 1e-3
    seed: int = 0
    gains: dict | None = None       # {stiffness: [7], damping: [7]}
    target: dict | None = None      # {joints: [...]} or {versor: [32]}
    options: dict = field(default_factory=dict)
    output: str | None = None
    name: str = ""

    @classmethod
    def from_yaml(cls, path) -> "Scenario":
        rec = yaml.safe_load(Path(path).read_text())
        if rec.get("schema") != "coopga/scenario/v1":
            raise ValueError(f"unsupported scenario schema: {rec.get('schema')!r}")
        rec.pop("schema")
        return cls(**rec)

    def to_yaml(self, path) -> None:
        rec = {"schema": "coopga/scenario/v1", "mode": self.mode,
               "system": self.system, "duration": self.duration, "dt": self.dt,
               "seed": self.seed, "gains": self.gains, "target": self.target,
               "options": self.options, "output": self.output, "name": self.name}
        Path(path).write_text(yaml.safe_dump(rec, sort_keys=False))

    def build_system(self) -> CooperativeSystem:
        if isinstance(self.system, str):
            return load_system(self.system)
        return CooperativeSystem.from_record(self.system)

    def build_gains(self) -> Gains:
        if self.gains is None:
            return reference_gains()
        return Gains.diagonal(np.asarray(self.gains["stiffness"], dtype=float),
                              np.asarray(self.gains["damping"], dtype=float))

    def target_versor(self, sys: CooperativeSystem) -> Versor:
        from .algebra import Multivector

        if self.target is None:
            raise ValueError(f"scenario mode {self.mode!r} needs a target")
        if "joints" in self.target:
            return cooperative_similarity(sys, np.asarray(self.target["joints"], dtype=float))
        if "versor" in self.target:
            return Versor("S", Multivector(np.asarray(self.target["versor"], dtype=float)))
        raise ValueError("target must provide 'joints' or 'versor'")


def run_scenario(sc: Scenario):
    """Dispatch a scenario to its mode handler; returns (records, summary)."""
    sys = sc.build_system()
    handlers = {
        "kinematic": _run_kinematic,
        "dynamic": _run_dynamic,
        "ik": _run_ik,
        "ocp": _run_ocp,
        "nullspace": _run_nullspace,
        "singularity-sweep": _run_singularity,
    }
    if sc.mode not in handlers:
        raise ValueError(f"unknown scenario mode {sc.mode!r}")
    records, summary = handlers[sc.mode](sc, sys)
    summary["mode"] = sc.mode
    summary["seed"] = sc.seed
    if sc.output:
        out = Path(sc.output)
        write_records(records, out.with_suffix(".ndjson"))
        write_table(records, out.with_suffix(".txt"))
        summary["output"] = str(out)
    return records, summary


def _initial_q(sc: Scenario, sys: CooperativeSystem) -> np.ndarray:
    if "initial_joints" in sc.options:
        return np.asarray(sc.options["initial_joints"], dtype=float)
    if sys.dof == 21:
        return np.tile(IIWA_Q0, 3)
    from .robots import LEAP_Q0

    if sys.kind is PrimitiveKind.SPHERE and sys.dof == 16:
        return LEAP_Q0.copy()
    return np.zeros(sys.dof)


def _run_kinematic(sc: Scenario, sys: CooperativeSystem):
    """Differential-kinematics regulation toward the target versor:
    xi = k_p * log(~V_c V_d), integrated first-order."""
    q = _initial_q(sc, sys)
    Vd = sc.target_versor(sys)
    kp = float(sc.options.get("kp", 1.0))
    orient = OrientationState()
    records = [_snapshot(sys, 0.0, q, orient, V_desired=Vd)]
    steps = int(round(sc.duration / sc.dt))
    for k in range(steps):
        sj = similarity_jacobians(sys, q, orient, with_bivector=False)
        e = similarity_error(sys, q, Vd, orient)
        qd = damped_pinv(sj.J_G) @ (kp * e)
        q = step_kinematic(q, qd, sc.dt)
        records.append(_snapshot(sys, (k + 1) * sc.dt, q, orient, qd=qd, V_desired=Vd))
    final = records[-1].error_norm
    return records, {"final_error": final, "initial_error": records[0].error_norm,
                     "converged": final is not None and final < 1e-3}


def _run_dynamic(sc: Scenario, sys: CooperativeSystem):
    """Torque-driven impedance regulation toward the target versor."""
    q = _initial_q(sc, sys)
    qd = np.zeros(sys.dof)
    Vd = sc.target_versor(sys)
    gains = sc.build_gains()
    model = JointDynamicsModel.default(sys.dof)
    orient = OrientationState()
    records = [_snapshot(sys, 0.0, q, orient, qd=qd, V_desired=Vd)]
    steps = int(round(sc.duration / sc.dt))
    stride = int(sc.options.get("record_stride", 10))
    for k in range(steps):
        tau = impedance_torque(sys, q, qd, Vd, gains, model, orient)
        q, qd = step_dynamic(q, qd, tau, model, sc.dt)
        if (k + 1) % stride == 0 or k == steps - 1:
            records.append(_snapshot(sys, (k + 1) * sc.dt, q, orient, qd=qd,
                                     tau=tau, V_desired=Vd))
    return records, {"initial_error": records[0].error_norm,
                     "final_error": records[-1].error_norm}


def _run_ik(sc: Scenario, sys: CooperativeSystem):
    q0 = _initial_q(sc, sys)
    Vd = sc.target_versor(sys)
    opts = IKOptions(**sc.options.get("ik", {}))
    res = gauss_newton_ik(sys, q0, Vd, opts)
    records = [_snapshot(sys, 0.0, q0, None, V_desired=Vd),
               _snapshot(sys, 1.0, res.q, None, V_desired=Vd)]
    return records, {"converged": res.converged, "iterations": res.iterations,
                     "residual": res.residual}


def _run_ocp(sc: Scenario, sys: CooperativeSystem):
    q0 = _initial_q(sc, sys)
    Vd = sc.target_versor(sys)
    cfg = OcpConfig(**sc.options.get("ocp", {}))
    sol = solve_reaching(sys, q0, Vd, cfg)
    orient = OrientationState()
    m = sys.dof
    records = []
    stride = max(1, cfg.horizon // 50)
    for k in range(0, cfg.horizon + 1, stride):
        rec = _snapshot(sys, k * cfg.dt, sol.states[k, :m], orient,
                        qd=sol.states[k, m:], V_desired=Vd)
        records.append(rec)
    return records, {"converged": sol.converged, "iterations": sol.iterations,
                     "terminal_norm": sol.terminal_norm,
                     "cost_trace": sol.cost_trace}


def _run_nullspace(sc: Scenario, sys: CooperativeSystem):
    res = nullspace_experiment(sys=sys, projected=bool(sc.options.get("projected", True)),
                               duration=sc.duration, dt=sc.dt,
                               q0=_initial_q(sc, sys))
    return res["records"], {k: v for k, v in res.items() if k != "records"}


def _run_singularity(sc: Scenario, sys: CooperativeSystem):
    res = singularity_sweep(steps=int(sc.options.get("steps", 60)))
    return res["records"], {k: v for k, v in res.items() if k != "records"}


# -- reference experiments ------------------------------------------------------


def impedance_run(sys: CooperativeSystem, q0, V_desired: Versor, gains: Gains,
                  model: JointDynamicsModel, duration: float = 4.0,
                  dt: float = 1e-3, flow_derivative: str = "history") -> dict:
    """One torque-controlled regulation run; returns initial/final error norms.

    `flow_derivative` selects how the Coriolis term's dJ/dt qd is formed:
    "central" re-evaluates the twist at q +- h qd every step (the
    task_space_dynamics contract), "history" differences the realized flow
    using the previous step's Jacobian, equal to O(dt) at a third of the cost.
    """
    from . import kernel as _K
    from .control import TaskSpaceDynamics, assemble_task_dynamics
    from .groups import log_versor as _log_versor

    q = np.asarray(q0, dtype=float).copy()
    qd = np.zeros(sys.dof)
    orient = OrientationState()
    e0 = float(np.linalg.norm(similarity_error(sys, q, V_desired, orient)))
    steps = int(round(duration / dt))
    J_prev = None
    for _ in range(steps):
        if flow_derivative == "central":
            tau = impedance_torque(sys, q, qd, V_desired, gains, model, orient)
        else:
            sj = similarity_jacobians(sys, q, orient, with_bivector=False)
            J = sj.J_G
            J_dot_qd = np.zeros(7) if J_prev is None else (J - J_prev) @ qd / dt
            J_prev = J
            M_S, C_S, g_S = assemble_task_dynamics(sys.kind, J, J_dot_qd, model, q, qd)
            dyn = TaskSpaceDynamics(M_S=M_S, C_S=C_S, g_S=g_S, jacobians=sj,
                                    J_dot_qd=J_dot_qd)
            tau = impedance_torque(sys, q, qd, V_desired, gains, model, orient,
                                   dynamics=dyn)
        q, qd = step_dynamic(q, qd, tau, model, dt)
    e1 = float(np.linalg.norm(similarity_error(sys, q, V_desired, orient)))
    return {"initial_error": e0, "final_error": e1, "ratio": e1 / e0,
            "q_final": q, "qd_final": qd}


def _impedance_case(args):
    seed, duration, dt, perturbation = args
    from .robots import triple_arm_circle

    sys = triple_arm_circle()
    rng = np.random.default_rng(seed)
    q_nominal = np.tile(IIWA_Q0, 3)
    Vd = cooperative_similarity(sys, q_nominal)
    q0 = q_nominal + rng.uniform(-perturbation, perturbation, sys.dof)
    out = impedance_run(sys, q0, Vd, reference_gains(),
                        JointDynamicsModel.default(sys.dof), duration, dt)
    return {"seed": seed, "initial_error": out["initial_error"],
            "final_error": out["final_error"], "ratio": out["ratio"]}


def impedance_experiment(n_runs: int = 10, seed: int = 0, duration: float = 4.0,
                         dt: float = 1e-3, perturbation: float = 0.1,
                         parallel: bool = True) -> dict:
    """Impedance regulation from `n_runs` random starts around the nominal
    configuration; the runs are independent and executed in parallel."""
    cases = [(seed + i, duration, dt, perturbation) for i in range(n_runs)]
    if parallel and n_runs > 1:
        import multiprocessing as mp

        try:
            with mp.get_context("fork").Pool(min(n_runs, mp.cpu_count())) as pool:
                runs = pool.map(_impedance_case, cases)
        except (OSError, ValueError):  # pragma: no cover - fork unavailable
            runs = [_impedance_case(c) for c in cases]
    else:
        runs = [_impedance_case(c) for c in cases]
    worst = max(r["ratio"] for r in runs)
    return {"runs": runs, "worst_ratio": worst,
            "all_regulated": all(r["ratio"] < 0.05 for r in runs)}


def reaching_experiment(kind: str = "circle", seed: int = 0,
                        cfg: OcpConfig | None = None) -> dict:
    """OCP reaching between two cooperative primitives; records the error
    bivector trajectory along the optimal rollout."""
    from .robots import g1_like, leap_like, triple_arm_circle, triple_arm_plane

    cfg = cfg or OcpConfig()
    rng = np.random.default_rng(seed)
    if kind == "circle":
        sys = triple_arm_circle()
        # start from a contracted circle (elbows flexed, end points pulled
        # inward) and reach the larger nominal circle
        q_target = np.tile(IIWA_Q0, 3) + rng.uniform(-0.03, 0.03, 21)
        q0 = np.tile(IIWA_Q0, 3)
        q0[3::7] += 0.4
        q0[1::7] -= 0.15
    elif kind == "plane":
        sys = triple_arm_plane()
        q0 = np.tile(IIWA_Q0, 3)
        q_target = q0 + rng.uniform(-0.15, 0.15, sys.dof)
    elif kind == "line":
        sys = g1_like()
        q0 = 0.1 * np.ones(sys.dof)
        q_target = q0 + rng.uniform(-0.2, 0.2, sys.dof)
    elif kind == "sphere":
        sys = leap_like()
        from .robots import LEAP_Q0

        q0 = LEAP_Q0.copy()
        q_target = q0 + rng.uniform(-0.15, 0.15, sys.dof)
    else:
        raise ValueError(f"unknown reaching kind {kind!r}")

    Vd = cooperative_similarity(sys, q_target)
    sol = solve_reaching(sys, q0, Vd, cfg)
    m = sys.dof
    biv = np.stack([similarity_error(sys, sol.states[k, :m], Vd)
                    for k in range(0, cfg.horizon + 1, max(1, cfg.horizon // 50))])
    r0 = params(cooperative_primitive(sys, q0))
    r1 = params(cooperative_primitive(sys, q_target))
    return {"solution": sol, "bivector_commands": biv,
            "initial_params": r0.to_dict(), "target_params": r1.to_dict(),
            "dilation_row_max": float(np.max(np.abs(biv[:, 3])))}


def line_constraint_experiment(duration: float = 3.0, dt: float = 2e-3,
                               constrained: bool = True, seed: int = 0,
                               gain: float = 2.0, speed_cap: float = 0.3,
                               feedback: float = 400.0) -> dict:
    """Right-hand point reach on the 17-dof dual-arm system while the
    cooperative line's vertical direction component is (optionally) held
    constant through a constraint-row nullspace projection plus drift
    feedback."""
    from .cooperative import _line_direction_jet, _primitive_value_and_jacobian
    from .calculus import MVJet
    from .robots import g1_like

    sys = g1_like()
    rng = np.random.default_rng(seed)
    q = 0.1 * np.ones(sys.dof) + rng.uniform(-0.05, 0.05, sys.dof)
    right = sys.chains[1]
    q_right_slice = sys.slices()[1]

    from .algebra import extract_point
    from .primitives import direction

    x_start = extract_point(right.end_effector_point(q[q_right_slice]))
    target = x_start + np.array([0.15, -0.1, 0.12])

    def vertical_with_row(qv):
        """Vertical component of the unit line direction and its gradient."""
        value, jac = _primitive_value_and_jacobian(sys, qv)
        d = _line_direction_jet(MVJet(value, jac)).normalized()
        return float(d.v[4]), d.j[4][None, :]  # e3 row of the unit direction

    v0, _ = vertical_with_row(q)
    history = [v0]
    errs = [float(np.linalg.norm(target - x_start))]
    steps = int(round(duration / dt))
    for _ in range(steps):
        x, JP = right.point_with_jacobian(q[q_right_slice])
        x_now = extract_point(x)
        Jpos = JP[2:5, :] / x.c[1]
        step_vec = gain * (target - x_now)
        speed = np.linalg.norm(step_vec)
        if speed > speed_cap:
            step_vec *= speed_cap / speed
        qd_task = np.zeros(sys.dof)
        qd_task[q_right_slice] = damped_pinv(Jpos) @ step_vec
        if constrained:
            v_now, Jc = vertical_with_row(q)
            N = np.eye(sys.dof) - damped_pinv(Jc) @ Jc
            qd = N @ qd_task
            qd += damped_pinv(Jc) @ np.array([feedback * (v0 - v_now)])
        else:
            qd = qd_task
        q = step_kinematic(q, qd, dt)
        if constrained:
            # Newton restoration onto the constraint manifold: kills the
            # quadratic drift of the first-order projection
            for _ in range(2):
                v_now, Jc = vertical_with_row(q)
                if abs(v0 - v_now) < 1e-12:
                    break
                q = q + damped_pinv(Jc) @ np.array([v0 - v_now])
        v_now, _ = vertical_with_row(q)
        history.append(v_now)
        x_now = extract_point(right.end_effector_point(q[q_right_slice]))
        errs.append(float(np.linalg.norm(target - x_now)))
    return {"vertical_history": np.array(history), "reach_errors": np.array(errs),
            "max_vertical_drift": float(np.max(np.abs(np.array(history) - v0))),
            "final_reach_error": errs[-1], "initial_reach_error": errs[0]}


def nullspace_experiment(sys: CooperativeSystem | None = None, projected: bool = True,
                         duration: float = 5.0, dt: float = 1e-3,
                         q0: np.ndarray | None = None, gain: float = 2.0,
                         speed_cap: float = 0.5, feedback: float = 800.0,
                         angle: float = 0.25) -> dict:
    """Single-chain point reach on the 3-arm circle system, optionally
    projected into the geometric nullspace.  The target is the first chain's
    end-effector point rotated along the current cooperative circle, so it is
    reachable without changing the circle.

    The first-order projection drifts quadratically in the step size, so the
    projected run adds a primary-task feedback term pinv(J_G) k log(~V_c V_ref)
    that keeps the similarity distance at the 1e-7 level."""
    from .algebra import extract_point
    from .robots import triple_arm_circle

    if sys is None:
        sys = triple_arm_circle()
    q = np.array(q0 if q0 is not None else np.tile(IIWA_Q0, 3), dtype=float)
    orient = OrientationState()
    chain0 = sys.chains[0]
    sl0 = sys.slices()[0]

    X0 = cooperative_primitive(sys, q)
    p = params(X0)
    c, r, n = p.center, p.radius, p.normal
    x_start = extract_point(chain0.end_effector_point(q[sl0]))
    u = x_start - c
    u -= (u @ n) * n
    u /= np.linalg.norm(u)
    v = np.cross(n, u)
    # target a point further along the current circle (kept modest so the
    # single arm can actually follow its own stretch of the circle)
    target = c + r * (np.cos(angle) * u + np.sin(angle) * v)

    V_ref = cooperative_similarity(sys, q, orient)
    records = []
    sim_dists = []
    reach = [float(np.linalg.norm(target - x_start))]
    steps = int(round(duration / dt))
    for k in range(steps):
        xmv, JP = chain0.point_with_jacobian(q[sl0])
        x_now = extract_point(xmv)
        Jpos = JP[2:5, :] / xmv.c[1]
        step_vec = gain * (target - x_now)
        speed = np.linalg.norm(step_vec)
        if speed > speed_cap:
            step_vec *= speed_cap / speed
        qd_task = np.zeros(sys.dof)
        qd_task[sl0] = damped_pinv(Jpos) @ step_vec
        if projected:
            sj = similarity_jacobians(sys, q, orient, with_bivector=False)
            qd = project_secondary(sys, q, qd_task, orient, jac=sj)
            e = similarity_error(sys, q, V_ref, orient)
            qd = qd + damped_pinv(sj.J_G) @ (feedback * e)
        else:
            qd = qd_task
        q = step_kinematic(q, qd, dt)
        e = similarity_error(sys, q, V_ref, orient)
        sim_dists.append(float(np.linalg.norm(e)))
        x_now = extract_point(chain0.end_effector_point(q[sl0]))
        reach.append(float(np.linalg.norm(target - x_now)))
        if k % 100 == 0:
            records.append(_snapshot(sys, k * dt, q, orient, V_desired=V_ref))
    return {
        "records": records,
        "similarity_distances": np.array(sim_dists),
        "reach_errors": np.array(reach),
        "max_similarity_distance": float(np.max(sim_dists)),
        "reach_improvement": 1.0 - reach[-1] / reach[0],
    }


def singularity_sweep(steps: int = 80, y_start: float = 1.0,
                      y_end: float = 1e-6) -> dict:
    """Drive the third point of a cartesian circle system toward the line
    through the other two; record radius growth, manipulability decay, and the
    DegeneratePrimitive raise past the threshold."""
    from .robots import cartesian_triple

    sys = cartesian_triple()
    ys = np.geomspace(y_start, y_end, steps)
    radii, min_eigs, degeneracies = [], [], []
    records = []
    raised = False
    for i, y in enumerate(ys):
        q = np.zeros(9)
        q[4] = y - 1.0  # y-joint of the chain based at (0, 1, 0)
        try:
            sj = similarity_jacobians(sys, q, with_bivector=False)
        except DegeneratePrimitive as err:
            raised = True
            degeneracies.append(err.measure)
            records.append(TrajectoryRecord(t=float(i), q=q, degeneracy=err.measure,
                                            flags={"degenerate": True}))
            break
        radii.append(params(sj.primitive).radius)
        min_eigs.append(sj.min_manip_eig)
        degeneracies.append(sj.degeneracy)
        records.append(_snapshot(sys, float(i), q, None))
    return {
        "records": records,
        "radii": np.array(radii),
        "min_eigs": np.array(min_eigs),
        "degeneracies": np.array(degeneracies),
        "degenerate_raised": raised,
    }
