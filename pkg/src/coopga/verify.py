"""Verification suites: the finite-difference and identity oracles defined
across the modules, runnable from the command line (`coopga verify <suite>`)
and reused by the test suite."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernel as K
from .algebra import Multivector, embed_point, extract_point
from .cooperative import (
    cooperative_similarity,
    log_map_jacobian,
    similarity_jacobians,
)
from .groups import exp_versor, log_versor, random_group_bivector
from .robots import IIWA_Q0, LEAP_Q0, g1_like, leap_like, single_arm_point, triple_arm_circle


@dataclass
class Check:
    name: str
    passed: bool
    measured: float
    tolerance: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: measured {self.measured:.3e} (tol {self.tolerance:.0e})"


@dataclass
class Report:
    suite: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, measured: float, tolerance: float) -> None:
        self.checks.append(Check(name, bool(measured <= tolerance), float(measured), tolerance))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def render(self) -> str:
        lines = [f"suite: {self.suite}"] + [c.line() for c in self.checks]
        lines.append("result: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def verify_algebra(seed: int = 0) -> Report:
    rep = Report("algebra")
    e0, ei = K.blade("e0"), K.blade("ei")
    rep.add("e0^2 = 0", float(np.max(np.abs(K.gp(e0, e0)))), 0.0)
    rep.add("einf^2 = 0", float(np.max(np.abs(K.gp(ei, ei)))), 0.0)
    rep.add("e0 . einf = -1", abs(K.gp(e0, ei)[0] + 1.0), 0.0)
    I = K.blade("e0123i")
    rep.add("I^2 = -1", float(np.max(np.abs(K.gp(I, I) - (-1) * K.blade("1")))), 0.0)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(1000):
        a, b, c = rng.normal(size=(3, 32))
        scale = max(1.0, np.max(np.abs(a)) * np.max(np.abs(b)) * np.max(np.abs(c)))
        worst = max(worst, np.max(np.abs(K.gp(K.gp(a, b), c) - K.gp(a, K.gp(b, c)))) / scale)
    rep.add("associativity (1000 random triples)", worst, 1e-12)
    from .groups import VERSOR_IDX

    comp = np.setdiff1d(np.arange(32), VERSOR_IDX)
    worst = 0.0
    for _ in range(200):
        a = exp_versor(random_group_bivector(rng, "S")).c
        b = exp_versor(random_group_bivector(rng, "S")).c
        worst = max(worst, float(np.max(np.abs(K.gp(a, b)[comp]))))
    rep.add("similarity product closure (exact zeros)", worst, 0.0)
    worst = 0.0
    for _ in range(500):
        x = rng.normal(size=3) * 2
        P = embed_point(x)
        worst = max(worst, abs(P.norm_squared_signed()))
        worst = max(worst, float(np.max(np.abs(extract_point(P) - x))))
    rep.add("conformal embedding null + round trip", worst, 1e-12)
    return rep


def verify_groups(seed: int = 0, n: int = 10_000) -> Report:
    rep = Report("groups")
    rng = np.random.default_rng(seed)
    for kind in "RTDMS":
        worst_rt = 0.0
        worst_con = 0.0
        for _ in range(n):
            B = random_group_bivector(rng, kind)
            V = exp_versor(B)
            worst_con = max(worst_con, V.constraint_residual())
            B2 = log_versor(V)
            worst_rt = max(worst_rt, float(np.max(np.abs(B2.coords - B.coords))))
        rep.add(f"exp/log round trip ({kind})", worst_rt, 1e-10)
        rep.add(f"versor constraint ({kind})", worst_con, 1e-10)
    from .groups import make_dilator

    lg = log_versor(make_dilator(0.3679))
    rep.add("dilator d=0.3679 <-> -e0inf", abs(lg.coords[3] + 1.0), 1e-4)
    return rep


def _fd_versor_jacobian(sys, q, h=1e-6):
    cols = []
    for j in range(sys.dof):
        qp, qm = np.array(q, dtype=float), np.array(q, dtype=float)
        qp[j] += h
        qm[j] -= h
        cols.append((cooperative_similarity(sys, qp).c
                     - cooperative_similarity(sys, qm).c) / (2 * h))
    return np.stack(cols, axis=1)


def _fd_bivector_jacobian(sys, q, h=1e-6):
    cols = []
    for j in range(sys.dof):
        qp, qm = np.array(q, dtype=float), np.array(q, dtype=float)
        qp[j] += h
        qm[j] -= h
        bp = log_versor(cooperative_similarity(sys, qp)).coords
        bm = log_versor(cooperative_similarity(sys, qm)).coords
        cols.append((bp - bm) / (2 * h))
    return np.stack(cols, axis=1)


def verify_jacobians(seed: int = 0, configs: int = 50) -> Report:
    """FD oracle suite over the shipped 7/17/21-dof systems."""
    rep = Report("jacobians")
    rng = np.random.default_rng(seed)
    systems = [
        ("7-dof point", single_arm_point(), IIWA_Q0, 0.4),
        ("17-dof line", g1_like(), 0.1 * np.ones(17), 0.3),
        ("21-dof circle", triple_arm_circle(), np.tile(IIWA_Q0, 3), 0.25),
    ]
    for label, sys, base_q, spread in systems:
        worst_chain = worst_A = worst_B = worst_G = 0.0
        done = 0
        while done < configs:
            q = base_q + rng.uniform(-spread, spread, sys.dof)
            try:
                sj = similarity_jacobians(sys, q)
            except Exception:
                continue
            done += 1
            # chain-level analytic Jacobian vs FD
            for chain, qi in zip(sys.chains, sys.split(q)):
                _, JA = chain.fk_with_jacobian(qi)
                fd = np.stack([
                    (chain.forward_kinematics(_bump(qi, j, 1e-6)).c
                     - chain.forward_kinematics(_bump(qi, j, -1e-6)).c) / 2e-6
                    for j in range(chain.dof)], axis=1)
                worst_chain = max(worst_chain, _rel(JA.m, fd))
            fa = _fd_versor_jacobian(sys, q)
            fb = _fd_bivector_jacobian(sys, q)
            worst_A = max(worst_A, _rel(sj.J_A.m, fa))
            worst_B = max(worst_B, _rel(sj.J_B, fb))
            from .groups import SIM_BIVECTOR_BASIS

            JG_fd = SIM_BIVECTOR_BASIS.T @ (-2.0 * K.gp_mj(K.rev(sj.versor.c), fa))
            worst_G = max(worst_G, _rel(sj.J_G, JG_fd))
        rep.add(f"{label}: chain J^A vs FD", worst_chain, 1e-5)
        rep.add(f"{label}: similarity J_A vs FD", worst_A, 1e-5)
        rep.add(f"{label}: similarity J_B vs FD", worst_B, 1e-5)
        rep.add(f"{label}: similarity J_G vs FD", worst_G, 1e-5)
    # multivector-calculus rules and the log-map Jacobian
    worst = 0.0
    for _ in range(20):
        V = exp_versor(random_group_bivector(rng, "S", rot_range=(0.05, 2.5)))
        worst = max(worst, _rel(log_map_jacobian(V, "analytic"), log_map_jacobian(V, "fd")))
    rep.add("log-map Jacobian analytic vs FD", worst, 1e-5)
    return rep


def verify_controllers(seed: int = 0) -> Report:
    from .control import JointDynamicsModel, gauss_newton_ik, reference_gains, impedance_torque

    rep = Report("controllers")
    rng = np.random.default_rng(seed)
    sys = triple_arm_circle()
    q0 = np.tile(IIWA_Q0, 3)
    fails = 0
    for s in range(20):
        qt = q0 + np.random.default_rng(1000 + s).uniform(-0.25, 0.25, 21)
        Vd = cooperative_similarity(sys, qt)
        res = gauss_newton_ik(sys, q0, Vd)
        if not res.converged:
            fails += 1
    rep.add("IK failures over 20 targets", float(fails), 1.0)
    qt = q0 + rng.uniform(-0.2, 0.2, 21)
    Vd = cooperative_similarity(sys, qt)
    tau = impedance_torque(sys, qt, np.zeros(21), Vd, reference_gains(),
                           JointDynamicsModel.default(21))
    rep.add("impedance torque at target", float(np.max(np.abs(tau))), 1e-10)
    return rep


SUITES = {
    "algebra": verify_algebra,
    "groups": verify_groups,
    "jacobians": verify_jacobians,
    "controllers": verify_controllers,
}


def _bump(q, j, h):
    out = np.array(q, dtype=float)
    out[j] += h
    return out


def _rel(a, b) -> float:
    return float(np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(b))))
