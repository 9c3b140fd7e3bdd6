"""Command line entry point: run scenarios, solve IK/OCP one-off, launch the
teleoperation service, run verification suites, inspect configurations."""

from __future__ import annotations

import argparse
import json
import sys as _sys

import numpy as np


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="coopga",
        description="Cooperative task-space control with conformal geometric algebra")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario file")
    p_run.add_argument("--scenario", required=True, help="scenario YAML path")
    p_run.add_argument("--out", default=None, help="output basename (overrides scenario)")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--format", choices=("table", "records"), default="table")
    p_run.add_argument("--json", action="store_true", help="machine-readable summary")

    p_ik = sub.add_parser("ik", help="one-shot inverse kinematics")
    p_ik.add_argument("--system", default="triple_arm_circle")
    p_ik.add_argument("--target-joints", default=None,
                      help="comma-separated joint values defining the target versor")
    p_ik.add_argument("--seed", type=int, default=0)
    p_ik.add_argument("--json", action="store_true")

    p_ocp = sub.add_parser("ocp", help="one-shot iLQR reaching solve")
    p_ocp.add_argument("--system", default="triple_arm_circle")
    p_ocp.add_argument("--target-joints", default=None)
    p_ocp.add_argument("--seed", type=int, default=0)
    p_ocp.add_argument("--horizon", type=int, default=250)
    p_ocp.add_argument("--dt", type=float, default=1e-3)
    p_ocp.add_argument("--out", default=None)
    p_ocp.add_argument("--json", action="store_true")

    p_tel = sub.add_parser("teleop", help="launch the teleoperation service")
    p_tel.add_argument("--system", default="leap_like")
    p_tel.add_argument("--host", default="127.0.0.1")
    p_tel.add_argument("--port", type=int, default=8765)
    p_tel.add_argument("--dt", type=float, default=0.01)
    p_tel.add_argument("--log", default=None, help="write the session log here on exit")
    p_tel.add_argument("--states-out", default=None,
                       help="tee the state stream to this ndjson file")

    p_ver = sub.add_parser("verify", help="run a verification suite")
    p_ver.add_argument("suite", choices=("algebra", "groups", "jacobians", "controllers", "all"))
    p_ver.add_argument("--seed", type=int, default=0)

    p_ins = sub.add_parser("inspect", help="report the cooperative state at a configuration")
    p_ins.add_argument("--system", default="triple_arm_circle")
    p_ins.add_argument("--joints", default=None, help="comma-separated joint values")
    p_ins.add_argument("--json", action="store_true")

    args = parser.parse_args(argv)
    return {
        "run": _cmd_run, "ik": _cmd_ik, "ocp": _cmd_ocp,
        "teleop": _cmd_teleop, "verify": _cmd_verify, "inspect": _cmd_inspect,
    }[args.command](args)


def _parse_joints(text, dof):
    if text is None:
        return None
    vals = np.array([float(v) for v in text.split(",")], dtype=float)
    if vals.shape != (dof,):
        raise SystemExit(f"expected {dof} joint values, got {len(vals)}")
    return vals


def _default_q(system):
    from .robots import IIWA_Q0, LEAP_Q0

    if system.dof == 21:
        return np.tile(IIWA_Q0, 3)
    if system.dof == 16:
        return LEAP_Q0.copy()
    if system.dof == 7:
        return IIWA_Q0.copy()
    return np.zeros(system.dof)


def _cmd_run(args) -> int:
    from .sim import Scenario, run_scenario

    sc = Scenario.from_yaml(args.scenario)
    if args.out is not None:
        sc.output = args.out
    if args.seed is not None:
        sc.seed = args.seed
    print(f"# scenario: mode={sc.mode} system={sc.system} dt={sc.dt} "
          f"duration={sc.duration} seed={sc.seed}")
    records, summary = run_scenario(sc)
    if args.format == "records":
        for rec in records:
            print(json.dumps(rec.to_dict()))
    else:
        import tempfile
        from pathlib import Path

        from .sim import write_table

        with tempfile.TemporaryDirectory() as td:
            path = Path(td) / "table.txt"
            write_table(records, path)
            lines = path.read_text().splitlines()
        head = lines[:6]
        tail = lines[-3:] if len(lines) > 9 else []
        print("\n".join(head + (["..."] if tail else []) + tail))
    if args.json:
        print(json.dumps(_plain(summary)))
    else:
        for k, v in _plain(summary).items():
            print(f"{k}: {v}")
    ok = summary.get("converged", True)
    return 0 if ok else 1


def _cmd_ik(args) -> int:
    from .control import gauss_newton_ik
    from .cooperative import cooperative_similarity
    from .robots import load_system

    system = load_system(args.system)
    q0 = _default_q(system)
    qt = _parse_joints(args.target_joints, system.dof)
    if qt is None:
        rng = np.random.default_rng(args.seed)
        qt = q0 + rng.uniform(-0.2, 0.2, system.dof)
    Vd = cooperative_similarity(system, qt)
    res = gauss_newton_ik(system, q0, Vd)
    out = {"converged": res.converged, "iterations": res.iterations,
           "residual": res.residual}
    print(json.dumps(out) if args.json else
          f"converged={res.converged} iterations={res.iterations} residual={res.residual:.3e}")
    return 0 if res.converged else 1


def _cmd_ocp(args) -> int:
    from .cooperative import cooperative_similarity
    from .ocp import OcpConfig, solve_reaching
    from .robots import load_system
    from .sim import Scenario, run_scenario

    system = load_system(args.system)
    q0 = _default_q(system)
    qt = _parse_joints(args.target_joints, system.dof)
    if qt is None:
        rng = np.random.default_rng(args.seed)
        qt = q0 + rng.uniform(-0.15, 0.15, system.dof)
    cfg = OcpConfig(horizon=args.horizon, dt=args.dt)
    sol = solve_reaching(system, q0, cooperative_similarity(system, qt), cfg)
    out = {"converged": sol.converged, "iterations": sol.iterations,
           "terminal_norm": sol.terminal_norm}
    print(json.dumps(out) if args.json else
          f"converged={sol.converged} iterations={sol.iterations} "
          f"terminal={sol.terminal_norm:.3e}")
    if args.out:
        np.savez(args.out, states=sol.states, controls=sol.controls)
        print(f"trajectory written to {args.out}")
    return 0 if sol.converged else 1


def _cmd_teleop(args) -> int:
    from pathlib import Path

    from .robots import load_system
    from .teleop import TeleopConfig, TeleopServer
    import asyncio

    system = load_system(args.system)
    sink = None
    fh = None
    if args.states_out:
        fh = open(args.states_out, "w")
        sink = lambda payload: fh.write(json.dumps(payload) + "\n")
    server = TeleopServer(system, _default_q(system), TeleopConfig(dt=args.dt),
                          state_sink=sink)
    print(f"serving {args.system} on ws://{args.host}:{args.port} (dt={args.dt}s)")
    try:
        asyncio.run(server.serve(args.host, args.port))
    except KeyboardInterrupt:
        pass
    finally:
        if fh is not None:
            fh.close()
            print(f"state stream written to {args.states_out}")
        if args.log:
            Path(args.log).write_text(server.log.to_json())
            print(f"session log written to {args.log}")
    return 0


def _cmd_verify(args) -> int:
    from .verify import SUITES

    names = list(SUITES) if args.suite == "all" else [args.suite]
    ok = True
    for name in names:
        rep = SUITES[name](seed=args.seed)
        print(rep.render())
        ok = ok and rep.passed
    return 0 if ok else 1


def _cmd_inspect(args) -> int:
    from .cooperative import (CONTROLLABLE_MASK, cooperative_primitive,
                              manipulability, similarity_jacobians)
    from .errors import DegeneratePrimitive
    from .groups import SIM_COORD_NAMES, decompose_similarity, log_versor
    from .robots import load_system
    from .primitives import params

    system = load_system(args.system)
    q = _parse_joints(args.joints, system.dof)
    if q is None:
        q = _default_q(system)
    out = {"system": args.system, "kind": system.kind.value, "dof": system.dof,
           "mask": [SIM_COORD_NAMES[i] for i in CONTROLLABLE_MASK[system.kind]]}
    try:
        sj = similarity_jacobians(system, q)
        out["primitive"] = params(sj.primitive).to_dict()
        out["bivector"] = dict(zip(SIM_COORD_NAMES, map(float, sj.bivector)))
        T, R, D = decompose_similarity(sj.versor)
        out["translation"] = [float(v) for v in log_versor(T).coords[4:7]]
        out["rotation_bivector"] = [float(v) for v in log_versor(R).coords[:3]]
        out["scale"] = float(np.exp(log_versor(D).coords[3]))
        _, eigs = manipulability(system, q)
        out["manipulability_eigenvalues"] = [float(v) for v in eigs]
        out["degeneracy"] = float(sj.degeneracy)
        out["near_singular"] = bool(sj.near_singular)
    except DegeneratePrimitive as err:
        out["degenerate"] = True
        out["degeneracy"] = float(err.measure)
    if args.json:
        print(json.dumps(out))
    else:
        for k, v in out.items():
            print(f"{k}: {v}")
    return 0


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return float(obj)
    return obj


if __name__ == "__main__":
    _sys.exit(main())
