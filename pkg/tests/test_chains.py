import numpy as np
import pytest

from coopga import kernel as K
from coopga.algebra import Multivector, extract_point
from coopga.chains import Joint, KinematicChain, cdts_motors
from coopga.errors import JointLimit
from coopga.groups import (
    Versor,
    bivector_to_coords,
    exp_versor,
    log_versor,
    make_rotor,
    make_translator,
    random_group_bivector,
)
from coopga.robots import IIWA_Q0, g1_like, iiwa_like, leap_like, planar_arm


def fd_motor_jacobian(chain, q, h=1e-6):
    cols = []
    for j in range(chain.dof):
        qp, qm = np.array(q, dtype=float), np.array(q, dtype=float)
        qp[j] += h
        qm[j] -= h
        cols.append((chain.forward_kinematics(qp).c - chain.forward_kinematics(qm).c) / (2 * h))
    return np.stack(cols, axis=1)


def test_screw_exp_equals_conjugated_rotor():
    rng = np.random.default_rng(0)
    for _ in range(50):
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        origin = rng.normal(size=3)
        q = rng.uniform(-3, 3)
        M = Joint.revolute(axis, origin).motor(q)
        Tp = make_translator(origin)
        conj = K.gp(K.gp(Tp.c, make_rotor(axis, q).c), K.rev(Tp.c))
        assert np.max(np.abs(M - conj)) <= 1e-12


def test_fk_zero_config_is_base_times_offset():
    arm = iiwa_like()
    M = arm.forward_kinematics(np.zeros(7))
    expected = arm.base.compose(arm.ee_offset)
    assert np.max(np.abs(M.c - expected.c)) <= 1e-12


def test_single_revolute_with_offset_ee():
    ch = KinematicChain("t", [Joint.revolute([0, 0, 1])], ee_offset=make_translator([1, 0, 0]))
    P = ch.end_effector_point([np.pi])
    assert np.max(np.abs(extract_point(P) - [-1, 0, 0])) <= 1e-12


def test_planar_two_link_matches_trig_oracle():
    arm = planar_arm((1.0, 1.0))

    def oracle(qs):
        x1 = np.array([np.cos(qs[0]), np.sin(qs[0]), 0.0])
        return x1 + [np.cos(qs[0] + qs[1]), np.sin(qs[0] + qs[1]), 0.0]

    rng = np.random.default_rng(1)
    for qs in ([np.pi / 2, 0.0], [0.3, -0.8], *(rng.uniform(-3, 3, size=2) for _ in range(20))):
        got = extract_point(arm.end_effector_point(qs))
        assert np.max(np.abs(got - oracle(qs))) <= 1e-12
    assert np.max(np.abs(extract_point(arm.end_effector_point([np.pi / 2, 0])) - [0, 2, 0])) <= 1e-12


def test_fk_versor_constraint_deep_chains():
    rng = np.random.default_rng(2)
    for sysname, chains in (("g1", g1_like().chains), ("leap", leap_like().chains)):
        for ch in chains:
            for _ in range(10):
                q = rng.uniform(-1.5, 1.5, size=ch.dof)
                assert ch.forward_kinematics(q).constraint_residual() <= 1e-10


def test_deep_chain_constraint_holds():
    # a synthetic 17-joint serial chain keeps the versor constraint
    rng = np.random.default_rng(42)
    joints = []
    for k in range(17):
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        joints.append(Joint.revolute(axis, rng.normal(size=3) * 0.3, name=f"j{k}"))
    ch = KinematicChain("deep", joints)
    for _ in range(5):
        q = rng.uniform(-2, 2, size=17)
        assert ch.forward_kinematics(q).constraint_residual() <= 1e-10


def test_analytic_jacobian_matches_fd():
    rng = np.random.default_rng(3)
    arm = iiwa_like()
    worst = 0.0
    for _ in range(10):
        q = IIWA_Q0 + rng.uniform(-0.5, 0.5, size=7)
        _, JA = arm.fk_with_jacobian(q)
        fd = fd_motor_jacobian(arm, q)
        scale = max(1.0, np.max(np.abs(fd)))
        worst = max(worst, np.max(np.abs(JA.m - fd)) / scale)
    assert worst <= 1e-6


def test_zero_dof_chain_has_empty_jacobian():
    ch = KinematicChain("static", [], base=make_translator([1, 0, 0]))
    M, JA = ch.fk_with_jacobian([])
    assert JA.n_params == 0
    assert np.max(np.abs(M.c - make_translator([1, 0, 0]).c)) == 0.0


def test_geometric_jacobian_relationship_and_bivector_columns():
    rng = np.random.default_rng(4)
    arm = iiwa_like()
    for _ in range(5):
        q = rng.uniform(-1, 1, size=7)
        M, JA = arm.fk_with_jacobian(q)
        JG = arm.geometric_jacobian(q)
        expected = -2.0 * K.gp_mj(K.rev(M.c), JA.m)
        assert np.max(np.abs(JG.m - expected)) <= 1e-12
        for j in range(7):
            col = Multivector(JG.m[:, j])
            assert col.grades(1e-9) == [2]
            coords = bivector_to_coords(col.c)
            assert abs(coords[3]) <= 1e-9  # motor bivector: no dilation part


def test_geometric_jacobian_single_joint_is_screw_axis():
    j = Joint.revolute([0, 0, 1], [0.5, 0, 0])
    ch = KinematicChain("one", [j])
    JG = ch.geometric_jacobian([0.8])
    got = bivector_to_coords(JG.m[:, 0])
    want = j.bivector.coords
    assert np.max(np.abs(got - want)) <= 1e-12


def test_fk_equivariant_under_base_change():
    rng = np.random.default_rng(5)
    arm = iiwa_like()
    q = rng.uniform(-1, 1, size=7)
    M0 = arm.forward_kinematics(q)
    V = exp_versor(random_group_bivector(rng, "M"))
    arm.base = Versor("M", Multivector(K.gp(V.c, arm.base.c)))
    M1 = arm.forward_kinematics(q)
    assert np.max(np.abs(M1.c - K.gp(V.c, M0.c))) <= 1e-12


def test_joint_limits_enforced_when_enabled():
    j = Joint.revolute([0, 0, 1], limits=(-1.0, 1.0))
    ch = KinematicChain("lim", [j])
    ch.forward_kinematics([2.0])  # default: limits off
    ch.enforce_limits = True
    with pytest.raises(JointLimit):
        ch.forward_kinematics([2.0])


def test_chain_serialization_roundtrip():
    rng = np.random.default_rng(6)
    arm = iiwa_like()
    rec = arm.to_record()
    clone = KinematicChain.from_record(rec)
    for _ in range(5):
        q = rng.uniform(-1, 1, size=7)
        assert np.max(np.abs(clone.forward_kinematics(q).c - arm.forward_kinematics(q).c)) <= 1e-12


def test_cdts_identical_chains():
    arm1, arm2 = iiwa_like("a"), iiwa_like("b")
    q = IIWA_Q0
    rel, absolute = cdts_motors(arm1, q, arm2, q)
    assert np.max(np.abs(rel.c - Multivector.scalar(1.0).c)) <= 1e-12
    assert np.max(np.abs(absolute.c - arm2.forward_kinematics(q).c)) <= 1e-10


def test_cdts_translated_chain_gives_translator_and_midpoint():
    arm1 = iiwa_like("a")
    arm2 = iiwa_like("b")
    arm2.base = make_translator([1.0, 0, 0])
    q = IIWA_Q0
    rel, absolute = cdts_motors(arm1, q, arm2, q)
    B = log_versor(rel)
    assert np.max(np.abs(B.coords[:3])) <= 1e-10  # pure translator
    p1 = extract_point(arm1.end_effector_point(q))
    p2 = extract_point(arm2.end_effector_point(q))
    pa = extract_point(Multivector(K.gp(K.gp(absolute.c, K.blade("e0")), K.rev(absolute.c))))
    assert np.max(np.abs(pa - 0.5 * (p1 + p2))) <= 1e-10
