"""Tests for the forward-kinematics pipeline.

Every fixture here is planar (x-z plane, +y joint axes) with geometry simple
enough to solve by hand.  The expected angles, lengths, and closure relations
were derived on paper first and frozen as closed forms in this file; the grid
search in the rocker test is an independent numeric oracle that never calls
the solver.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loopkin import fk, geometry, topology
from loopkin.errors import ActuatorBoundsError, NoRootError
from test_topology import Rig, jid, lid


# ---------------------------------------------------------------------------
# fixture builder


class KinRig(Rig):
    """Rig with actuator mounts at chosen positions instead of defaults."""

    def actuator(self, name, tube_parent, rod_parent, tube_at, rod_at,
                 bounds, axis=(0, 1, 0), redundant=()):
        tube, rod = name + "_tube", name + "_rod"
        self.link(tube).link(rod)
        self.joint(name + "_tm", tube_parent, tube, t=tube_at, axis=axis)
        self.joint(name + "_rm", rod_parent, rod, t=rod_at, axis=axis)
        self.doc["actuators"].append({
            "name": name,
            "tube": {"link": tube, "parent": tube_parent},
            "rod": {"link": rod, "parent": rod_parent},
            "bounds": [float(bounds[0]), float(bounds[1])],
            "redundant": list(redundant),
        })
        return self


def slider_robot():
    # carriage rides +x from the base origin; both mounts on that axis, so
    # length is exactly 1 + theta (rest length 1).
    rig = KinRig("slider")
    rig.link("base").link("carriage")
    rig.joint("slide", "base", "carriage", kind="prismatic", t=(0, 0, 0), axis=(1, 0, 0))
    rig.actuator("ram", "base", "carriage", (0, 0, 0), (1, 0, 0), (0.5, 3.0))
    return rig.compile()


def hinge_robot(r1=1.0, r2=1.0, bounds=None):
    # arm pivots about the base origin; tube anchor r1 out on +x, rod anchor
    # r2 below the pivot on the arm.  l(theta)^2 = r1^2 + r2^2 + 2 r1 r2 sin(theta),
    # i.e. the law of cosines with enclosed angle theta + pi/2.
    if bounds is None:
        bounds = (abs(r1 - r2) + 0.04, r1 + r2 - 0.04)
    rig = KinRig("hinge")
    rig.link("base").link("arm")
    rig.joint("pivot", "base", "arm", t=(0, 0, 0))
    rig.actuator("jack", "base", "arm", (r1, 0, 0), (0, 0, -r2), bounds)
    return rig.compile()


def hinge_length(r1, r2, theta):
    return math.sqrt(r1 * r1 + r2 * r2 + 2.0 * r1 * r2 * math.sin(theta))


def hinge_angle(r1, r2, length):
    # law-of-cosines branch with theta in (-pi/2, pi/2)
    gamma = math.acos((r1 * r1 + r2 * r2 - length * length) / (2.0 * r1 * r2))
    return gamma - math.pi / 2.0


def parallelogram_rig():
    # ground pivots at (0,0,0) [loop pin] and (2,0,0) [input]; crank and
    # follower of length 1, coupler of length 2: a parallelogram, so the
    # coupler never rotates and (alpha, beta) = (-theta, theta).
    rig = KinRig("parallelogram")
    rig.link("base").link("b").link("c").link("d")
    rig.joint("j_ab", "base", "b", t=(2, 0, 0))
    rig.joint("j_bc", "b", "c", t=(0, 0, 1))
    rig.joint("j_cd", "c", "d", t=(-2, 0, 0))
    rig.joint("j_da", "d", "base", t=(0, 0, -1))
    return rig


def parallelogram_driven():
    # cylinder from the base to the middle of the crank:
    # l(theta)^2 = (1.5 + 0.5 sin t)^2 + (0.5 cos t + 0.5)^2
    rig = parallelogram_rig()
    rig.actuator("drive", "base", "b", (0.5, 0, -0.5), (0, 0, 0.5), (1.25, 2.0))
    return rig.compile()


def drive_length(theta):
    s, c = math.sin(theta), math.cos(theta)
    return math.hypot(1.5 + 0.5 * s, 0.5 * c + 0.5)


def rocker_robot(with_drive=False):
    # non-Grashof double rocker: ground 3.0, crank 1.2 at (3,0,0), coupler
    # 2.8 back toward the pin, follower sqrt(0.04 + 1.44) closing at the
    # origin.  Authored closed at rest: crank tip (3,0,1.2), coupler end
    # (0.2,0,1.2), follower drop (-0.2,0,-1.2) lands exactly on (0,0,0).
    rig = KinRig("rocker")
    rig.link("base").link("b").link("c").link("d")
    rig.joint("j_ab", "base", "b", t=(3, 0, 0))
    rig.joint("j_bc", "b", "c", t=(0, 0, 1.2))
    rig.joint("j_cd", "c", "d", t=(-2.8, 0, 0))
    rig.joint("j_da", "d", "base", t=(-0.2, 0, -1.2))
    if with_drive:
        rig.actuator("crank_ram", "base", "b", (1.4, 0, -0.3), (0, 0, 0.6), (1.5, 2.6))
    return rig.compile()


def crossed_lift_robot():
    # parallelogram + canopy hinged at coupler midspan (world (1,0,1) at
    # rest); two independent cylinders from the base to the canopy form a
    # crossing pair, each one's strut closing the other's local loop.
    rig = parallelogram_rig()
    rig.link("canopy")
    rig.joint("j_canopy", "c", "canopy", t=(-1, 0, 0))
    rig.actuator("lift0", "base", "canopy", (-0.3, 0, 0), (0.5, 0, 0.2), (1.6, 2.8))
    rig.actuator("lift1", "base", "canopy", (0.8, 0, 0), (-0.5, 0, 0.2), (0.8, 2.0))
    return rig.compile()


def lift_lengths(theta, hinge):
    """Analytic anchor chain for crossed_lift_robot, solver-free."""
    s, c = math.sin(theta), math.cos(theta)
    pivot = (1.0 + s, 1.0 * c)  # canopy hinge in the x-z plane
    c2, s2 = math.cos(hinge), math.sin(hinge)

    def rot(v):
        return (c2 * v[0] + s2 * v[1], -s2 * v[0] + c2 * v[1])

    a0 = rot((0.5, 0.2))
    a1 = rot((-0.5, 0.2))
    l0 = math.hypot(pivot[0] + a0[0] - (-0.3), pivot[1] + a0[1])
    l1 = math.hypot(pivot[0] + a1[0] - 0.8, pivot[1] + a1[1])
    return l0, l1


def combo_robot():
    # hinge arm plus an independent slider branch hanging below the base
    rig = KinRig("combo")
    rig.link("base").link("arm").link("carriage")
    rig.joint("pivot", "base", "arm", t=(0, 0, 0))
    rig.joint("slide", "base", "carriage", kind="prismatic", t=(0, 0, -1), axis=(1, 0, 0))
    rig.actuator("jack", "base", "arm", (1, 0, 0), (0, 0, -1), (0.5, 1.9))
    rig.actuator("ram", "base", "carriage", (0, 0, -1), (1, 0, 0), (0.5, 3.0))
    return rig.compile()


def model_of(robot):
    graph = topology.contract_four_bars(robot)
    iteps = topology.extract_iteps(robot, graph)
    return graph, iteps


def anchor(config, joint_id):
    return config.joint_pose[joint_id].translation


# ---------------------------------------------------------------------------
# scalar root solving


def test_scalar_root_linear():
    problem = fk.RootProblem(lambda t: t - 0.5, warm_start=0.0,
                             bracket=(-2.0, 2.0), tolerance=1e-9)
    assert fk.solve_scalar_root(problem) == pytest.approx(0.5, abs=1e-9)


def test_scalar_root_cosine():
    problem = fk.RootProblem(math.cos, warm_start=1.0,
                             bracket=(0.0, math.pi), tolerance=1e-6)
    assert fk.solve_scalar_root(problem) == pytest.approx(math.pi / 2, abs=1e-6)


def test_scalar_root_reports_best_on_no_root():
    problem = fk.RootProblem(lambda t: t * t + 1.0, warm_start=0.0,
                             bracket=(-1.0, 1.0), tolerance=1e-6)
    with pytest.raises(NoRootError) as err:
        fk.solve_scalar_root(problem)
    assert err.value.best_residual == pytest.approx(1.0, abs=1e-6)
    assert err.value.best_theta == pytest.approx(0.0, abs=1e-3)


# ---------------------------------------------------------------------------
# configuration and lengths


def test_rest_configuration_and_lengths():
    robot = hinge_robot()
    config = fk.Configuration(robot)
    act = robot.actuators[0]
    # anchors at rest: tube (1,0,0), rod (0,0,-1) -> length sqrt(2)
    assert anchor(config, act.tube_mount) == pytest.approx((1.0, 0.0, 0.0), abs=1e-12)
    assert anchor(config, act.rod_mount) == pytest.approx((0.0, 0.0, -1.0), abs=1e-12)
    assert config.lengths[0] == pytest.approx(math.sqrt(2.0), abs=1e-12)
    assert fk.actuator_length(robot, config, act) == pytest.approx(math.sqrt(2.0), abs=1e-12)
    assert config.check_consistency() <= 1e-9


def test_actuator_length_frame_independent():
    robot = hinge_robot()
    config = fk.Configuration(robot)
    config.set_params({jid(robot, "pivot"): 0.3})
    act = robot.actuators[0]
    world = fk.actuator_length(robot, config, act)
    # recompute in the tube parent's frame instead of the world frame
    into_parent = config.link_pose[act.tube_parent].inverse()
    t_local = into_parent.apply(anchor(config, act.tube_mount))
    r_local = into_parent.apply(anchor(config, act.rod_mount))
    assert world == pytest.approx(geometry.vec_norm(geometry.vec_sub(t_local, r_local)), abs=1e-9)
    assert world == pytest.approx(hinge_length(1.0, 1.0, 0.3), abs=1e-12)


def test_configuration_copy_is_independent():
    robot = hinge_robot()
    config = fk.Configuration(robot)
    clone = config.copy()
    clone.set_params({jid(robot, "pivot"): 0.5})
    assert config.params[jid(robot, "pivot")] == 0.0
    assert config.lengths[0] == pytest.approx(math.sqrt(2.0), abs=1e-12)
    assert clone.lengths[0] == pytest.approx(hinge_length(1.0, 1.0, 0.5), abs=1e-12)


def test_recompute_matches_fresh_propagation():
    robot = combo_robot()
    config = fk.Configuration(robot)
    config.set_params({jid(robot, "pivot"): -0.4, jid(robot, "slide"): 0.8})
    fresh = fk.Configuration(robot)
    fresh.set_params({jid(robot, "pivot"): -0.4, jid(robot, "slide"): 0.8})
    for i in range(len(robot.links)):
        assert config.link_pose[i].translation == pytest.approx(
            fresh.link_pose[i].translation, abs=1e-12)
    assert config.check_consistency() <= 1e-9


# ---------------------------------------------------------------------------
# Type A: prismatic transmission


def test_type_a_solve_is_exact():
    robot = slider_robot()
    graph, iteps = model_of(robot)
    assert iteps[0].kind == "A"
    config = fk.Configuration(robot)
    fk.solve_itep(robot, iteps[0], 1.7, config, actuator=robot.actuators[0])
    # collinear mounts: l = 1 + theta, so theta = 0.7 to round-off accuracy
    assert config.params[jid(robot, "slide")] == pytest.approx(0.7, abs=1e-9)
    assert config.lengths[0] == pytest.approx(1.7, abs=1e-9)


def test_repeat_with_same_targets_is_identity():
    robot = slider_robot()
    config = fk.Configuration(robot)
    fk.forward_kinematics(robot, [1.7], config)
    snapshot = list(config.params)
    fk.forward_kinematics(robot, [1.7], config)
    assert config.params == snapshot


# ---------------------------------------------------------------------------
# Type B: revolute transmission


def test_type_b_law_of_cosines_solution():
    robot = hinge_robot()
    graph, iteps = model_of(robot)
    assert iteps[0].kind == "B"
    config = fk.Configuration(robot)
    fk.solve_itep(robot, iteps[0], 1.0, config, actuator=robot.actuators[0])
    # unit anchors and l* = 1 form an equilateral triangle: the enclosed
    # angle is pi/3, which is pi/6 short of the rest-pose right angle
    assert config.params[jid(robot, "pivot")] == pytest.approx(-math.pi / 6, abs=1e-6)
    assert config.lengths[0] == pytest.approx(1.0, abs=1e-6)


def test_type_b_sweep_matches_closed_form():
    robot = hinge_robot()
    config = fk.Configuration(robot)
    previous = None
    for i in range(100):
        target = 0.6 + (1.85 - 0.6) * i / 99.0
        fk.forward_kinematics(robot, [target], config)
        got = config.params[jid(robot, "pivot")]
        assert got == pytest.approx(hinge_angle(1.0, 1.0, target), abs=1e-6)
        if previous is not None:
            assert abs(got - previous) < 0.5  # warm-started: no branch jump
        previous = got


@settings(max_examples=60, deadline=None)
@given(r1=st.floats(0.5, 2.0), r2=st.floats(0.5, 2.0), frac=st.floats(0.05, 0.95))
def test_type_b_random_geometry_matches_law_of_cosines(r1, r2, frac):
    lo = abs(r1 - r2) + 0.08
    hi = r1 + r2 - 0.08
    target = lo + frac * (hi - lo)
    robot = hinge_robot(r1, r2)
    config = fk.Configuration(robot)
    fk.forward_kinematics(robot, [target], config)
    assert config.lengths[0] == pytest.approx(target, abs=1e-6)
    assert config.params[jid(robot, "pivot")] == pytest.approx(
        hinge_angle(r1, r2, target), abs=1e-6)


# ---------------------------------------------------------------------------
# four-bar closure


def _closure_points(robot, config, theta, alpha, beta):
    """In-test chain arithmetic: world pin target and reached closure point."""
    j_ab = robot.joints[jid(robot, "j_ab")]
    j_bc = robot.joints[jid(robot, "j_bc")]
    j_cd = robot.joints[jid(robot, "j_cd")]
    j_da = robot.joints[jid(robot, "j_da")]
    w_ground = config.link_pose[j_ab.parent]
    w_b = w_ground.compose(geometry.joint_transform("revolute", j_ab.axis, theta, j_ab.origin)).compose(j_ab.tail)
    w_c = w_b.compose(geometry.joint_transform("revolute", j_bc.axis, alpha, j_bc.origin)).compose(j_bc.tail)
    w_d = w_c.compose(geometry.joint_transform("revolute", j_cd.axis, beta, j_cd.origin)).compose(j_cd.tail)
    reached = w_d.compose(j_da.origin).translation
    pinned = w_ground.apply(j_da.tail.inverse().translation)
    return reached, pinned


def test_rest_closure_is_trivial():
    robot = parallelogram_rig().compile()
    graph, _ = model_of(robot)
    config = fk.Configuration(robot)
    alpha, beta = fk.solve_four_bar_closure(graph.four_bars[0], 0.0, config)
    assert alpha == pytest.approx(0.0, abs=1e-9)
    assert beta == pytest.approx(0.0, abs=1e-9)
    reached, pinned = _closure_points(robot, config, 0.0, 0.0, 0.0)
    assert reached == pytest.approx(pinned, abs=1e-9)


def test_parallelogram_closure_relation():
    robot = parallelogram_rig().compile()
    graph, _ = model_of(robot)
    config = fk.Configuration(robot)
    for theta in (-0.6, -0.2, 0.3, 0.7):
        alpha, beta = fk.solve_four_bar_closure(graph.four_bars[0], theta, config)
        assert alpha == pytest.approx(-theta, abs=1e-6)
        assert beta == pytest.approx(theta, abs=1e-6)
        reached, pinned = _closure_points(robot, config, theta, alpha, beta)
        assert geometry.vec_norm(geometry.vec_sub(reached, pinned)) <= 1e-6


def test_rocker_closure_matches_grid_search():
    robot = rocker_robot()
    graph, _ = model_of(robot)
    config = fk.Configuration(robot)
    for theta in (-0.4, -0.13, 0.2, 0.45):
        alpha, beta = fk.solve_four_bar_closure(graph.four_bars[0], theta, config)
        reached, pinned = _closure_points(robot, config, theta, alpha, beta)
        assert geometry.vec_norm(geometry.vec_sub(reached, pinned)) <= 1e-6

        # two-stage planar grid search, vectorized and solver-free: crank
        # tip h1, coupler end h2, then the follower drop onto the pin
        def residual_grid(a_grid, b_grid):
            h1x = 3.0 + 1.2 * math.sin(theta)
            h1z = 1.2 * math.cos(theta)
            phi_c = theta + a_grid
            h2x = h1x - 2.8 * np.cos(phi_c)
            h2z = h1z + 2.8 * np.sin(phi_c)
            phi_d = phi_c + b_grid
            px = h2x + (-0.2) * np.cos(phi_d) + (-1.2) * np.sin(phi_d)
            pz = h2z - (-0.2) * np.sin(phi_d) + (-1.2) * np.cos(phi_d)
            return px * px + pz * pz

        best = (0.0, 0.0)
        half = 0.9
        for _ in range(2):
            a_axis = np.linspace(best[0] - half, best[0] + half, 301)
            b_axis = np.linspace(best[1] - half, best[1] + half, 301)
            a_grid, b_grid = np.meshgrid(a_axis, b_axis, indexing="ij")
            idx = np.unravel_index(np.argmin(residual_grid(a_grid, b_grid)), a_grid.shape)
            best = (float(a_axis[idx[0]]), float(b_axis[idx[1]]))
            half = 2.5 * (a_axis[1] - a_axis[0])
        assert alpha == pytest.approx(best[0], abs=1e-4)
        assert beta == pytest.approx(best[1], abs=1e-4)


def test_closure_warm_ramp_is_continuous():
    robot = rocker_robot()
    graph, _ = model_of(robot)
    config = fk.Configuration(robot)
    previous = (0.0, 0.0)
    for i in range(1, 11):
        theta = 0.45 * i / 10.0
        alpha, beta = fk.solve_four_bar_closure(graph.four_bars[0], theta, config)
        assert abs(alpha - previous[0]) < 0.3
        assert abs(beta - previous[1]) < 0.3
        config.set_params({jid(robot, "j_ab"): theta, jid(robot, "j_bc"): alpha,
                           jid(robot, "j_cd"): beta})
        previous = (alpha, beta)


# ---------------------------------------------------------------------------
# Type C: four-bar transmission


def test_type_c_solve_hits_targets_and_closure():
    robot = parallelogram_driven()
    graph, iteps = model_of(robot)
    assert iteps[0].kind == "C"
    config = fk.Configuration(robot)
    for target in (1.3, 1.6, 1.95):
        fk.forward_kinematics(robot, [target], config, graph=graph, iteps=iteps)
        assert config.lengths[0] == pytest.approx(target, abs=1e-6)
        theta = config.params[jid(robot, "j_ab")]
        assert drive_length(theta) == pytest.approx(target, abs=1e-6)
        # parallelogram coupling must hold through the solve
        assert config.params[jid(robot, "j_bc")] == pytest.approx(-theta, abs=1e-6)
        assert config.params[jid(robot, "j_cd")] == pytest.approx(theta, abs=1e-6)
        assert fk.closure_residual(config, graph.four_bars[0]) <= 1e-6


def test_type_c_unreachable_target_raises_and_rolls_back():
    robot = rocker_robot(with_drive=True)
    config = fk.Configuration(robot)
    before = list(config.params)
    # within bounds but beyond the rocker's assembly range (max ~ 2.18)
    with pytest.raises(NoRootError) as err:
        fk.forward_kinematics(robot, [2.5], config)
    assert "crank_ram" in str(err.value)
    assert config.params == before


def test_out_of_bounds_target_raises_without_touching_config():
    robot = slider_robot()
    config = fk.Configuration(robot)
    before = list(config.params)
    with pytest.raises(ActuatorBoundsError) as err:
        fk.forward_kinematics(robot, [5.0], config)
    assert "ram" in str(err.value)
    assert config.params == before


# ---------------------------------------------------------------------------
# Type D: nested-loop transmission


def test_type_d_roundtrip_recovers_probe_configuration():
    robot = crossed_lift_robot()
    graph, iteps = model_of(robot)
    assert iteps[0].kind == "D"
    assert iteps[1].kind == "D"
    # targets computed from the analytic chain at (theta, hinge) = (0.25, -0.2)
    l0, l1 = lift_lengths(0.25, -0.2)
    config = fk.Configuration(robot)
    fk.forward_kinematics(robot, [l0, l1], config, graph=graph, iteps=iteps)
    assert config.lengths[0] == pytest.approx(l0, abs=1e-6)
    assert config.lengths[1] == pytest.approx(l1, abs=1e-6)
    assert config.params[jid(robot, "j_ab")] == pytest.approx(0.25, abs=1e-6)
    assert config.params[jid(robot, "j_canopy")] == pytest.approx(-0.2, abs=1e-6)
    assert config.params[jid(robot, "j_bc")] == pytest.approx(-0.25, abs=1e-6)
    assert config.params[jid(robot, "j_cd")] == pytest.approx(0.25, abs=1e-6)
    assert fk.closure_residual(config, graph.four_bars[0]) <= 1e-6


def test_type_d_partner_length_frozen_during_single_solve():
    robot = crossed_lift_robot()
    graph, iteps = model_of(robot)
    config = fk.Configuration(robot)
    rest_l1 = config.lengths[1]
    l0, _ = lift_lengths(0.18, -0.1)
    fk.solve_itep(robot, iteps[0], l0, config, actuator=robot.actuators[0], graph=graph)
    assert config.lengths[0] == pytest.approx(l0, abs=1e-6)
    # the partner cylinder is the welded side of the local loop: solving
    # lift0 must not change lift1's length
    assert config.lengths[1] == pytest.approx(rest_l1, abs=1e-9)


def test_type_d_solve_order_is_permutation_invariant():
    robot = crossed_lift_robot()
    graph, iteps = model_of(robot)
    targets = lift_lengths(-0.2, 0.15)

    def run(order):
        config = fk.Configuration(robot)
        for i in order:
            fk.solve_itep(robot, iteps[i], targets[i], config,
                          actuator=robot.actuators[i], graph=graph)
        return config

    forward = run((0, 1))
    backward = run((1, 0))
    for i in (0, 1):
        assert forward.lengths[i] == pytest.approx(targets[i], abs=1e-6)
        assert backward.lengths[i] == pytest.approx(targets[i], abs=1e-6)
    for name in ("j_ab", "j_bc", "j_cd", "j_canopy"):
        assert forward.params[jid(robot, name)] == pytest.approx(
            backward.params[jid(robot, name)], abs=1e-6)


# ---------------------------------------------------------------------------
# pipeline composition


def test_pipeline_skips_inactive_and_conserves_unrelated_joints():
    robot = combo_robot()
    config = fk.Configuration(robot)
    fk.forward_kinematics(robot, list(config.lengths), config)  # settle mounts
    snapshot = list(config.params)
    targets = [config.lengths[0], 1.7]  # move only the slider branch
    fk.forward_kinematics(robot, targets, config)
    assert config.lengths[1] == pytest.approx(1.7, abs=1e-9)
    assert config.params[jid(robot, "slide")] == pytest.approx(0.7, abs=1e-9)
    jack = robot.actuators[0]
    for j in (jid(robot, "pivot"), jack.tube_mount, jack.rod_mount):
        assert config.params[j] == snapshot[j]


def test_pipeline_matches_manual_composition():
    robot = combo_robot()
    graph, iteps = model_of(robot)
    auto = fk.Configuration(robot)
    fk.forward_kinematics(robot, [1.0, 2.2], auto, graph=graph, iteps=iteps)

    manual = fk.Configuration(robot)
    fk.solve_itep(robot, iteps[0], 1.0, manual, actuator=robot.actuators[0], graph=graph)
    fk.solve_itep(robot, iteps[1], 2.2, manual, actuator=robot.actuators[1], graph=graph)
    fk.look_at_refine(robot, manual)
    assert auto.params == manual.params

    single = fk.Configuration(slider_robot())
    fk.forward_kinematics(single.robot, [1.7], single)
    assert single.params[jid(single.robot, "slide")] == pytest.approx(0.7, abs=1e-9)


# ---------------------------------------------------------------------------
# look-at refinement


def test_look_at_refine_angles_on_hinge():
    robot = hinge_robot()
    config = fk.Configuration(robot)
    fk.forward_kinematics(robot, [1.0], config)
    act = robot.actuators[0]
    # anchors (1,0,0) and (0.5,0,-sqrt(3)/2): the tube must swing 120
    # degrees about +y to face the rod; the rod mount rides the arm
    # (already at -pi/6), so it only needs -pi/6 more
    assert config.params[act.tube_mount] == pytest.approx(2 * math.pi / 3, abs=1e-9)
    assert config.params[act.rod_mount] == pytest.approx(-math.pi / 6, abs=1e-9)
    assert config.lengths[0] == pytest.approx(1.0, abs=1e-9)

    d = geometry.normalize(geometry.vec_sub(anchor(config, act.rod_mount),
                                            anchor(config, act.tube_mount)))
    tube_x = tuple(row[0] for row in config.link_pose[act.tube_link].rotation)
    rod_x = tuple(row[0] for row in config.link_pose[act.rod_link].rotation)
    assert geometry.vec_dot(tube_x, d) == pytest.approx(1.0, abs=1e-9)
    assert geometry.vec_dot(rod_x, d) == pytest.approx(-1.0, abs=1e-9)


def test_look_at_refine_is_idempotent():
    robot = hinge_robot()
    config = fk.Configuration(robot)
    fk.forward_kinematics(robot, [1.3], config)
    snapshot = list(config.params)
    fk.look_at_refine(robot, config)
    assert config.params == snapshot


def test_look_at_default_direction_is_zero_angle():
    robot = slider_robot()
    config = fk.Configuration(robot)
    fk.look_at_refine(robot, config)
    act = robot.actuators[0]
    # rod anchor sits on +x of the tube mount frame, the default strut axis
    assert abs(config.params[act.tube_mount]) <= 1e-12
