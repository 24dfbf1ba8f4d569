"""Forward kinematics over extracted transmission paths.

A Configuration caches world poses for every link and joint of a compiled
robot.  Each actuator is solved as a one-dimensional root-finding problem on
its own transmission path — direct prismatic (A) or revolute (B) drives,
four-bar inputs (C), and nested local loops (D) — and the solves compose
sequentially, one actuator at a time, in ascending ID order.  A final
look-at pass re-aims the cylinder bodies along their strut axes.

Solvers probe candidate parameters away from the current state; probes that
cannot close their loops are treated as invalid points rather than errors,
so brackets may safely extend past the assembly range.
"""

import logging
import math
from dataclasses import dataclass

from . import topology
from .errors import (
    ActuatorBoundsError,
    CompletenessError,
    LoopkinError,
    NoRootError,
    SingularConfigurationError,
)
from .geometry import (
    Transform,
    _rotation_about,
    mat_mul,
    mat_vec,
    rodrigues,
    transpose,
    vec_add,
    vec_cross,
    vec_dot,
    vec_norm,
    vec_scale,
    vec_sub,
)

log = logging.getLogger(__name__)

ACTIVE_TOL = 1e-9        # |target - current| below this skips the solve
LENGTH_TOL = 1e-9        # scalar root tolerance on actuator lengths
CLOSURE_TOL = 1e-12      # four-bar closure translation residual
INNER_TOL = 1e-12        # nested loops solve their inner root tighter than
                         # the outer one so the outer residual stays smooth
STRUT_AXIS = (1.0, 0.0, 0.0)   # default direction a cylinder body points


def _motion(kind, axis, value):
    if kind == "revolute":
        return Transform(rodrigues(axis, value), (0.0, 0.0, 0.0))
    return Transform.from_translation(vec_scale(axis, value))


def _advance(pre, joint, value):
    """pre composed with the joint's motion and tail, as one fused step.

    This sits inside every solver residual and every propagation pass, so
    the intermediate motion transform is never materialized.
    """
    pr = pre.rotation
    if joint.kind == "revolute":
        r1 = mat_mul(pr, _rotation_about(joint.axis, value))
        t1 = pre.translation
    else:
        r1 = pr
        t1 = vec_add(mat_vec(pr, vec_scale(joint.axis, value)),
                     pre.translation)
    tail = joint.tail
    return Transform._of(mat_mul(r1, tail.rotation),
                         vec_add(mat_vec(r1, tail.translation), t1))


def _spanning(robot):
    """Per-link inbound spanning joint (tree or mount role); base has none."""
    cached = getattr(robot, "_fk_spanning", None)
    if cached is not None:
        return cached
    spanning = [None] * len(robot.links)
    for j in robot.joints:
        if j.role in ("tree", "mount"):
            spanning[j.child] = j
    robot._fk_spanning = spanning
    return spanning


def _tail_inverse(robot, joint):
    """Cached inverse of a joint's tail transform (static per robot)."""
    cached = getattr(robot, "_fk_tail_inv", None)
    if cached is None:
        cached = [j.tail.inverse() for j in robot.joints]
        robot._fk_tail_inv = cached
    return cached[joint.id]


def model_for(robot):
    """Cached (contracted graph, transmission paths) pair for a robot.

    Contraction and extraction are deterministic, so the first result is
    reused for the robot's lifetime.
    """
    cached = getattr(robot, "_fk_model", None)
    if cached is None:
        graph = topology.contract_four_bars(robot)
        cached = (graph, topology.extract_iteps(robot, graph))
        robot._fk_model = cached
    return cached


class Configuration:
    """Mutable per-joint parameters with cached world transforms.

    Propagation runs in ascending link ID order, which is a topological
    order of the spanning structure by construction.  Closure and reverse
    entry joints do not drive any pose; their parameters are back-filled
    from the relative pose they end up spanning.
    """

    __slots__ = ("robot", "params", "lengths", "link_pose", "joint_pose")

    def __init__(self, robot):
        self.robot = robot
        self.params = [0.0] * len(robot.joints)
        self.lengths = [0.0] * len(robot.actuators)
        self.link_pose = [None] * len(robot.links)
        self.joint_pose = [None] * len(robot.joints)
        self.recompute()

    def copy(self):
        clone = object.__new__(Configuration)
        clone.robot = self.robot
        clone.params = list(self.params)
        clone.lengths = list(self.lengths)
        clone.link_pose = list(self.link_pose)
        clone.joint_pose = list(self.joint_pose)
        return clone

    def _restore(self, snapshot):
        self.params[:] = snapshot.params
        self.lengths[:] = snapshot.lengths
        self.link_pose[:] = snapshot.link_pose
        self.joint_pose[:] = snapshot.joint_pose

    def set_params(self, mapping):
        for joint_id, value in mapping.items():
            self.params[joint_id] = float(value)
        self.recompute()
        return self

    def recompute(self, struts=True):
        """Propagate world poses from the current parameters.

        struts=False refreshes structural link poses, mount frames, and
        actuator lengths only, leaving the cylinder body poses stale; the
        internal probing paths use it and restore full consistency before
        a configuration escapes to callers.
        """
        robot = self.robot
        spanning = _spanning(robot)
        params = self.params
        link_pose = self.link_pose
        joint_pose = self.joint_pose
        link_pose[robot.base] = robot.base_pose
        for link in robot.links:
            j = spanning[link.id]
            if j is None:
                continue
            pre = link_pose[j.parent].compose(j.origin)
            joint_pose[j.id] = pre
            if struts or not link.is_strut:
                link_pose[link.id] = _advance(pre, j, params[j.id])
        for j in robot.joints:
            if j.role in ("tree", "mount"):
                continue
            if not struts and robot.links[j.child].is_strut:
                continue
            pre = link_pose[j.parent].compose(j.origin)
            joint_pose[j.id] = pre
            params[j.id] = self._implied(j, pre)
        lengths = self.lengths
        for act in robot.actuators:
            lengths[act.id] = vec_norm(vec_sub(
                joint_pose[act.tube_mount].translation,
                joint_pose[act.rod_mount].translation))
        return self

    def _implied(self, joint, pre):
        """Parameter a closure/reverse joint would need to span its gap."""
        rel = pre.inverse().compose(self.link_pose[joint.child]) \
            .compose(_tail_inverse(self.robot, joint))
        if joint.kind == "prismatic":
            return vec_dot(joint.axis, rel.translation)
        r = rel.rotation
        skew = (0.5 * (r[2][1] - r[1][2]),
                0.5 * (r[0][2] - r[2][0]),
                0.5 * (r[1][0] - r[0][1]))
        sin_t = vec_dot(joint.axis, skew)
        cos_t = 0.5 * (r[0][0] + r[1][1] + r[2][2] - 1.0)
        return math.atan2(sin_t, cos_t)

    def check_consistency(self):
        """Largest cache deviation against a from-scratch recomputation."""
        fresh = self.copy()
        fresh.recompute()
        worst = 0.0
        for mine, theirs in ((self.link_pose, fresh.link_pose),
                             (self.joint_pose, fresh.joint_pose)):
            for a, b in zip(mine, theirs):
                worst = max(worst, vec_norm(vec_sub(a.translation, b.translation)))
                worst = max(worst, max(abs(a.rotation[i][j] - b.rotation[i][j])
                                       for i in range(3) for j in range(3)))
        for a, b in zip(self.lengths, fresh.lengths):
            worst = max(worst, abs(a - b))
        return worst


def actuator_length(robot, config, actuator):
    """Distance between the two mount-joint origins in the world frame."""
    return vec_norm(vec_sub(config.joint_pose[actuator.tube_mount].translation,
                            config.joint_pose[actuator.rod_mount].translation))


# ---------------------------------------------------------------------------
# scalar root finding


@dataclass
class RootProblem:
    residual: object         # theta -> f(theta) - target
    warm_start: float
    bracket: tuple
    tolerance: float = 1e-6


def _bisect(attempt, a, fa, b, tol):
    """Shrink a sign-change interval; invalid midpoints get nudged aside."""
    for _ in range(200):
        mid = 0.5 * (a + b)
        fm = attempt(mid)
        nudges = 0
        while fm is None and nudges < 8:
            mid = 0.5 * (mid + (a if nudges % 2 == 0 else b))
            fm = attempt(mid)
            nudges += 1
        if fm is None:
            raise SingularConfigurationError(
                "interval [%g, %g] became unevaluable" % (a, b))
        if abs(fm) <= tol:
            return mid
        if fa * fm < 0.0:
            b = mid
        else:
            a, fa = mid, fm
        if abs(b - a) < 1e-15:
            break
    raise NoRootError("bisection stalled near %g with residual %g" % (a, fa),
                      best_theta=a, best_residual=fa)


def solve_scalar_root(problem):
    """Damped Newton from the warm start, nearest-sign-change fallback.

    Newton uses forward finite differences (the residual at the current
    iterate is already in hand) and only accepts steps that shrink the
    residual, so it converges to the root in the warm start's own basin
    instead of hopping to a mirror branch.  When it stalls, the bracket is
    scanned outward from the stall point and the closest sign change is
    bisected.

    The residual may raise SingularConfigurationError or NoRootError for
    parameters where an inner loop cannot close; such points are treated
    as unevaluable and stepped around.
    """
    f = problem.residual
    tol = problem.tolerance
    lo, hi = problem.bracket

    def attempt(t):
        try:
            return f(t)
        except (SingularConfigurationError, NoRootError):
            return None

    theta = min(max(problem.warm_start, lo), hi)
    value = attempt(theta)
    if value is None:
        raise SingularConfigurationError(
            "residual is not evaluable at the warm start %g" % theta)
    best_t, best_v = theta, value
    if abs(value) <= tol:
        return theta

    trust = 0.25 * (hi - lo)
    for _ in range(50):
        h = 1e-7 * max(1.0, abs(theta))
        f_plus = attempt(theta + h)
        if f_plus is None:
            break
        slope = (f_plus - value) / h
        if slope == 0.0 or not math.isfinite(slope):
            break
        step = -value / slope
        if abs(step) > trust:
            step = math.copysign(trust, step)
        accepted = False
        for _ in range(8):
            candidate = theta + step
            if candidate < lo or candidate > hi:
                step *= 0.5
                continue
            f_cand = attempt(candidate)
            if f_cand is None or abs(f_cand) >= abs(value):
                step *= 0.5
                continue
            theta, value = candidate, f_cand
            accepted = True
            break
        if not accepted:
            break
        if abs(value) < abs(best_v):
            best_t, best_v = theta, value
        if abs(value) <= tol:
            return theta

    # scan outward from the stall point; the first sign change seen is the
    # nearest one, since both directions advance in lock step.  Ties between
    # the two sides go to the one facing the warm start — a stall exactly on
    # a symmetry point would otherwise pick the mirror branch.
    span = hi - lo
    step = span / 64.0
    sides = (1.0, -1.0) if problem.warm_start >= theta else (-1.0, 1.0)
    chains = {-1.0: (theta, value), 1.0: (theta, value)}
    for k in range(1, 65):
        for side in sides:
            t = theta + side * step * k
            if t < lo or t > hi:
                continue
            v = attempt(t)
            if v is None:
                continue
            if abs(v) <= tol:
                return t
            if abs(v) < abs(best_v):
                best_t, best_v = t, v
            prev_t, prev_v = chains[side]
            if prev_v * v < 0.0:
                a, fa, b = (prev_t, prev_v, t) if prev_t < t else (t, v, prev_t)
                return _bisect(attempt, a, fa, b, tol)
            chains[side] = (t, v)
    raise NoRootError(
        "no sign change on [%g, %g]; best residual %g at %g"
        % (lo, hi, best_v, best_t), best_theta=best_t, best_residual=best_v)


# ---------------------------------------------------------------------------
# four-bar closure


class _ClosurePlan:
    """Gauss-Newton over the two free angles of one four-bar, with the
    loop's ground pose frozen at the current configuration."""

    def __init__(self, robot, fourbar, config):
        self.joints = [robot.joints[i] for i in fourbar.joints]
        self.w_ground = config.link_pose[fourbar.links[0]]
        self.pre_ab = self.w_ground.compose(self.joints[0].origin)
        closing = self.joints[3]
        self.pin = self.w_ground.apply(
            _tail_inverse(robot, closing).translation)

    def solve(self, theta, warm):
        j_ab, j_bc, j_cd, j_da = self.joints
        w_b = _advance(self.pre_ab, j_ab, theta)
        frame_bc = w_b.compose(j_bc.origin)
        pivot_bc = frame_bc.translation
        axis_bc = mat_vec(frame_bc.rotation, j_bc.axis)
        alpha, beta = warm
        for _ in range(50):
            w_c = _advance(frame_bc, j_bc, alpha)
            frame_cd = w_c.compose(j_cd.origin)
            w_d = _advance(frame_cd, j_cd, beta)
            reached = w_d.apply(j_da.origin.translation)
            residual = vec_sub(reached, self.pin)
            if vec_norm(residual) <= CLOSURE_TOL:
                return alpha, beta, (w_b, w_c, w_d)
            axis_cd = mat_vec(frame_cd.rotation, j_cd.axis)
            col_a = vec_cross(axis_bc, vec_sub(reached, pivot_bc))
            col_b = vec_cross(axis_cd, vec_sub(reached, frame_cd.translation))
            a00 = vec_dot(col_a, col_a)
            a01 = vec_dot(col_a, col_b)
            a11 = vec_dot(col_b, col_b)
            r0 = -vec_dot(col_a, residual)
            r1 = -vec_dot(col_b, residual)
            det = a00 * a11 - a01 * a01
            if abs(det) < 1e-18:
                raise SingularConfigurationError(
                    "four-bar closure is singular at input angle %g" % theta)
            d_alpha = (r0 * a11 - r1 * a01) / det
            d_beta = (a00 * r1 - a01 * r0) / det
            d_alpha = min(max(d_alpha, -0.5), 0.5)
            d_beta = min(max(d_beta, -0.5), 0.5)
            alpha += d_alpha
            beta += d_beta
        raise SingularConfigurationError(
            "four-bar closure did not converge at input angle %g" % theta)


def solve_four_bar_closure(fourbar, theta, config):
    """Free angles (alpha, beta) closing the loop at the given input angle,
    warm-started from (and nearest to) the current configuration."""
    robot = config.robot
    plan = _ClosurePlan(robot, fourbar, config)
    warm = (config.params[fourbar.joints[1]], config.params[fourbar.joints[2]])
    alpha, beta, _poses = plan.solve(theta, warm)
    return alpha, beta


def closure_residual(config, fourbar):
    """Translation gap of a four-bar's closing joint at the cached poses."""
    robot = config.robot
    closing = robot.joints[fourbar.joints[3]]
    reached = config.link_pose[closing.parent].apply(closing.origin.translation)
    pinned = config.link_pose[closing.child].apply(
        closing.tail.inverse().translation)
    return vec_norm(vec_sub(reached, pinned))


# ---------------------------------------------------------------------------
# per-type solves


def _depends(robot, link, joint):
    """True when the link hangs below the joint in the spanning structure."""
    spanning = _spanning(robot)
    cursor = link
    while True:
        inbound = spanning[cursor]
        if inbound is None:
            return False
        if inbound.id == joint.id:
            return True
        cursor = inbound.parent


def _side_plan(config, mount, movers):
    """How a mount anchor moves: (key, suffix) when its parent hangs below
    one of the `movers` links, else (None, constant world point)."""
    robot = config.robot
    spanning = _spanning(robot)
    chain = []
    cursor = mount.parent
    while cursor not in movers:
        inbound = spanning[cursor]
        if inbound is None:
            return None, config.joint_pose[mount.id].translation
        chain.append(inbound)
        cursor = inbound.parent
    suffix = Transform.identity()
    for j in reversed(chain):
        suffix = suffix.compose(j.origin) \
            .compose(_motion(j.kind, j.axis, config.params[j.id])).compose(j.tail)
    suffix = suffix.compose(mount.origin)
    return movers[cursor], suffix


def _solve_direct(robot, itep, act, target, config, struts):
    joint = robot.joints[itep.driven_joint]
    moving_tube = _depends(robot, act.tube_parent, joint)
    moving_rod = _depends(robot, act.rod_parent, joint)
    if moving_tube == moving_rod:
        raise CompletenessError(
            "length of %r does not respond to joint %r" % (act.name, joint.name))
    moving_mount = robot.joints[act.tube_mount if moving_tube else act.rod_mount]
    fixed_mount = act.rod_mount if moving_tube else act.tube_mount
    fixed_anchor = config.joint_pose[fixed_mount].translation

    pre = config.link_pose[joint.parent].compose(joint.origin)
    key, suffix = _side_plan(config, moving_mount, {joint.child: True})
    if key is None:
        raise CompletenessError(
            "mount %r is not carried by joint %r" % (moving_mount.name, joint.name))
    local = joint.tail.compose(suffix).translation

    if joint.kind == "prismatic":
        def residual(value):
            point = pre.apply(vec_add(local, vec_scale(joint.axis, value)))
            return vec_norm(vec_sub(point, fixed_anchor)) - target
        stroke = act.bounds[1] - act.bounds[0]
        bracket = (config.params[joint.id] - stroke, config.params[joint.id] + stroke)
    else:
        def residual(value):
            point = pre.apply(mat_vec(_rotation_about(joint.axis, value), local))
            return vec_norm(vec_sub(point, fixed_anchor)) - target
        bracket = (config.params[joint.id] - math.pi, config.params[joint.id] + math.pi)

    root = solve_scalar_root(RootProblem(
        residual, warm_start=config.params[joint.id], bracket=bracket,
        tolerance=LENGTH_TOL))
    config.params[joint.id] = root
    config.recompute(struts=struts)


def _member_movers(fourbar):
    return {fourbar.links[1]: 1, fourbar.links[2]: 2, fourbar.links[3]: 3}


def _anchor_from(poses, key, suffix):
    if key is None:
        return suffix  # already a world point
    return poses[key - 1].apply(suffix.translation)


def _solve_four_bar_drive(robot, itep, act, target, config, graph, struts):
    fourbar = graph.four_bars[itep.four_bar]
    plan = _ClosurePlan(robot, fourbar, config)
    input_id = fourbar.joints[0]
    movers = _member_movers(fourbar)
    side_t = _side_plan(config, robot.joints[act.tube_mount], movers)
    side_r = _side_plan(config, robot.joints[act.rod_mount], movers)
    if side_t[0] is None and side_r[0] is None:
        raise CompletenessError(
            "length of %r does not respond to four-bar input %r"
            % (act.name, robot.joints[input_id].name))
    warm = [config.params[fourbar.joints[1]], config.params[fourbar.joints[2]]]

    def residual(theta):
        alpha, beta, poses = plan.solve(theta, tuple(warm))
        warm[0], warm[1] = alpha, beta
        t_anchor = _anchor_from(poses, *side_t)
        r_anchor = _anchor_from(poses, *side_r)
        return vec_norm(vec_sub(t_anchor, r_anchor)) - target

    warm_theta = config.params[input_id]
    root = solve_scalar_root(RootProblem(
        residual, warm_start=warm_theta,
        bracket=(warm_theta - math.pi, warm_theta + math.pi),
        tolerance=LENGTH_TOL))
    alpha, beta, _poses = plan.solve(root, tuple(warm))
    config.params[input_id] = root
    config.params[fourbar.joints[1]] = alpha
    config.params[fourbar.joints[2]] = beta
    config.recompute(struts=struts)


def _solve_nested(robot, itep, act, target, config, graph, struts):
    fourbar = graph.four_bars[itep.four_bar]
    loop = itep.loop
    plan = _ClosurePlan(robot, fourbar, config)
    input_id = fourbar.joints[0]
    far_joint = robot.joints[loop.far_joint]
    via_key = fourbar.links.index(loop.via)

    partner = robot.actuators[loop.strut_actuator]
    frozen_length = config.lengths[partner.id]
    partner_anchor = config.joint_pose[loop.anchor_mount].translation
    partner_local = far_joint.tail.apply(
        robot.joints[loop.moving_mount].origin.translation)

    movers = {loop.far: True}
    side_t = _side_plan(config, robot.joints[act.tube_mount], movers)
    side_r = _side_plan(config, robot.joints[act.rod_mount], movers)
    if (side_t[0] is None) == (side_r[0] is None):
        raise CompletenessError(
            "mounts of %r do not straddle link %r"
            % (act.name, robot.links[loop.far].name))
    far_side, fixed_side = (side_t, side_r) if side_t[0] is not None else (side_r, side_t)
    own_local = far_joint.tail.compose(far_side[1]).translation
    own_anchor = fixed_side[1]

    inner_warm = [config.params[fourbar.joints[1]], config.params[fourbar.joints[2]]]
    swing_warm = [config.params[far_joint.id]]

    def residual(theta):
        alpha, beta, poses = plan.solve(theta, tuple(inner_warm))
        inner_warm[0], inner_warm[1] = alpha, beta
        base = poses[via_key - 1] if via_key else plan.w_ground
        pre_far = base.compose(far_joint.origin)

        def swing_residual(swing):
            point = pre_far.apply(mat_vec(_rotation_about(far_joint.axis, swing),
                                          partner_local))
            return vec_norm(vec_sub(point, partner_anchor)) - frozen_length

        swing = solve_scalar_root(RootProblem(
            swing_residual, warm_start=swing_warm[0],
            bracket=(swing_warm[0] - math.pi, swing_warm[0] + math.pi),
            tolerance=INNER_TOL))
        swing_warm[0] = swing
        own = pre_far.apply(mat_vec(_rotation_about(far_joint.axis, swing),
                                    own_local))
        return vec_norm(vec_sub(own, own_anchor)) - target

    warm_theta = config.params[input_id]
    root = solve_scalar_root(RootProblem(
        residual, warm_start=warm_theta,
        bracket=(warm_theta - math.pi, warm_theta + math.pi),
        tolerance=LENGTH_TOL))
    residual(root)  # refresh inner_warm / swing_warm at the root
    config.params[input_id] = root
    config.params[fourbar.joints[1]] = inner_warm[0]
    config.params[fourbar.joints[2]] = inner_warm[1]
    config.params[far_joint.id] = swing_warm[0]
    config.recompute(struts=struts)


def _solve_active(robot, itep, target_length, config, act, graph, struts):
    try:
        if itep.kind in ("A", "B"):
            _solve_direct(robot, itep, act, target_length, config, struts)
        else:
            if graph is None:
                graph = model_for(robot)[0]
            if itep.kind == "C":
                _solve_four_bar_drive(robot, itep, act, target_length, config,
                                      graph, struts)
            else:
                _solve_nested(robot, itep, act, target_length, config, graph,
                              struts)
    except NoRootError as err:
        raise NoRootError("actuator %r: %s" % (act.name, err),
                          best_theta=err.best_theta,
                          best_residual=err.best_residual) from None
    except SingularConfigurationError as err:
        raise SingularConfigurationError(
            "actuator %r: %s" % (act.name, err)) from None


def solve_itep(robot, itep, target_length, config, actuator=None, graph=None):
    """Drive one actuator of the given transmission path to a target length."""
    act = actuator if actuator is not None else robot.actuators[itep.actuators[0]]
    lo, hi = act.bounds
    if not lo - 1e-9 <= target_length <= hi + 1e-9:
        raise ActuatorBoundsError(
            "actuator %r target %g outside bounds [%g, %g]"
            % (act.name, target_length, lo, hi))
    if abs(target_length - config.lengths[act.id]) <= ACTIVE_TOL:
        return config
    _solve_active(robot, itep, target_length, config, act, graph, True)
    return config


# ---------------------------------------------------------------------------
# pipeline


def look_at_refine(robot, config):
    """Re-aim every cylinder body so its default axis points at the other
    mount.  Anchor points ignore mount rotations, so lengths are unchanged."""
    for act in robot.actuators:
        t_anchor = config.joint_pose[act.tube_mount].translation
        r_anchor = config.joint_pose[act.rod_mount].translation
        direction = vec_sub(r_anchor, t_anchor)
        span = vec_norm(direction)
        if span < 1e-12:
            log.warning("actuator %r mounts are coincident; skipping look-at", act.name)
            continue
        direction = vec_scale(direction, 1.0 / span)
        for mount_id, sign in ((act.tube_mount, 1.0), (act.rod_mount, -1.0)):
            mount = robot.joints[mount_id]
            frame = config.joint_pose[mount_id]
            d_local = mat_vec(transpose(frame.rotation), vec_scale(direction, sign))
            axis = mount.axis
            u = vec_sub(STRUT_AXIS, vec_scale(axis, vec_dot(STRUT_AXIS, axis)))
            v = vec_sub(d_local, vec_scale(axis, vec_dot(d_local, axis)))
            if vec_norm(u) < 1e-12 or vec_norm(v) < 1e-12:
                log.warning("mount %r is aligned with its own axis; skipping", mount.name)
                continue
            config.params[mount_id] = math.atan2(
                vec_dot(axis, vec_cross(u, v)), vec_dot(u, v))
    config.recompute()
    return config


def forward_kinematics(robot, targets, config, graph=None, iteps=None,
                       refine=True):
    """Algorithmic core: bounds-check, solve active actuators in ascending
    ID order, then look-at refine.  Any failure rolls the configuration
    back to its input state.

    refine=False skips the final look-at pass; mount spins never move a
    structural link or change a length, so callers that only read those may
    defer the pass.
    """
    if len(targets) != len(robot.actuators):
        raise ValueError("expected %d targets, got %d"
                         % (len(robot.actuators), len(targets)))
    for act in robot.actuators:
        lo, hi = act.bounds
        if not lo - 1e-9 <= targets[act.id] <= hi + 1e-9:
            raise ActuatorBoundsError(
                "actuator %r target %g outside bounds [%g, %g]"
                % (act.name, targets[act.id], lo, hi))
    if graph is None or iteps is None:
        graph, iteps = model_for(robot)
    snapshot = config.copy()
    try:
        for act in robot.actuators:
            if abs(targets[act.id] - config.lengths[act.id]) <= ACTIVE_TOL:
                continue
            solve_itep(robot, iteps[act.id], targets[act.id], config,
                       actuator=act, graph=graph)
        if refine:
            look_at_refine(robot, config)
    except LoopkinError:
        config._restore(snapshot)
        raise
    return config


def _forward_probe(robot, targets, config, graph, iteps, refine):
    """forward_kinematics for throwaway probe configurations.

    Leaves the cylinder body poses stale (structural link poses, mount
    frames, and lengths stay exact), unless refine forces the look-at
    pass, whose trailing recompute restores them.  Callers must not let
    a probed configuration escape without a full recompute.
    """
    for act in robot.actuators:
        lo, hi = act.bounds
        if not lo - 1e-9 <= targets[act.id] <= hi + 1e-9:
            raise ActuatorBoundsError(
                "actuator %r target %g outside bounds [%g, %g]"
                % (act.name, targets[act.id], lo, hi))
    snapshot = config.copy()
    try:
        for act in robot.actuators:
            if abs(targets[act.id] - config.lengths[act.id]) <= ACTIVE_TOL:
                continue
            _solve_active(robot, iteps[act.id], targets[act.id], config, act,
                          graph, False)
        if refine:
            look_at_refine(robot, config)
    except LoopkinError:
        config._restore(snapshot)
        raise
    return config
