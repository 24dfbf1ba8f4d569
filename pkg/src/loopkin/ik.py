"""Bound-constrained inverse kinematics over actuator lengths.

The pose error is scored by the norm of the relative twist between the
end-effector's pose and the target.  One scalar coordinate per redundancy
group is optimized; groups whose transmissions cannot move the
end-effector are pruned and their cylinders hold their current lengths.
The solver is a Gauss-Seidel sweep: each coordinate is minimized over its
full bound interval by a pluggable 1D minimizer while the others stay
put, and sweeps repeat until the score stops moving.
"""

import math
import random
from dataclasses import dataclass, field

from scipy.optimize import minimize_scalar

from . import fk
from .errors import LoopkinError
from .geometry import pose_distance

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
KINDS = ("GSS", "Brent", "Newton1D", "Secant")


# ---------------------------------------------------------------------------
# 1D minimizers


def golden_section_search(f, a, b, tol):
    """Shrink [a, b] by the golden ratio around the smaller probe; exact
    ties shrink to the inner interval, which keeps the midpoint centered."""
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(200):
        if b - a <= tol:
            break
        if f1 < f2:
            b = x2
            x2, f2 = x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = f(x1)
        elif f2 < f1:
            a = x1
            x1, f1 = x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = f(x2)
        else:
            a, b = x1, x2
            x1 = b - GOLDEN * (b - a)
            x2 = a + GOLDEN * (b - a)
            f1, f2 = f(x1), f(x2)
    return 0.5 * (a + b)


def _brent(f, a, b, tol):
    out = minimize_scalar(f, bounds=(a, b), method="bounded",
                          options={"xatol": tol, "maxiter": 500})
    return min(max(float(out.x), a), b)


def _newton(f, a, b, tol, x):
    h = max(1e-6 * (b - a), 1e-9)
    for _ in range(60):
        f0, f_plus, f_minus = f(x), f(x + h), f(x - h)
        if not (math.isfinite(f0) and math.isfinite(f_plus)
                and math.isfinite(f_minus)):
            return golden_section_search(f, a, b, tol)
        slope = (f_plus - f_minus) / (2.0 * h)
        curvature = (f_plus - 2.0 * f0 + f_minus) / (h * h)
        if curvature <= 0.0 or not math.isfinite(curvature):
            return golden_section_search(f, a, b, tol)
        nxt = min(max(x - slope / curvature, a), b)
        if abs(nxt - x) <= tol:
            return nxt
        x = nxt
    return x


def _secant(f, a, b, tol, x0):
    h = max(1e-6 * (b - a), 1e-9)

    def derivative(x):
        return (f(x + h) - f(x - h)) / (2.0 * h)

    shift = 0.1 * (b - a)
    x1 = x0 + shift if x0 + shift <= b else x0 - shift
    g0, g1 = derivative(x0), derivative(x1)
    for _ in range(60):
        if not (math.isfinite(g0) and math.isfinite(g1)) or g1 == g0:
            return golden_section_search(f, a, b, tol)
        nxt = min(max(x1 - g1 * (x1 - x0) / (g1 - g0), a), b)
        if abs(nxt - x1) <= tol:
            return nxt
        x0, g0 = x1, g1
        x1 = nxt
        g1 = derivative(x1)
    return x1


def minimize_1d(kind, f, a, b, tol, warm_start):
    """Run the chosen minimizer, then keep whichever of its answer and the
    warm start scores lower -- a sweep coordinate never gets worse."""
    warm = min(max(warm_start, a), b)
    f_warm = f(warm)
    if kind == "GSS":
        x = golden_section_search(f, a, b, tol)
    elif kind == "Brent":
        x = _brent(f, a, b, tol)
    elif kind == "Newton1D":
        x = _newton(f, a, b, tol, warm)
    elif kind == "Secant":
        x = _secant(f, a, b, tol, warm)
    else:
        raise ValueError("unknown 1D solver kind %r" % (kind,))
    if f(x) < f_warm:
        return x
    return warm


# ---------------------------------------------------------------------------
# objective and pruning


def objective(robot, lengths, target, end_effector, config):
    """Pose error of the end-effector after driving to the given lengths.

    Evaluated on a scratch copy; the caller's configuration is untouched.
    Kinematic failures propagate and should be treated as +inf by callers
    that minimize over this.
    """
    graph, iteps = fk.model_for(robot)
    scratch = config.copy()
    fk.forward_kinematics(robot, list(lengths), scratch, graph=graph,
                          iteps=iteps)
    return pose_distance(scratch.link_pose[end_effector], target)


def relevant_actuators(robot, iteps, end_effector):
    """Mask with one representative per redundancy group that can move the
    end-effector: a group is kept when the end-effector hangs below a joint
    the group's transmission path drives, so its pose actually changes as
    the group's length changes while every other group holds; members of a
    driven loop count because the whole member chain hangs below the loop
    input.  A group's own cylinder bodies count too (the look-at spin
    re-aims them at every length).  Redundant peers and unmoved groups
    stay False."""
    spanning = fk._spanning(robot)
    mask = [False] * len(robot.actuators)
    if end_effector == robot.base:
        return mask  # the base is pinned; no actuator can move it
    ancestry = set()
    walk = end_effector
    while walk != robot.base:
        joint = spanning[walk]
        ancestry.add(joint.id)
        walk = joint.parent
    for group in robot.redundancy_classes():
        rep = robot.actuators[group[0]]
        itep = iteps[rep.id]
        driven = {itep.driven_joint}
        if itep.loop is not None:
            driven.add(itep.loop.far_joint)
        bodies = set()
        for member in group:
            bodies.add(robot.actuators[member].tube_link)
            bodies.add(robot.actuators[member].rod_link)
        if end_effector in bodies or driven & ancestry:
            mask[rep.id] = True
    return mask


# ---------------------------------------------------------------------------
# the solver


@dataclass
class IKProblem:
    end_effector: int
    target: object
    config: object
    tolerance: float = 1e-6
    max_outer: int = 200
    kind: str = "GSS"
    restarts: int = 1
    seed: int = 0

    def __post_init__(self):
        robot = self.config.robot
        if not 0 <= self.end_effector < len(robot.links):
            raise ValueError("end effector %r is not a link ID"
                             % (self.end_effector,))
        if not self.tolerance > 0.0:
            raise ValueError("tolerance must be positive")
        if self.kind not in KINDS:
            raise ValueError("unknown 1D solver kind %r" % (self.kind,))


@dataclass
class IKResult:
    lengths: list
    objective: float
    trace: list = field(default_factory=list)
    converged: bool = False
    outer_iterations: int = 0
    evaluations: int = 0


def _broadcast(vector, groups):
    """Targets with every redundant peer following its representative."""
    out = list(vector)
    for group in groups:
        for member in group[1:]:
            out[member] = vector[group[0]]
    return out


def _run_sweeps(robot, problem, graph, iteps, reps, groups, scratch, vector,
                counter):
    refine = robot.links[problem.end_effector].is_strut
    group_of = {g[0]: g for g in groups}

    def evaluate(config, targets):
        counter[0] += 1
        try:
            fk._forward_probe(robot, targets, config, graph, iteps, refine)
        except LoopkinError:
            return math.inf
        return pose_distance(config.link_pose[problem.end_effector],
                             problem.target)

    trace = []
    previous = math.inf
    converged = False
    outer = 0
    for sweep in range(problem.max_outer + 1):
        for rep in reps:
            lo, hi = robot.actuators[rep].bounds
            members = group_of[rep]
            committed = _broadcast(vector, groups)
            # probes run on throwaway copies of the committed state so the
            # slice is a pure function of x; warm-start drift between probes
            # would otherwise let assembly branches leak across evaluations
            evaluate(scratch, committed)

            def coordinate(x, members=members, committed=committed):
                targets = list(committed)
                for member in members:
                    targets[member] = x
                return evaluate(scratch.copy(), targets)

            vector[rep] = minimize_1d(problem.kind, coordinate, lo, hi,
                                      1e-6 * (hi - lo),
                                      warm_start=vector[rep])
        psi = evaluate(scratch, _broadcast(vector, groups))
        trace.append(psi)
        outer = sweep
        if sweep >= 1 and abs(psi - previous) < problem.tolerance:
            converged = True
            break
        previous = psi
    return IKResult(lengths=_broadcast(vector, groups), objective=trace[-1],
                    trace=trace, converged=converged, outer_iterations=outer,
                    evaluations=counter[0])


def solve_ik(robot, problem):
    """Gauss-Seidel descent on the relevant coordinates, ascending ID order.

    Never raises on a hard target: exhaustion of the outer budget returns
    the best lengths found with the converged flag down.
    """
    graph, iteps = fk.model_for(robot)
    mask = relevant_actuators(robot, iteps, problem.end_effector)
    groups = robot.redundancy_classes()
    reps = [g[0] for g in groups if mask[g[0]]]

    rng = random.Random(problem.seed)
    best = None
    total = [0]
    for start in range(max(1, problem.restarts)):
        scratch = problem.config.copy()
        vector = list(scratch.lengths)
        if start > 0:
            for group in groups:
                act = robot.actuators[group[0]]
                vector[group[0]] = rng.uniform(*act.bounds)
        result = _run_sweeps(robot, problem, graph, iteps, reps, groups,
                             scratch, vector, total)
        if best is None or result.objective < best.objective:
            best = result
    best.evaluations = total[0]
    return best
