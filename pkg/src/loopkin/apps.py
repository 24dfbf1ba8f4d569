"""Grid sampling of reachable poses and via-point trajectory tracking.

Both entry points leave the caller's configuration untouched: workspace
sampling runs every grid point on a scratch copy, trajectory generation
advances its own working copy so each solve warm-starts from the previous
sample's solution.
"""

import csv
import itertools
import json
import math
from dataclasses import dataclass

from . import fk, ik
from .errors import GridCapError, LoopkinError
from .geometry import (Transform, quaternion_to_rotation,
                       rotation_to_quaternion, vec_add, vec_scale, vec_sub)

DEFAULT_GRID_CAP = 10 ** 6

INTERPOLATIONS = ("linear", "catmull-rom")


def _positive_count(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError("%s must be an integer, got %r" % (where, value))
    if value < 2:
        raise ValueError("%s must be at least 2, got %d" % (where, value))
    return value


@dataclass(frozen=True)
class WorkspaceSpec:
    """Sampling request: per-group counts as one integer for every relevant
    group or a mapping keyed by representative actuator name."""

    end_effector: int
    counts: object
    cap: int = DEFAULT_GRID_CAP

    def __post_init__(self):
        if isinstance(self.counts, dict):
            for name, n in self.counts.items():
                _positive_count(n, "sample count for %r" % (name,))
        else:
            _positive_count(self.counts, "sample count")
        if not isinstance(self.cap, int) or self.cap < 1:
            raise ValueError("grid cap must be a positive integer")


class WorkspacePoint(tuple):
    """(lengths, pose) pair; lengths indexed by actuator ID."""

    __slots__ = ()

    def __new__(cls, lengths, pose):
        return tuple.__new__(cls, (tuple(lengths), pose))

    @property
    def lengths(self):
        return self[0]

    @property
    def pose(self):
        return self[1]


def _grid_axes(robot, spec, groups):
    """Resolve per-group sample counts into length axes, strictly."""
    if isinstance(spec.counts, dict):
        unclaimed = set(spec.counts)
        counts = []
        for group in groups:
            name = robot.actuators[group[0]].name
            if name not in spec.counts:
                raise ValueError("no sample count for group %r" % (name,))
            unclaimed.discard(name)
            counts.append(spec.counts[name])
        if unclaimed:
            raise ValueError(
                "sample counts name no movable representative: %s"
                % ", ".join(sorted(unclaimed)))
    else:
        counts = [spec.counts] * len(groups)
    axes = []
    for group, n in zip(groups, counts):
        lo, hi = robot.actuators[group[0]].bounds
        axes.append([lo + k * (hi - lo) / (n - 1) for k in range(n)])
    return axes


def sample_workspace(robot, spec, config=None):
    """Every combination of evenly spaced lengths for the actuator groups
    that can move the end effector, in row-major order by ascending
    representative ID; all other actuators hold their current lengths."""
    graph, iteps = fk.model_for(robot)
    mask = ik.relevant_actuators(robot, iteps, spec.end_effector)
    groups = sorted((g for g in robot.redundancy_classes() if mask[g[0]]),
                    key=lambda g: g[0])
    axes = _grid_axes(robot, spec, groups)
    size = math.prod(len(axis) for axis in axes)
    if size > spec.cap:
        raise GridCapError("workspace grid has %d points (cap %d)"
                           % (size, spec.cap))
    base = config if config is not None else fk.Configuration(robot)
    points = []
    for combo in itertools.product(*axes):
        targets = list(base.lengths)
        for group, value in zip(groups, combo):
            for member in group:
                targets[member] = value
        scratch = base.copy()
        fk.forward_kinematics(robot, targets, scratch, graph=graph,
                              iteps=iteps)
        points.append(WorkspacePoint(scratch.lengths,
                                     scratch.link_pose[spec.end_effector]))
    return points


# ---------------------------------------------------------------------------
# trajectories


@dataclass(frozen=True)
class TrajectorySpec:
    """A path through via poses, resampled at ``samples`` uniform stations."""

    end_effector: int
    via_points: tuple
    samples: int
    interpolation: str = "linear"

    def __post_init__(self):
        object.__setattr__(self, "via_points", tuple(self.via_points))
        if len(self.via_points) < 2:
            raise ValueError("need at least two via points")
        if not isinstance(self.samples, int) or self.samples < 2:
            raise ValueError("sample count must be an integer >= 2")
        if self.samples < len(self.via_points):
            raise ValueError("%d samples cannot cover %d via points"
                             % (self.samples, len(self.via_points)))
        if self.interpolation not in INTERPOLATIONS:
            raise ValueError("unknown interpolation %r (expected %s)"
                             % (self.interpolation,
                                " or ".join(INTERPOLATIONS)))


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    target: Transform
    lengths: tuple
    pose: Transform
    objective: float
    converged: bool


def _slerp(qa, qb, s):
    dot = sum(a * b for a, b in zip(qa, qb))
    if dot < 0.0:
        qb = tuple(-c for c in qb)
        dot = -dot
    if dot > 1.0 - 1e-12:
        blend = tuple(a + s * (b - a) for a, b in zip(qa, qb))
        norm = math.sqrt(sum(c * c for c in blend))
        return tuple(c / norm for c in blend)
    theta = math.acos(dot)
    wa = math.sin((1.0 - s) * theta) / math.sin(theta)
    wb = math.sin(s * theta) / math.sin(theta)
    return tuple(wa * a + wb * b for a, b in zip(qa, qb))


def _catmull_rom(p0, p1, p2, p3, s):
    out = []
    for a, b, c, d in zip(p0, p1, p2, p3):
        out.append(0.5 * ((2.0 * b) + (c - a) * s
                          + (2.0 * a - 5.0 * b + 4.0 * c - d) * s * s
                          + (3.0 * b - a - 3.0 * c + d) * s * s * s))
    return tuple(out)


def _mirror(anchor, neighbour):
    """Phantom control point reflecting the neighbour through the anchor,
    so an equally spaced straight run of vias stays exactly straight."""
    return vec_sub(vec_scale(anchor, 2.0), neighbour)


def curve_point(spec, t):
    """Target pose at fraction ``t`` of the via path: piecewise translation
    blending with spherical rotation blending on each segment."""
    via = spec.via_points
    last = len(via) - 1
    x = t * last
    j = min(int(x), last - 1)
    s = x - j
    pa, pb = via[j].translation, via[j + 1].translation
    if spec.interpolation == "catmull-rom":
        before = via[j - 1].translation if j > 0 else _mirror(pa, pb)
        after = via[j + 2].translation if j + 2 <= last else _mirror(pb, pa)
        translation = _catmull_rom(before, pa, pb, after, s)
    else:
        translation = vec_add(vec_scale(pa, 1.0 - s), vec_scale(pb, s))
    rotation = quaternion_to_rotation(
        _slerp(rotation_to_quaternion(via[j].rotation),
               rotation_to_quaternion(via[j + 1].rotation), s))
    return Transform(rotation, translation)


def generate_trajectory(robot, spec, config=None, kind="GSS",
                        tolerance=1e-6, max_outer=200):
    """Solve the via path sample by sample, each solve warm-started from
    the previous sample's lengths; a sample whose solve fails to settle is
    flagged and the march continues from the best lengths found."""
    work = config.copy() if config is not None else fk.Configuration(robot)
    count = spec.samples
    points = []
    for k in range(count):
        t = k / (count - 1)
        target = curve_point(spec, t)
        problem = ik.IKProblem(spec.end_effector, target, work,
                               tolerance=tolerance, max_outer=max_outer,
                               kind=kind)
        result = ik.solve_ik(robot, problem)
        settled = result.converged
        try:
            fk.forward_kinematics(robot, result.lengths, work)
        except LoopkinError:
            settled = False
        points.append(TrajectoryPoint(
            t=t, target=target, lengths=tuple(result.lengths),
            pose=work.link_pose[spec.end_effector],
            objective=result.objective, converged=settled))
    return points


# ---------------------------------------------------------------------------
# record output


def _pose_fields(pose):
    return {"translation": list(pose.translation),
            "quaternion": list(rotation_to_quaternion(pose.rotation))}


def _length_fields(robot, lengths):
    return {act.name: lengths[act.id] for act in robot.actuators}


def workspace_records(robot, points):
    for point in points:
        record = {"lengths": _length_fields(robot, point.lengths)}
        record.update(_pose_fields(point.pose))
        yield record


def trajectory_records(robot, points):
    for point in points:
        record = {"t": point.t,
                  "lengths": _length_fields(robot, point.lengths)}
        record.update(_pose_fields(point.pose))
        record["objective"] = point.objective
        record["converged"] = bool(point.converged)
        yield record


def write_jsonl(records, stream):
    for record in records:
        stream.write(json.dumps(record) + "\n")


def _flatten(record):
    flat = {}
    for key, value in record.items():
        if isinstance(value, dict):
            for sub, item in value.items():
                flat["%s.%s" % (key, sub)] = item
        elif isinstance(value, (list, tuple)):
            for index, item in enumerate(value):
                flat["%s.%d" % (key, index)] = item
        else:
            flat[key] = value
    return flat


def write_csv(records, stream):
    rows = [_flatten(record) for record in records]
    if not rows:
        return
    writer = csv.DictWriter(stream, fieldnames=list(rows[0]),
                            lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
