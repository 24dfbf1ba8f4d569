"""Figure rendering for the command-line report paths.

Each helper draws one PNG into the report directory and returns its path.
The Agg canvas is used directly so no interactive backend is touched.
"""

from pathlib import Path

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure


def _save(figure, directory, name):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / name
    FigureCanvasAgg(figure).print_png(str(path))
    return path


def workspace_figure(points, directory):
    """Scatter of sampled end-effector positions in the x-z working plane,
    shaded by the out-of-plane coordinate."""
    xs = [p.pose.translation[0] for p in points]
    ys = [p.pose.translation[1] for p in points]
    zs = [p.pose.translation[2] for p in points]
    figure = Figure(figsize=(6, 5))
    axes = figure.add_subplot(111)
    spread = axes.scatter(xs, zs, c=ys, cmap="viridis", s=18)
    figure.colorbar(spread, ax=axes, label="y [m]")
    axes.set_xlabel("x [m]")
    axes.set_ylabel("z [m]")
    axes.set_title("end-effector workspace samples")
    axes.set_aspect("equal", adjustable="datalim")
    return _save(figure, directory, "workspace.png")


def trajectory_figure(robot, points, directory):
    """Actuator lengths and the pose objective along the sampled path."""
    ts = [p.t for p in points]
    figure = Figure(figsize=(7, 6))
    top = figure.add_subplot(211)
    for act in robot.actuators:
        top.plot(ts, [p.lengths[act.id] for p in points], label=act.name)
    top.set_ylabel("length [m]")
    top.legend(fontsize=7, ncol=2)
    top.set_title("trajectory tracking")
    bottom = figure.add_subplot(212, sharex=top)
    bottom.plot(ts, [p.objective for p in points], marker="o")
    bottom.set_yscale("symlog", linthresh=1e-9)
    bottom.set_xlabel("t")
    bottom.set_ylabel("pose objective")
    return _save(figure, directory, "trajectory.png")


def fk_timing_figure(measured_ms, fitted_ms, r_squared, directory):
    """Measured solve time against the per-type linear model."""
    figure = Figure(figsize=(6, 5))
    axes = figure.add_subplot(111)
    axes.scatter(fitted_ms, measured_ms, s=16)
    top = max(max(measured_ms), max(fitted_ms)) if measured_ms else 1.0
    axes.plot([0.0, top], [0.0, top], lw=1.0, color="gray")
    axes.set_xlabel("fitted [ms]")
    axes.set_ylabel("measured [ms]")
    axes.set_title("solve time vs per-type fit (R^2 = %.4f)" % r_squared)
    return _save(figure, directory, "fk_timing.png")


def ik_trials_figure(iterations, objectives, directory):
    """Outer-iteration and final-objective distributions over the trials."""
    figure = Figure(figsize=(7, 4))
    left = figure.add_subplot(121)
    left.hist(iterations, bins=range(1, max(iterations) + 2), align="left",
              rwidth=0.9)
    left.set_xlabel("outer iterations")
    left.set_ylabel("trials")
    right = figure.add_subplot(122)
    floor = 1e-12
    right.hist([max(value, floor) for value in objectives], bins=20)
    right.set_xscale("log")
    right.set_xlabel("final objective")
    figure.suptitle("solver trials")
    return _save(figure, directory, "ik_trials.png")
