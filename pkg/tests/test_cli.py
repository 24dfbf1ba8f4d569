"""Command surface and the newline-delimited JSON service.

Everything runs in-process through cli.main / cli.handle_request; expected
poses and lengths come from driving the library directly, never from the
command under test.
"""

import io
import json
import math
import threading
import urllib.request

import pytest

from loopkin import cli, fk, geometry, models, mrdf

TCCHS_GOLDEN = str(models.golden_path("TCCHS"))


def run(capsys, *args):
    code = cli.main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def robot_for(name):
    if name in models.MACHINE_NAMES:
        return mrdf.compile_robot(models.builtin_robot(name))
    return mrdf.compile_robot(models.unit_fixture(name))


def arm_pose(length):
    robot = robot_for("B")
    config = fk.Configuration(robot)
    fk.forward_kinematics(robot, [length], config)
    arm = next(l.id for l in robot.links if l.name == "arm")
    return robot, config.link_pose[arm]


def wire_pose(pose):
    return {"translation": list(pose.translation),
            "quaternion": list(geometry.rotation_to_quaternion(pose.rotation))}


# ---------------------------------------------------------------------------
# validate


def test_validate_clean_file(capsys):
    code, out, err = run(capsys, "validate", TCCHS_GOLDEN)
    assert code == 0
    assert out.strip() == ""


def test_validate_inverted_bounds(capsys, tmp_path):
    doc = json.loads(mrdf.serialize_mrdf(models.unit_fixture("A")))
    doc["actuators"][0]["bounds"] = [3.0, 0.5]
    bad = tmp_path / "inverted.mrdf.json"
    bad.write_text(json.dumps(doc))
    code, out, err = run(capsys, "validate", str(bad))
    assert code == 1
    lines = out.strip().splitlines()
    assert len(lines) == 1
    severity, rest = lines[0].split(" ", 1)
    assert severity == "ERROR"
    assert "bounds" in rest


def test_validate_missing_file(capsys):
    code, out, err = run(capsys, "validate", "no-such-model.json")
    assert code == 2
    assert err.strip()


def test_validate_json_garbage(capsys, tmp_path):
    bad = tmp_path / "garbage.json"
    bad.write_text("{nope")
    code, out, err = run(capsys, "validate", str(bad))
    assert code == 2


# ---------------------------------------------------------------------------
# topo


def test_topo_json_flagship(capsys):
    code, out, err = run(capsys, "topo", "TCCHS")
    assert code == 0
    doc = json.loads(out)
    assert [bar["links"] for bar in doc["four_bars"]] == [[0, 1, 2, 3],
                                                          [7, 8, 9, 10]]
    assert len(doc["classes"]) == 6
    assert doc["histogram"] == {"A": 2, "B": 4, "C": 1, "D": 4}
    assert all("type" in entry for entry in doc["iteps"])


def test_topo_accepts_files_too(capsys):
    code, out, err = run(capsys, "topo", TCCHS_GOLDEN)
    assert code == 0
    assert json.loads(out)["histogram"]["D"] == 4


def test_topo_dot(capsys):
    code, out, err = run(capsys, "topo", "TCCHS", "--format", "dot")
    assert code == 0
    assert out.startswith("digraph")
    assert "ACT" in out


def test_topo_open_chain_has_no_four_bars(capsys):
    code, out, err = run(capsys, "topo", "unit_a")
    assert code == 0
    assert json.loads(out)["four_bars"] == []


# ---------------------------------------------------------------------------
# fk


def test_fk_identity_targets(capsys):
    robot = robot_for("B")
    rest = fk.Configuration(robot)
    code, out, err = run(capsys, "fk", "unit_b")
    assert code == 0
    doc = json.loads(out)
    assert doc["lengths"]["jack"] == pytest.approx(math.sqrt(2.0), abs=1e-9)
    arm = doc["links"]["arm"]
    want = rest.link_pose[next(l.id for l in robot.links
                               if l.name == "arm")]
    assert arm["translation"] == pytest.approx(want.translation, abs=1e-9)


def test_fk_inline_lengths(capsys):
    code, out, err = run(capsys, "fk", "unit_b", "--lengths",
                         '{"jack": 1.2}')
    assert code == 0
    doc = json.loads(out)
    assert doc["lengths"]["jack"] == pytest.approx(1.2, abs=1e-9)
    robot, want = arm_pose(1.2)
    assert doc["links"]["arm"]["translation"] == pytest.approx(
        want.translation, abs=1e-9)


def test_fk_lengths_from_file(capsys, tmp_path):
    targets = tmp_path / "targets.json"
    targets.write_text('{"jack": 1.2}')
    code, out, err = run(capsys, "fk", "unit_b", "--lengths",
                         "@" + str(targets))
    assert code == 0
    assert json.loads(out)["lengths"]["jack"] == pytest.approx(1.2, abs=1e-9)


def test_fk_group_broadcast(capsys):
    # naming one member of a synchronized pair drives the whole group
    code, out, err = run(capsys, "fk", "TCCHS", "--lengths",
                         '{"beam_jack_l": 0.95}')
    assert code == 0
    doc = json.loads(out)
    assert doc["lengths"]["beam_jack_r"] == pytest.approx(0.95, abs=1e-6)


def test_fk_unknown_actuator(capsys):
    code, out, err = run(capsys, "fk", "unit_b", "--lengths",
                         '{"bogus": 1.0}')
    assert code == 1
    assert "bogus" in err


def test_fk_out_of_bounds_names_the_actuator(capsys):
    code, out, err = run(capsys, "fk", "unit_b", "--lengths",
                         '{"jack": 99.0}')
    assert code == 1
    assert "jack" in err


def test_fk_trials_reports_fit(capsys):
    code, out, err = run(capsys, "fk", "TCCHS", "--trials", "40",
                         "--seed", "3")
    assert code == 0
    doc = json.loads(out)
    assert doc["trials"] == 40
    assert doc["mean_ms"] > 0.0
    assert set(doc["fit_ms"]) == {"A", "B", "C", "D"}
    assert 0.0 <= doc["r_squared"] <= 1.0 + 1e-9
    assert sum(doc["counts_total"].values()) > 0


def test_fk_trials_deterministic_given_seed(capsys):
    _, first, _ = run(capsys, "fk", "TCCHS", "--trials", "15", "--seed", "9")
    _, second, _ = run(capsys, "fk", "TCCHS", "--trials", "15", "--seed", "9")
    assert (json.loads(first)["counts_total"]
            == json.loads(second)["counts_total"])


# ---------------------------------------------------------------------------
# ik


def test_ik_current_pose_converges_immediately(capsys):
    robot, pose = arm_pose(math.sqrt(2.0))
    code, out, err = run(capsys, "ik", "unit_b", "--ee", "arm",
                         "--target", json.dumps(wire_pose(pose)))
    assert code == 0
    doc = json.loads(out)
    assert doc["converged"] is True
    assert doc["outer_iterations"] == 1
    assert doc["lengths"]["jack"] == pytest.approx(math.sqrt(2.0), abs=1e-6)
    assert isinstance(doc["trace"], list)


def test_ik_solver_flag(capsys):
    robot, pose = arm_pose(1.4)
    code, out, err = run(capsys, "ik", "unit_b", "--ee", "arm",
                         "--solver", "brent",
                         "--target", json.dumps(wire_pose(pose)))
    assert code == 0
    assert json.loads(out)["lengths"]["jack"] == pytest.approx(1.4, abs=1e-3)


def test_ik_unknown_solver_is_usage_error(capsys):
    code, out, err = run(capsys, "ik", "unit_b", "--ee", "arm",
                         "--solver", "nelder", "--target", "{}")
    assert code == 2


def test_ik_unknown_end_effector(capsys):
    code, out, err = run(capsys, "ik", "unit_b", "--ee", "nonsense",
                         "--target", '{"translation": [0, 0, 0]}')
    assert code == 1
    assert "nonsense" in err


def test_ik_trials_statistics(capsys):
    code, out, err = run(capsys, "ik", "unit_b", "--ee", "arm",
                         "--trials", "8", "--seed", "5")
    assert code == 0
    doc = json.loads(out)
    assert doc["trials"] == 8
    assert doc["success_rate"] == 1.0
    for key in ("median_outer_iterations", "median_ms", "mean_ms",
                "median_objective", "p95_objective"):
        assert key in doc
    _, again, _ = run(capsys, "ik", "unit_b", "--ee", "arm",
                      "--trials", "8", "--seed", "5")
    doc2 = json.loads(again)
    assert doc2["median_objective"] == doc["median_objective"]
    assert doc2["median_outer_iterations"] == doc["median_outer_iterations"]


# ---------------------------------------------------------------------------
# workspace / trajectory


def test_workspace_jsonl_stdout(capsys):
    code, out, err = run(capsys, "workspace", "unit_a", "--ee", "carriage",
                         "--counts", "3")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 3
    lengths = [json.loads(line)["lengths"]["ram"] for line in lines]
    assert lengths == pytest.approx([0.5, 1.75, 3.0], abs=1e-9)


def test_workspace_counts_mapping_flag(capsys):
    code, out, err = run(capsys, "workspace", "STHS", "--ee", "canopy",
                         "--counts",
                         '{"leg_jack_l": 2, "canopy_jack": 2}')
    assert code == 0
    assert len(out.strip().splitlines()) == 4


def test_workspace_csv_to_file(capsys, tmp_path):
    out_path = tmp_path / "points.csv"
    code, out, err = run(capsys, "workspace", "unit_a", "--ee", "carriage",
                         "--counts", "3", "--format", "csv",
                         "--out", str(out_path))
    assert code == 0
    assert out == ""
    rows = out_path.read_text().splitlines()
    assert len(rows) == 4
    assert "lengths.ram" in rows[0]


def test_workspace_ee_by_id(capsys):
    code, out, err = run(capsys, "workspace", "unit_a", "--ee", "1",
                         "--counts", "2")
    assert code == 0
    assert len(out.strip().splitlines()) == 2


def test_workspace_cap_is_a_domain_error(capsys):
    code, out, err = run(capsys, "workspace", "unit_a", "--ee", "carriage",
                         "--counts", "2000000")
    assert code == 1
    assert "cap" in err


def test_trajectory_identity_is_constant(capsys):
    robot, pose = arm_pose(math.sqrt(2.0))
    via = json.dumps([wire_pose(pose), wire_pose(pose)])
    code, out, err = run(capsys, "trajectory", "unit_b", "--ee", "arm",
                         "--via", via, "--samples", "4")
    assert code == 0
    lines = [json.loads(line) for line in out.strip().splitlines()]
    assert len(lines) == 4
    assert [r["t"] for r in lines] == pytest.approx([0, 1 / 3, 2 / 3, 1])
    for record in lines:
        assert record["lengths"]["jack"] == pytest.approx(math.sqrt(2.0),
                                                          abs=1e-6)
        assert record["converged"] is True


def test_trajectory_csv_format(capsys, tmp_path):
    robot, pa = arm_pose(0.9)
    _, pb = arm_pose(1.5)
    out_path = tmp_path / "path.csv"
    code, out, err = run(capsys, "trajectory", "unit_b", "--ee", "arm",
                         "--via", json.dumps([wire_pose(pa), wire_pose(pb)]),
                         "--samples", "3", "--format", "csv",
                         "--out", str(out_path))
    assert code == 0
    header = out_path.read_text().splitlines()[0]
    assert "t" in header.split(",") and "objective" in header.split(",")


# ---------------------------------------------------------------------------
# report figures


def png(path):
    return path.is_file() and path.read_bytes()[:4] == b"\x89PNG"


def test_workspace_report_figure(capsys, tmp_path):
    report = tmp_path / "figs"
    code, out, err = run(capsys, "workspace", "unit_a", "--ee", "carriage",
                         "--counts", "4", "--report", str(report))
    assert code == 0
    assert png(report / "workspace.png")


def test_trajectory_report_figure(capsys, tmp_path):
    robot, pa = arm_pose(0.9)
    _, pb = arm_pose(1.5)
    report = tmp_path / "figs"
    code, out, err = run(capsys, "trajectory", "unit_b", "--ee", "arm",
                         "--via", json.dumps([wire_pose(pa), wire_pose(pb)]),
                         "--samples", "3", "--report", str(report))
    assert code == 0
    assert png(report / "trajectory.png")


def test_fk_report_figure(capsys, tmp_path):
    report = tmp_path / "figs"
    code, out, err = run(capsys, "fk", "TCCHS", "--trials", "20",
                         "--seed", "2", "--report", str(report))
    assert code == 0
    assert png(report / "fk_timing.png")


def test_ik_report_figure(capsys, tmp_path):
    report = tmp_path / "figs"
    code, out, err = run(capsys, "ik", "unit_b", "--ee", "arm",
                         "--trials", "6", "--seed", "1",
                         "--report", str(report))
    assert code == 0
    assert png(report / "ik_trials.png")


# ---------------------------------------------------------------------------
# serve: request handling


def request(session, method, params=None, rid=1):
    return cli.handle_request(session,
                              {"id": rid, "method": method,
                               "params": params or {}})


def test_serve_load_then_state_revision_one():
    session = cli.Session()
    loaded = request(session, "load_model", {"model": "TCCHS"})
    assert "error" not in loaded
    assert loaded["id"] == 1
    assert loaded["result"]["revision"] == 1
    state = request(session, "get_state", rid=2)["result"]
    assert state["revision"] == 1
    assert len(state["lengths"]) == 11
    for pose in state["links"].values():
        assert len(pose["translation"]) == 3
        assert len(pose["quaternion"]) == 4


def test_serve_set_lengths_matches_direct_fk():
    session = cli.Session()
    request(session, "load_model", {"model": "unit_b"})
    result = request(session, "set_lengths",
                     {"lengths": {"jack": 1.3}})["result"]
    assert result["revision"] == 2
    robot, want = arm_pose(1.3)
    assert result["links"]["arm"]["translation"] == pytest.approx(
        want.translation, abs=1e-9)


def test_serve_failure_leaves_session_alone():
    session = cli.Session()
    request(session, "load_model", {"model": "unit_b"})
    before = request(session, "get_state")["result"]
    response = request(session, "set_lengths", {"lengths": {"jack": 99.0}})
    assert "jack" in response["error"]["message"]
    after = request(session, "get_state")["result"]
    assert after["revision"] == before["revision"]
    assert after["lengths"] == before["lengths"]
    assert "error" in request(session, "warp_drive")
    assert request(session, "get_state")["result"]["revision"] == 1


def test_serve_needs_a_model_first():
    session = cli.Session()
    assert "error" in request(session, "get_state")
    assert "error" in request(session, "set_lengths",
                              {"lengths": {"jack": 1.0}})


def test_serve_set_target_applies_solution():
    session = cli.Session()
    request(session, "load_model", {"model": "unit_b"})
    robot, pose = arm_pose(1.5)
    result = request(session, "set_target",
                     {"target": wire_pose(pose),
                      "end_effector": "arm"})["result"]
    assert result["converged"] is True
    assert result["lengths"]["jack"] == pytest.approx(1.5, abs=1e-3)
    assert result["revision"] == 2
    assert isinstance(result["trace"], list)
    state = request(session, "get_state")["result"]
    assert state["lengths"]["jack"] == pytest.approx(1.5, abs=1e-3)


def test_serve_sample_workspace_is_pure():
    session = cli.Session()
    request(session, "load_model", {"model": "unit_a"})
    result = request(session, "sample_workspace",
                     {"end_effector": "carriage", "counts": 2})["result"]
    assert len(result["points"]) == 2
    assert request(session, "get_state")["result"]["revision"] == 1


def test_serve_reset_restores_rest():
    session = cli.Session()
    request(session, "load_model", {"model": "unit_b"})
    rest = request(session, "get_state")["result"]["lengths"]["jack"]
    request(session, "set_lengths", {"lengths": {"jack": 1.5}})
    result = request(session, "reset")["result"]
    assert result["revision"] == 3
    assert result["lengths"]["jack"] == pytest.approx(rest, abs=1e-9)


def test_serve_stdio_survives_garbage():
    lines = [json.dumps({"id": 1, "method": "load_model",
                         "params": {"model": "unit_a"}}),
             "{garbage",
             json.dumps({"id": 3, "method": "get_state", "params": {}})]
    source = io.StringIO("\n".join(lines) + "\n")
    sink = io.StringIO()
    cli.serve_stdio(source, sink)
    responses = [json.loads(line) for line in sink.getvalue().splitlines()]
    assert len(responses) == 3
    assert responses[0]["result"]["revision"] == 1
    assert responses[1]["id"] is None
    assert "error" in responses[1]
    assert responses[2]["result"]["revision"] == 1


def test_serve_http_round_trip():
    server = cli.make_http_server("127.0.0.1", 0)
    port = server.server_address[1]
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        def post(payload):
            req = urllib.request.Request(
                "http://127.0.0.1:%d/" % port,
                data=json.dumps(payload).encode(),
                headers={"Content-Type": "application/json"})
            with urllib.request.urlopen(req, timeout=10) as reply:
                return json.loads(reply.read().decode())

        loaded = post({"id": 1, "method": "load_model",
                       "params": {"model": "unit_b"}})
        assert loaded["result"]["revision"] == 1
        moved = post({"id": 2, "method": "set_lengths",
                      "params": {"lengths": {"jack": 1.3}}})
        assert moved["result"]["revision"] == 2
        robot, want = arm_pose(1.3)
        assert moved["result"]["links"]["arm"]["translation"] == \
            pytest.approx(want.translation, abs=1e-9)
        broken = post({"id": 3, "method": "no_such"})
        assert "error" in broken
        state = post({"id": 4, "method": "get_state", "params": {}})
        assert state["result"]["revision"] == 2
    finally:
        server.shutdown()
        server.server_close()
        thread.join(timeout=5)


# ---------------------------------------------------------------------------
# plumbing


def test_no_arguments_is_usage_error(capsys):
    code, out, err = run(capsys)
    assert code == 2


def test_missing_model_file_is_io_error(capsys):
    code, out, err = run(capsys, "fk", "nope.mrdf.json")
    assert code == 2
