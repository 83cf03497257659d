import json
import threading
import time
from fractions import Fraction

import pytest

from os_aio_pod.utils import load_module_from_pyfile, vars_from_module
from os_vilenkin.characters import CharIndexS
from os_vilenkin.command import Outcome, Status
from os_vilenkin.config import RunConfig
from os_vilenkin.engine import WORKER_PREFIX, Engine, run
from os_vilenkin.phase import Cyclotomic, Phase
from os_vilenkin.report import Report, render_key, render_value


def configured(command, **kwargs):
    module = load_module_from_pyfile("tests/configs/commands.py")
    values = vars_from_module(module)
    values.update(kwargs)
    values["command"] = command
    return RunConfig.parse_obj(values)


def extra_command(name, cls, **kwargs):
    return RunConfig(COMMANDS=[{"name": name, "cls": cls}], command=name, **kwargs)


def test_custom_command():
    engine = Engine(configured("echo", p=5))
    report = engine.run()
    assert report.status == Status.OK
    assert report.result == {"greeting": "hello", "p": 5}
    command = engine.command_manager.get_command("echo")
    assert command.setup_called and command.cleanup_called


def test_removed_command():
    report = run(configured("sigma-table"))
    assert report.status == Status.ERROR
    assert "unknown command" in report.result["error"]


def test_time_limit():
    config = extra_command("slow", "tests.commands.SlowCommand", time_limit=0.05)
    report = run(config)
    assert report.status == Status.ERROR
    assert report.result == {"error": "time limit exceeded"}


def test_blocking_call_is_abandoned():
    config = extra_command("blocking", "tests.commands.BlockingCommand", time_limit=0.1)
    started = time.perf_counter()
    report = run(config)
    assert time.perf_counter() - started < 1.5
    assert report.result == {"error": "time limit exceeded"}
    workers = [t for t in threading.enumerate() if t.name.startswith(WORKER_PREFIX)]
    assert workers
    assert all(t.daemon for t in workers)


def test_time_limit_stops_queued_calls():
    config = extra_command(
        "sweep", "tests.commands.SweepCommand", time_limit=0.1, workers=2
    )
    engine = Engine(config)
    report = engine.run()
    assert report.result == {"error": "time limit exceeded"}
    calls = engine.command_manager.get_command("sweep").calls
    time.sleep(0.3)
    assert 0 < len(calls) < 20


def test_unbuildable_command():
    report = run(extra_command("unbuildable", "tests.commands.UnbuildableCommand"))
    assert report.status == Status.ERROR
    assert "command 'unbuildable' failed to load" in report.result["error"]
    assert "missing table" in report.result["error"]


def test_setup_failure():
    config = extra_command("failing-setup", "tests.commands.FailingSetupCommand")
    engine = Engine(config)
    report = engine.run()
    assert report.status == Status.ERROR
    assert report.result["kind"] == "CommandException"
    assert "setup of failing-setup failed" in report.result["error"]
    assert "no scratch space" in report.result["error"]
    command = engine.command_manager.get_command("failing-setup")
    assert not command.ran
    assert not command.cleanup_called


def test_only_selected_command_is_set_up():
    config = RunConfig(
        COMMANDS=[{"name": "echo", "cls": "tests.commands.EchoCommand"}],
        command="dual-enumerate",
        p=2,
        n=0,
    )
    engine = Engine(config)
    assert engine.run().status == Status.OK
    echo = engine.command_manager.get_command("echo")
    assert not echo.setup_called
    assert not echo.cleanup_called


def test_unexpected_failure():
    report = run(extra_command("broken", "tests.commands.BrokenCommand"))
    assert report.status == Status.ERROR
    assert "unexpected failure in broken" in report.result["error"]
    assert "boom" in report.result["cause"]


def test_library_error_kind():
    report = run(RunConfig(command="rw-dim", p=2, n=1, c=7))
    assert report.status == Status.ERROR
    assert report.result["kind"] == "DomainError"


def test_timing_switch():
    assert run(RunConfig(command="sigma-table", max_n=4)).elapsed_ms is not None
    report = run(RunConfig(command="sigma-table", max_n=4, timing=False))
    assert report.elapsed_ms is None
    assert json.loads(report.to_json())["elapsed_ms"] is None


def test_config_echo():
    report = run(RunConfig(command="sigma-table", p=3, max_n=4))
    payload = json.loads(report.to_json())
    assert payload["config"]["p"] == 3
    assert payload["config"]["format"] == "json"
    assert "COMMANDS" not in payload["config"]


def test_outcome_status():
    assert Outcome.check({}, True).status == Status.OK
    assert Outcome.check({}, False).status == Status.VIOLATION
    assert Outcome({}, "error").status == Status.ERROR


def test_render_value():
    assert render_value(Fraction(1, 2)) == "1/2"
    assert render_value(Phase(2, 3, 2)) == {"num": 3, "p": 2, "exp": 2}
    assert render_value(Cyclotomic.rational(2, Fraction(3, 4))) == "3/4"
    assert render_value(Cyclotomic.from_phase(Phase(2, 1, 2), Fraction(1, 4))) == {
        "coef": "1/4",
        "phase": {"num": 1, "p": 2, "exp": 2},
    }
    assert render_value(1 + 2j) == {"re": 1.0, "im": 2.0}
    assert render_value({CharIndexS(2, 1, 0): 1}) == {"(1,0)": 1}
    assert render_value(Status.VIOLATION) == "violation-found"
    assert render_key((CharIndexS(3, 1, 1), 2)) == "((1,1),2)"


def test_csv_fallback():
    report = Report(
        command="x", config={"p": 2}, result={"a": [1, 2]}, status=Status.OK
    )
    lines = report.to_csv().splitlines()
    assert lines[0] == "key,value"
    assert "config.p,2" in lines
    assert 'result.a,"[1,2]"' in lines


@pytest.mark.parametrize(
    "command, kwargs",
    [
        ("decompose-indicator", dict(p=3, r=2, x=4)),
        ("heis-decompose", dict(p=2, d=1, r=1, x=1, y=1, z=1)),
        ("sigma-table", dict(p=3, m=1, max_n=30)),
        ("transform-bench", dict(p=2, r=5, trials=2)),
        ("rw-dim", dict(p=2, n=2, c=1, max_n=6)),
        ("rw-dim", dict(p=2, n=1, c=4, max_n=4, group="heis")),
        ("dirac-spectrum", dict(p=2, bound=3)),
        ("dirac-spectrum", dict(p=2, bound=2, group="heis", s=0.5)),
        ("commutator-check", dict(p=3, c=4, levels=3, bound=3)),
        ("qdq-check", dict(p=2, r=1, x=1, levels=2, trials=2)),
        ("gk-growth", dict(p=2, levels=2, trials=2)),
        ("phi-check", dict(p=2, m=1, max_n=32, mode="sigma", c=5)),
        ("phi-check", dict(p=3, m=0, max_n=27, mode="shuffle")),
        ("dual-enumerate", dict(p=3, d=1, n=1)),
    ],
)
def test_builtin_commands_pass(command, kwargs):
    report = run(RunConfig(command=command, **kwargs))
    assert report.status == Status.OK, report.result
    text = report.to_json()
    assert json.dumps(json.loads(text), indent=2, ensure_ascii=False) + "\n" == text


def test_violation_status():
    report = run(RunConfig(command="phi-check", p=2, m=1, max_n=32, mode="swap"))
    assert report.status == Status.VIOLATION
    assert report.result["commuting"].violations
    assert report.result["implication_holds"]
