import logging
import sys

import click
from pydantic import ValidationError

from os_aio_pod.utils import load_module_from_pyfile, vars_from_module
from os_vilenkin import __version__
from os_vilenkin.builtin import BUILTIN_COMMANDS
from os_vilenkin.command import Status
from os_vilenkin.config import GroupKind, OutputFormat, PhiMode, RunConfig
from os_vilenkin.engine import Engine
from os_vilenkin.exceptions import ConfigError
from os_vilenkin.report import Report

EXIT_CODES = {Status.OK: 0, Status.VIOLATION: 1, Status.ERROR: 2}

logger = logging.getLogger("os_vilenkin")


def _choices(enum):
    return click.Choice([e.value for e in enum])


def load_config(config_file, command, overrides):
    """Config file values first, explicit flags on top."""
    values = {}
    if config_file:
        module = load_module_from_pyfile(config_file)
        values.update(vars_from_module(module))
    values.update({k: v for k, v in overrides.items() if v is not None})
    values["command"] = command
    try:
        return RunConfig.parse_obj(values)
    except ValidationError as e:
        raise ConfigError("; ".join(err["msg"] for err in e.errors()), e)


def emit(report, config_format, table, out):
    if config_format == OutputFormat.CSV:
        text = report.to_csv(table)
    else:
        text = report.to_json()
    if out:
        with open(out, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        click.echo(text, nl=False)


@click.command(
    context_settings={"help_option_names": ["-h", "--help"]},
    epilog="Builtin commands: " + ", ".join(c.name for c in BUILTIN_COMMANDS) + ".",
)
@click.version_option(__version__)
@click.argument("command")
@click.option("--config", "config_file", type=click.Path(exists=True), default=None)
@click.option("--p", type=int, default=None, help="Prime.")
@click.option("--r", type=int, default=None, help="Coset or transform level.")
@click.option("--n", type=int, default=None, help="Quotient or dual level.")
@click.option("--d", type=int, default=None, help="Heisenberg rank.")
@click.option("--m", type=int, default=None)
@click.option("--x", type=int, default=None)
@click.option("--y", type=int, default=None)
@click.option("--z", type=int, default=None)
@click.option("--N", "bound", type=int, default=None, help="Truncation shell.")
@click.option("--L", "levels", type=int, default=None, help="Basis level.")
@click.option("--s", type=float, default=None, help="Summability parameter.")
@click.option("--c", type=int, default=None)
@click.option("--m0", type=int, default=None)
@click.option("--max-n", "max_n", type=int, default=None)
@click.option("--k-max", "k_max", type=int, default=None)
@click.option("--trials", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--group", type=_choices(GroupKind), default=None)
@click.option("--mode", type=_choices(PhiMode), default=None)
@click.option("--format", "format", type=_choices(OutputFormat), default=None)
@click.option("--tolerance", type=float, default=None)
@click.option("--time-limit", "time_limit", type=float, default=None)
@click.option("--workers", type=int, default=None)
@click.option("--timing/--no-timing", default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--debug", is_flag=True, default=False)
def main(command, config_file, out, debug, **overrides):
    """Run one COMMAND and write its report to stdout or --out.

    COMMAND is a builtin or a name added by the COMMANDS list of --config.
    """
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if debug else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
    )
    try:
        config = load_config(config_file, command, overrides)
    except ConfigError as e:
        click.echo(f"error: {e.reason}", err=True)
        report = Report(
            command=command, config={}, result={"error": e.reason}, status=Status.ERROR
        )
        emit(report, OutputFormat.JSON, None, out)
        sys.exit(EXIT_CODES[Status.ERROR])

    engine = Engine(config)
    report = engine.run()
    if report.status == Status.ERROR:
        click.echo(f"error: {report.result.get('error')}", err=True)
    table = engine.outcome.table if engine.outcome else None
    emit(report, config.format, table, out)
    sys.exit(EXIT_CODES[report.status])
