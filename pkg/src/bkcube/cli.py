"""Command-line interface.

Exit codes, uniform across subcommands: 0 everything passed, 1 an assert
or verdict failed, 2 usage, parse, or IO trouble.  BKCUBE_MAX_ITERS
(default 32) bounds every iteration loop.
"""

from __future__ import annotations

import sys

import click

from .core import Degree, Mode, Profile, fmt_r, parse_r
from .pipeline import default_max_iters, iterate
from .script import ScriptParseError, ScriptRuntimeError, execute
from .script import parse as parse_script
from .theorems import standard_battery
from .tracedoc import document, render_json, render_markdown


def _die(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _iteration_bound() -> int:
    try:
        return default_max_iters()
    except ValueError as err:
        _die(str(err))
        raise AssertionError("unreachable")


@click.group()
def main() -> None:
    """Connectivity estimates for cubical diagrams under suspension and
    loop passes, with replayable derivation traces."""


@main.command("verify-paper")
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["md", "json"]),
    default="md",
    show_default=True,
    help="Report format.",
)
@click.option("--out", "out_path", default=None, help="Write the report to this file.")
def cmd_verify_paper(fmt: str, out_path: str | None) -> None:
    """Replay the standard battery of claims and report verdicts."""
    _iteration_bound()
    verdicts = standard_battery()
    traces = [t for v in verdicts for t in v.traces]
    if fmt == "json":
        text = render_json(document(traces, verdicts))
    else:
        text = render_markdown(traces, verdicts, title="Verification report")
    if out_path is not None:
        try:
            with open(out_path, "w", encoding="utf-8") as handle:
                handle.write(text)
        except OSError as err:
            _die(f"cannot write {out_path}: {err}")
    else:
        click.echo(text, nl=False)
    failed = [v for v in verdicts if not v.passed]
    for v in failed:
        click.echo(f"FAIL: {v.claim_id}", err=True)
    sys.exit(1 if failed else 0)


@main.command("run")
@click.argument("script_path", metavar="SCRIPT", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--trace",
    "trace_fmt",
    type=click.Choice(["md", "json"]),
    default=None,
    help="Also emit the derivation trace.",
)
def cmd_run(script_path: str, trace_fmt: str | None) -> None:
    """Execute a .bkc script; exit 1 when any assert fails."""
    _iteration_bound()
    try:
        with open(script_path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as err:
        _die(f"cannot read {script_path}: {err}")
    try:
        script = parse_script(text)
    except ScriptParseError as err:
        _die(f"parse error in {script_path}: {err}")
    try:
        result = execute(script, label=script_path)
    except ScriptRuntimeError as err:
        _die(f"runtime error in {script_path}: {err}")
    for line in result.printed:
        click.echo(line)
    for outcome in result.asserts:
        status = "ok" if outcome.passed else "FAIL"
        suffix = f" ({outcome.detail})" if outcome.detail else ""
        click.echo(f"{status}: line {outcome.line}: {outcome.text}{suffix}")
    if trace_fmt is not None and result.derivation is not None:
        if trace_fmt == "json":
            click.echo(render_json(document([result.derivation])), nl=False)
        else:
            click.echo(render_markdown([result.derivation], title="Script trace"), nl=False)
    sys.exit(0 if result.passed else 1)


def _degree_entries(text: str) -> dict[int, Degree]:
    entries: dict[int, Degree] = {}
    for part in text.split(","):
        piece = part.strip()
        if not piece:
            continue
        head, sep, tail = piece.partition("=")
        if not sep:
            raise ValueError(f"bad degree entry {piece!r}; want d=value")
        try:
            d = int(head.strip())
        except ValueError:
            raise ValueError(f"bad dimension in {piece!r}") from None
        if d in entries:
            raise ValueError(f"dimension {d} given twice")
        entries[d] = Degree.parse(tail.strip())
    return entries


@main.command("step")
@click.option("--dim", required=True, type=int, help="Cube dimension.")
@click.option("--conn1", "conn1_text", required=True, help="Map connectivity (int or inf).")
@click.option("--cocart", "cocart_text", default=None, help='Cocartesian degrees, e.g. "2=inf,3=4".')
@click.option("--cart", "cart_text", default=None, help='Cartesian degrees, e.g. "2=3,3=4".')
@click.option("--r", "r_text", default="1", show_default=True, help="Suspension extent (int or inf).")
@click.option("--iters", type=int, default=None, help="Iteration bound (default BKCUBE_MAX_ITERS).")
def cmd_step(
    dim: int,
    conn1_text: str,
    cocart_text: str | None,
    cart_text: str | None,
    r_text: str,
    iters: int | None,
) -> None:
    """Iterate a single profile and print its derivation."""
    bound = _iteration_bound()
    if cocart_text is not None and cart_text is not None:
        _die("give at most one of --cocart or --cart")
    mode = Mode.CARTESIAN if cart_text is not None else Mode.COCARTESIAN
    if iters is not None and iters < 1:
        _die(f"--iters must be >= 1, got {iters}")
    try:
        degrees = _degree_entries(cart_text or cocart_text or "")
        profile = Profile(dim, Degree.parse(conn1_text), mode, degrees)
        r = parse_r(r_text)
    except ValueError as err:
        _die(str(err))
    label = f"step dim={dim} r={fmt_r(r)}"
    max_iters = bound if iters is None else iters
    derivation = iterate(profile, r, max_iters=max_iters, label=label)
    click.echo(render_markdown([derivation], title="Iteration"), nl=False)
    final = derivation.steps[-1].profile if derivation.steps else derivation.initial
    if derivation.stabilized_at is not None:
        click.echo(f"stabilized at iterate {derivation.stabilized_at}; final {final.describe()}")
    else:
        click.echo(f"did not stabilize within {max_iters} iterates; final {final.describe()}")
    sys.exit(0)
