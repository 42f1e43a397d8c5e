"""``genimm`` command line.

Exit statuses: 0 ok, 2 usage error, 3 invariant-consistency violation,
4 script schema error.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import numthy
from .calculus import (
    CalculusError,
    InconsistentStateError,
    check_state,
    residues,
    run_script,
)
from .script import (
    SchemaError,
    bundled_scripts,
    load_script,
    trace_to_records,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONSISTENCY = 3
EXIT_SCHEMA = 4

_format_option = click.option(
    "--format", "fmt", type=click.Choice(["text", "json-lines"]), default="text",
    show_default=True, help="Plain text or one JSON record per line.")


def _emit(record: dict) -> None:
    click.echo(json.dumps(record, sort_keys=True))


@click.group()
def main():
    """Invariants of generic immersions and their Bernoulli-number ranges."""


@main.command()
@click.argument("j", type=click.IntRange(min=1))
def bernoulli(j):
    """Print the Bernoulli number B_j = |B_2j| as numerator/denominator."""
    b = numthy.bernoulli_top(j)
    click.echo(f"{b.numerator}/{b.denominator}")


@main.command()
@click.argument("j", type=click.IntRange(min=1))
def mu(j):
    """Print mu_j, the denominator of B_j/(4j), with its factorization."""
    value = numthy.mu(j)
    click.echo(f"{value} = {numthy.factorize(value)}")


def _l_range_text(rep: numthy.LRangeReport) -> str:
    lines = [
        f"m = {rep.m}  (S^{2 * rep.m - 1} -> R^{2 * rep.m + 1})",
        f"divisor D = {rep.divisor}",
        f"realizable subgroup = {rep.realizable_subgroup}Z",
        f"exact: {'true' if rep.exact else 'false'}",
    ]
    if rep.exact:
        lines.append(f"range of L = {rep.divisor}Z")
    else:
        lines.append(f"{rep.realizable_subgroup}Z <= range of L <= {rep.divisor}Z")
    if rep.m == 2:
        lines.append("note: the full range Z for S^3 -> R^5 is known from "
                     "independent work; it is not derived here")
    return "\n".join(lines)


@main.command("l-range")
@click.argument("m", type=click.IntRange(min=2))
@_format_option
def l_range(m, fmt):
    """Divisibility constraint and realizable values of L for S^(2m-1) -> R^(2m+1)."""
    rep = numthy.l_range(m)
    if fmt == "json-lines":
        _emit(rep.to_record())
    else:
        click.echo(_l_range_text(rep))


@main.command("imm-group")
@click.argument("m", type=click.IntRange(min=2))
def imm_group(m):
    """Smale group of immersions S^(2m-1) -> R^(2m+1)."""
    click.echo(str(numthy.imm_group(m)))


def table_rows(max_j: int) -> list[dict]:
    rows = []
    for j in range(1, max_j + 1):
        odd = 2 * j + 1
        mu_j = numthy.mu(j)
        rep = numthy.l_range(2 * j)
        rows.append({
            "j": j,
            "m": 2 * j,
            "odd": odd,
            "odd_factorization": str(numthy.factorize(odd)),
            "mu": mu_j,
            "mu_factorization": str(numthy.factorize(mu_j)),
            "divisor": rep.divisor,
            "exact": rep.exact,
        })
    return rows


@main.command()
@click.option("--max-j", type=click.IntRange(1, 100), default=30, show_default=True)
@_format_option
def table(max_j, fmt):
    """Per-j table for immersions S^(4j-1) -> R^(4j+1)."""
    rows = table_rows(max_j)
    if fmt == "json-lines":
        for row in rows:
            _emit(row)
        return
    head = f"{'j':>3} {'2j+1':>6} {'':14} {'mu_j':>12} {'':22} {'D':>5} exact"
    click.echo(head)
    for r in rows:
        click.echo(f"{r['j']:>3} {r['odd']:>6} {r['odd_factorization']:14} "
                   f"{r['mu']:>12} {r['mu_factorization']:22} {r['divisor']:>5} "
                   f"{'yes' if r['exact'] else 'no'}")


def _resolve_script(name: str) -> Path:
    path = Path(name)
    if path.exists():
        return path
    bundled = bundled_scripts()
    if name in bundled:
        return bundled[name]
    raise click.BadParameter(f"no such file or bundled script: {name}",
                             param_hint="SCRIPT")


def _audit(ctx, trace) -> None:
    base = residues(ctx, trace[0])
    for i, state in enumerate(trace):
        check_state(ctx, state)
        if residues(ctx, state) != base:
            raise InconsistentStateError(f"residues changed at step {i}")


@main.command()
@click.argument("script")
@_format_option
@click.option("--check", is_flag=True, help="Audit every state of the trace.")
def simulate(script, fmt, check):
    """Run an event script (a path, or the name of a bundled script)."""
    path = _resolve_script(script)
    try:
        doc = load_script(path)
        trace = run_script(doc.context, doc.initial_state, doc.events)
    except (SchemaError, CalculusError) as exc:
        click.echo(f"schema error: {exc}", err=True)
        sys.exit(EXIT_SCHEMA)
    except OSError as exc:
        raise click.BadParameter(str(exc), param_hint="SCRIPT")

    if check:
        try:
            _audit(doc.context, trace)
        except InconsistentStateError as exc:
            click.echo(f"consistency violation: {exc}", err=True)
            sys.exit(EXIT_CONSISTENCY)

    ctx = doc.context
    res = residues(ctx, trace[-1])
    closed = trace[-1] == trace[0]
    rows = trace_to_records(trace, doc.events)
    if fmt == "json-lines":
        for row in rows:
            _emit(row)
        _emit({"residues": res.to_record(), "loop_closed": closed})
        return

    keys = list(trace[0].as_flat())
    click.echo(f"{'step':>4}  {'event':22} " + " ".join(f"{k:>7}" for k in keys))
    for row, state in zip(rows, trace):
        ev = str(doc.events[row["step"] - 1]) if row["step"] else "start"
        flat = state.as_flat()
        click.echo(f"{row['step']:>4}  {ev:22} " + " ".join(f"{flat[k]:>7}" for k in keys))
    parts = []
    if res.l_residue is not None:
        parts.append(f"l = {res.l_residue} in Z_{ctx.m + 1}")
    if res.lambda_residue is not None:
        parts.append(f"lambda = {res.lambda_residue} in Z_2")
    parts += [f"j_{r} = {v} in Z_2" for r, v in sorted(res.j_residues.items())]
    click.echo("residues: " + (", ".join(parts) if parts else "none defined"))
    click.echo(f"loop closed: {'true' if closed else 'false'}")


@main.command("scripts")
def list_scripts():
    """List the bundled event scripts."""
    for name in bundled_scripts():
        click.echo(name)


if __name__ == "__main__":
    main()
