"""Command-line front end: ``k3ls <command> [options]``.

Exit status is 0 on success (the verdict lives inside the document), 1 on
usage errors and 2 on computation errors such as sampling failures or
exceeded elimination caps.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from itertools import combinations_with_replacement
from pathlib import Path
from typing import Optional

import click

from . import __version__
from .classifier import classify, is_conjecturally_special, segre_audit
from .degeneration import (
    ORDER_FOUR_FIRST,
    ORDER_NINE_FIRST,
    HomogeneousSystem,
    theorem_deg_certify,
    tree_to_document,
    verify_certificate,
)
from .numerics import SystemClass, expected_dim, format_mults, parse_mults
from .oracle import (
    DEFAULT_PRIME,
    ChartError,
    K3ModelSpec,
    NoModelError,
    RankCapError,
    SamplingError,
    measure_general_multiplicity,
    model_for_n,
    speciality_test,
)

CSV_COLUMNS = ("n", "d", "mults", "v", "e", "case_tag", "predicted", "actual", "agreement")

# ClassError, PlanError, ModelError and NoModelError are all ValueErrors
USAGE_ERRORS = (ValueError, IndexError)
COMPUTATION_ERRORS = (SamplingError, RankCapError, ChartError)


def _module_of(exc: Exception) -> str:
    return type(exc).__module__.rsplit(".", 1)[-1]


def _system(n: int, d: int, mults: str) -> SystemClass:
    return SystemClass(n, d, parse_mults(mults))


def _model(n: int, model: str, model_file: Optional[str], prime: int, seed: int) -> K3ModelSpec:
    if model_file:
        spec = K3ModelSpec.load(model_file)
    elif model == "auto":
        spec = model_for_n(n, prime, seed)
    else:
        spec = K3ModelSpec.random(model, prime, seed)
    if spec.n != n:
        raise NoModelError(f"model {spec.variant} has n={spec.n}, system has n={n}")
    return spec


def _row(cls: SystemClass, verdict=None, actual=None) -> dict:
    dims = expected_dim(cls)
    row = {"n": cls.n, "d": cls.d, "mults": format_mults(cls.mults), "v": dims.v, "e": dims.e,
           "case_tag": "", "predicted": "", "actual": "", "agreement": ""}
    if verdict is not None:
        row["case_tag"], row["predicted"] = verdict.case_tag, verdict.predicted_dim
    if actual is not None:
        row["actual"] = actual
        if verdict is not None:
            row["agreement"] = actual == verdict.predicted_dim
    return row


def _emit(ctx: click.Context, result: dict, rows: Optional[list[dict]] = None) -> None:
    obj = ctx.obj
    fmt = obj["format"]
    if fmt == "json":
        doc = {"tool": "k3linsys", "version": __version__, "command": ctx.info_name,
               "config": {k: v for k, v in sorted(ctx.params.items()) if k != "output"},
               "result": result}
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        if rows is None:
            raise click.UsageError(f"csv output is not available for '{ctx.info_name}'")
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: str(v).lower() if isinstance(v, bool) else v for k, v in row.items()})
        text = buf.getvalue()
    else:
        text = _table(result, rows)
    if obj["output"]:
        Path(obj["output"]).write_text(text)
    else:
        click.echo(text, nl=False)


def _table(result: dict, rows: Optional[list[dict]]) -> str:
    if rows is not None and len(rows) != 1:
        widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) if rows else len(c) for c in CSV_COLUMNS}
        lines = ["  ".join(c.ljust(widths[c]) for c in CSV_COLUMNS)]
        lines += ["  ".join(str(r[c]).ljust(widths[c]) for c in CSV_COLUMNS) for r in rows]
        return "\n".join(lines) + "\n"
    lines = []
    for key, value in result.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        lines.append(f"{key:>22}: {value}")
    return "\n".join(lines) + "\n"


system_options = [
    click.option("--n", "n", type=int, required=True, help="H^2 of the polarization (even)."),
    click.option("--d", "d", type=int, required=True, help="Degree."),
    click.option("--mults", default="", help="Multiplicities, e.g. '2^4,3'."),
]

oracle_options = [
    click.option("--model", type=click.Choice(["auto", "quartic", "double-plane"]), default="auto"),
    click.option("--model-file", type=click.Path(exists=True, dir_okay=False), default=None),
    click.option("--prime", type=int, envvar="K3LS_PRIME", default=DEFAULT_PRIME, show_default=True),
    click.option("--seed", type=int, envvar="K3LS_SEED", default=0, show_default=True),
    click.option("--trials", type=int, default=2, show_default=True),
]


def _apply(options):
    def decorator(f):
        for opt in reversed(options):
            f = opt(f)
        return f
    return decorator


@click.group()
@click.version_option(__version__, prog_name="k3ls")
@click.option("--format", "fmt", type=click.Choice(["table", "json", "csv"]), default="table")
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Write to a file.")
@click.pass_context
def cli(ctx, fmt, output):
    """Linear systems through fat points on generic K3 surfaces."""
    ctx.obj = {"format": fmt, "output": output}


@cli.command()
@_apply(system_options)
@click.pass_context
def vdim(ctx, n, d, mults):
    """Virtual and expected dimension."""
    cls = _system(n, d, mults)
    dims = expected_dim(cls)
    _emit(ctx, {"system": cls.to_dict(), "v": dims.v, "e": dims.e}, [_row(cls)])


@cli.command("classify")
@_apply(system_options)
@click.pass_context
def classify_cmd(ctx, n, d, mults):
    """Conjectural speciality verdict and fixed/mobile decomposition."""
    cls = _system(n, d, mults)
    verdict = classify(cls)
    _emit(ctx, verdict.to_dict(), [_row(cls, verdict)])


def _parse_part(n: int, text: str) -> tuple[SystemClass, int]:
    pieces = text.split(":")
    if len(pieces) not in (2, 3):
        raise click.BadParameter(f"expected 'd:mults[:mu]', got {text!r}")
    mu = int(pieces[2]) if len(pieces) == 3 else 1
    return SystemClass(n, int(pieces[0]), parse_mults(pieces[1])), mu


@cli.command()
@click.option("--n", "n", type=int, required=True)
@click.option("--part", "parts", multiple=True, help="Fixed component 'd:mults[:mu]'; zeros keep labels.")
@click.option("--mobile", default=None, help="Mobile part 'd:mults'.")
@click.pass_context
def audit(ctx, n, parts, mobile):
    """Pairwise intersection audit of a hypothesized fixed part."""
    fixed = [_parse_part(n, p) for p in parts]
    mob = _parse_part(n, mobile)[0] if mobile else None
    _emit(ctx, segre_audit(fixed, mob).to_dict())


@cli.command()
@click.option("--n", "n", type=int, required=True)
@click.option("--d", "d", type=int, required=True)
@click.option("--m", "m", type=int, required=True)
@click.option("--h", "h", type=int, default=0)
@click.option("--k", "k9", type=int, default=0, help="Exponent of 9 in the point count.")
@click.option("--twist", type=int, default=None, help="Fixed twist; default k = m.")
@click.option("--order", type=click.Choice([ORDER_FOUR_FIRST, ORDER_NINE_FIRST]), default=ORDER_FOUR_FIRST)
@click.option("--check-leaves", is_flag=True, help="Run the oracle on the leaf system.")
@_apply(oracle_options)
@click.pass_context
def certify(ctx, n, d, m, h, k9, twist, order, check_leaves, model, model_file, prime, seed, trials):
    """Reduce L^n(d, m^(4^h 9^k)) to its one-point leaf."""
    system = HomogeneousSystem(n, d, m, h, k9)
    checker = None
    if check_leaves:
        def checker(leaf):
            return speciality_test(_model(n, model, model_file, prime, seed), leaf, trials, seed)
    tree = theorem_deg_certify(system, checker, twist, order)
    doc = tree_to_document(tree)
    _emit(ctx, doc)


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def verify(ctx, path):
    """Re-check every integer of a certificate document (JSON or cli output)."""
    data = json.loads(Path(path).read_text())
    cert = data.get("result", data)
    problems = verify_certificate(cert)
    _emit(ctx, {"verified": not problems, "problems": problems})
    if problems:
        ctx.exit(2)


@cli.command()
@_apply(system_options)
@_apply(oracle_options)
@click.pass_context
def oracle(ctx, n, d, mults, model, model_file, prime, seed, trials):
    """Measure the actual dimension on a concrete model."""
    cls = _system(n, d, mults)
    report = speciality_test(_model(n, model, model_file, prime, seed), cls, trials, seed)
    _emit(ctx, report.to_dict(), [_row(cls, None, report.actual_dim)])


@cli.command()
@_apply(system_options)
@click.option("--index", type=int, default=0, show_default=True)
@_apply(oracle_options)
@click.pass_context
def mult(ctx, n, d, mults, index, model, model_file, prime, seed, trials):
    """Measured multiplicity of the general member at one point."""
    cls = _system(n, d, mults)
    measured = measure_general_multiplicity(_model(n, model, model_file, prime, seed), cls, index, trials, seed)
    _emit(ctx, {"system": cls.to_dict(), "index": index, "imposed": cls.mults[index],
                "measured": measured, "prime": prime, "seed": seed, "trials": trials})


def _range(text: str) -> range:
    lo, _, hi = text.partition("-")
    return range(int(lo), int(hi or lo) + 1)


def sweep_systems(ns, degrees: range, max_r: int, max_mult: int, slack: int,
                  include_special: bool = True) -> list[SystemClass]:
    """Every multiset pattern with ``r <= max_r`` and conditions ``<= h^0 + slack``."""
    out = []
    for n in ns:
        for d in degrees:
            budget = d * d * n // 2 + 2 + slack
            for r in range(0, max_r + 1):
                for combo in combinations_with_replacement(range(max_mult, 0, -1), r):
                    cls = SystemClass(n, d, combo)
                    if sum(m * (m + 1) // 2 for m in combo) > budget:
                        continue
                    if not include_special and is_conjecturally_special(cls):
                        continue
                    out.append(cls)
    return out


@cli.command()
@click.option("--n", "ns", type=int, multiple=True, default=(2, 4), show_default=True)
@click.option("--d-range", default="1-3", show_default=True)
@click.option("--max-r", type=int, default=5, show_default=True)
@click.option("--max-mult", type=int, default=12, show_default=True)
@click.option("--slack", type=int, default=5, show_default=True)
@click.option("--with-oracle/--no-oracle", default=True)
@click.option("--include-special/--exclude-special", default=True)
@_apply(oracle_options)
@click.pass_context
def sweep(ctx, ns, d_range, max_r, max_mult, slack, with_oracle, include_special,
          model, model_file, prime, seed, trials):
    """Tabulate v, e, prediction and (optionally) oracle dimension over a range."""
    rows = []
    models = {}
    for cls in sweep_systems(ns, _range(d_range), max_r, max_mult, slack, include_special):
        verdict = classify(cls) if cls.is_normalized and cls.d >= 1 else None
        actual = None
        if with_oracle and cls.d >= 1:
            if cls.n not in models:
                models[cls.n] = _model(cls.n, model, model_file, prime, seed)
            actual = speciality_test(models[cls.n], cls, trials, seed).actual_dim
        rows.append(_row(cls, verdict, actual))
    _emit(ctx, {"rows": rows, "count": len(rows)}, rows)


def main(argv=None) -> int:
    try:
        rv = cli.main(args=argv, prog_name="k3ls", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except USAGE_ERRORS as exc:
        click.echo(f"error [{_module_of(exc)}]: {exc}", err=True)
        return 1
    except COMPUTATION_ERRORS as exc:
        click.echo(f"error [{_module_of(exc)}]: {exc}", err=True)
        return 2
    return rv if isinstance(rv, int) else 0


if __name__ == "__main__":
    sys.exit(main())
