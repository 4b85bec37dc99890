"""Batch command line surface.

Exit codes are a contract: 0 affirmative or clean, 1 negative verdict,
2 input error, 3 budget refusal, 4 discrepancy between deciders.
"""

from __future__ import annotations

import itertools
import json
import sys
from pathlib import Path
from typing import Optional

import click

from .census import (
    DEFAULT_BUDGET,
    DEFAULT_SEED,
    BudgetError,
    CensusRecord,
    DiscrepancyReport,
    crosscheck_spin,
    crosscheck_w,
    space_size,
    verify_conjecture,
    verify_elementary,
    write_census_header,
    enumerate_valid,
    build_record,
)
from .closedform import (
    CONJECTURE_READINGS,
    has_spin,
    w2_coefficients,
    w3_coefficients,
    w4_coefficients,
)
from .digraph import (
    CyclicDigraphError,
    DigraphFormatError,
    from_matrix,
    parse_digraph,
    serialize_digraph,
    to_matrix,
)
from .model import (
    DimensionVector,
    InvalidMatrixError,
    MatrixFormatError,
    ReducedMatrix,
    parse_matrix,
    serialize_matrix,
    validate,
)
from .oracle import (
    GradedPolynomial,
    normal_form,
    polynomial_str,
    relation_generators,
    sw_oracle,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_DISCREPANCY = 4


def _fail(code: int, message: str) -> None:
    click.echo(message, err=True)
    sys.exit(code)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        _fail(EXIT_INPUT, f"cannot read {path}: {exc}")
        raise AssertionError  # unreachable


def _load_matrix(path: str) -> ReducedMatrix:
    try:
        return parse_matrix(_read_text(path))
    except MatrixFormatError as exc:
        _fail(EXIT_INPUT, f"{path}: {exc}")
        raise AssertionError


def _checked(A: ReducedMatrix, path: str) -> None:
    report = validate(A)
    if not report.valid:
        sel = tuple(x + 1 for x in report.failing_selection)
        sub = tuple(sorted(x + 1 for x in report.failing_subset))
        _fail(
            EXIT_INPUT,
            f"{path}: not a characteristic matrix; principal minor vanishes "
            f"at row selection {sel}, column subset {sub}",
        )


def _parse_omega(text: str) -> DimensionVector:
    try:
        dims = tuple(int(tok) for tok in text.split(","))
        return DimensionVector(dims)
    except ValueError as exc:
        _fail(EXIT_INPUT, f"bad omega {text!r}: {exc}")
        raise AssertionError


def _emit(obj: dict, as_json: bool, lines: list[str]) -> None:
    if as_json:
        click.echo(json.dumps(obj, indent=2, sort_keys=True))
    else:
        for line in lines:
            click.echo(line)


@click.group()
def main() -> None:
    """Spin structures and Stiefel-Whitney classes of small covers over
    products of simplices, from the reduced characteristic matrix."""


@main.command()
@click.argument("matrix_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True, help="Emit one JSON object.")
def check(matrix_file: str, as_json: bool) -> None:
    """Validity, orientability and Spin verdict for a matrix file."""
    A = _load_matrix(matrix_file)
    _checked(A, matrix_file)
    report = has_spin(A)
    k = A.omega.k
    dots: dict[str, int] = {}
    for size in range(1, min(3, k) + 1):
        for S in itertools.combinations(range(k), size):
            dots[",".join(str(i + 1) for i in S)] = A.k_count(S)
    lines = [
        "valid: yes",
        f"orientable: {'yes' if report.orientable else 'no'}",
        f"spin: {'yes' if report.spin else 'no'}",
    ]
    if report.failed_condition is not None:
        witness = "(" + ",".join(str(i + 1) for i in report.witness) + ")"
        lines.append(f"failed condition: {report.failed_condition} at {witness}")
    lines.extend(f"k[{key}] = {val}" for key, val in dots.items())
    obj = {
        "valid": True,
        "orientable": report.orientable,
        "spin": report.spin,
        "failed_condition": report.failed_condition,
        "witness": [i + 1 for i in report.witness] if report.witness else None,
        "k": dots,
    }
    _emit(obj, as_json, lines)
    sys.exit(EXIT_OK if report.spin else EXIT_NEGATIVE)


def _closed_polynomial(A: ReducedMatrix, m: int) -> GradedPolynomial:
    if m == 1:
        terms = [
            tuple(1 if t == i else 0 for t in range(A.omega.k))
            for i in range(A.omega.k)
            if (A.k_count([i]) + 1) % 2 == 1
        ]
        return GradedPolynomial.from_terms(A.omega.k, terms)
    if m == 2:
        return w2_coefficients(A).polynomial(A.omega.k)
    if m == 3:
        return w3_coefficients(A).polynomial(A.omega.k)
    return w4_coefficients(A).polynomial(A.omega.k)


@main.command()
@click.argument("matrix_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--degree", "-m", type=int, required=True, help="Class degree.")
@click.option("--oracle", "use_oracle", is_flag=True, help="Ring-reduced class only.")
@click.option("--closed", "use_closed", is_flag=True, help="Closed-form coefficients only.")
@click.option("--both", "use_both", is_flag=True, help="Both plus an agreement verdict.")
@click.option("--json", "as_json", is_flag=True, help="Emit one JSON object.")
def sw(
    matrix_file: str,
    degree: int,
    use_oracle: bool,
    use_closed: bool,
    use_both: bool,
    as_json: bool,
) -> None:
    """Print a Stiefel-Whitney class of the cover in a matrix file."""
    picked = [f for f in (use_oracle, use_closed, use_both) if f]
    if len(picked) > 1:
        _fail(EXIT_INPUT, "choose at most one of --oracle, --closed, --both")
    if not picked:
        use_both = True
    A = _load_matrix(matrix_file)
    _checked(A, matrix_file)
    n = A.omega.n
    want_closed = use_closed or use_both
    want_oracle = use_oracle or use_both
    if degree < 1:
        _fail(EXIT_INPUT, "degree must be positive")
    if want_closed and degree > 4:
        _fail(EXIT_INPUT, "closed forms cover degrees 1..4")
    if want_oracle and degree > n:
        _fail(EXIT_INPUT, f"degree {degree} exceeds the dimension {n}")
    lines = []
    obj: dict = {"degree": degree}
    closed_poly = oracle_poly = None
    if want_closed:
        closed_poly = _closed_polynomial(A, degree)
        lines.append(f"closed w{degree}: {polynomial_str(closed_poly)}")
        obj["closed"] = polynomial_str(closed_poly)
    if want_oracle:
        oracle_poly = sw_oracle(A, degree)
        lines.append(f"oracle w{degree}: {polynomial_str(oracle_poly)}")
        obj["oracle"] = polynomial_str(oracle_poly)
    code = EXIT_OK
    if use_both:
        pre = all(d >= degree for d in A.omega.dims)
        level = "pre-reduction" if pre else "post-reduction"
        compare = closed_poly if pre else normal_form(closed_poly, relation_generators(A))
        agree = compare == oracle_poly
        lines.append(f"agreement ({level}): {'yes' if agree else 'no'}")
        obj["level"] = level
        obj["agree"] = agree
        if not agree:
            code = EXIT_DISCREPANCY
    _emit(obj, as_json, lines)
    sys.exit(code)


@main.command()
@click.argument("input_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--to", "target", type=click.Choice(["matrix", "digraph"]), required=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None)
def convert(input_file: str, target: str, output: Optional[str]) -> None:
    """Convert between the matrix text format and the digraph JSON format."""
    text = _read_text(input_file)
    if target == "digraph":
        try:
            A = parse_matrix(text)
        except MatrixFormatError as exc:
            _fail(EXIT_INPUT, f"{input_file}: {exc}")
        _checked(A, input_file)
        out = serialize_digraph(from_matrix(A))
    else:
        try:
            G = parse_digraph(text)
        except (DigraphFormatError, CyclicDigraphError, ValueError) as exc:
            _fail(EXIT_INPUT, f"{input_file}: {exc}")
        out = serialize_matrix(to_matrix(G))
    if output is None:
        click.echo(out, nl=False)
    else:
        Path(output).write_text(out, encoding="utf-8")
    sys.exit(EXIT_OK)


def _census_writer(path: Optional[str], omega: DimensionVector, seed: int, budget: int):
    """Returns (sink, closer); both no-ops when no census path is given."""
    if path is None:
        return None, lambda: None
    fh = open(path, "w", encoding="utf-8")
    write_census_header(fh, omega, seed, budget)

    def sink(rec: CensusRecord) -> None:
        fh.write(rec.to_json() + "\n")

    return sink, fh.close


def _report_exit(report: DiscrepancyReport, as_json: bool, extra: dict) -> None:
    obj = {
        "omega": list(report.omega),
        "valid": report.total_valid,
        "counts": report.counts,
        "discrepancies": len(report.discrepancies),
        "component_failures": len(report.component_failures),
        **extra,
    }
    lines = [report.summary()]
    if report.component_failures:
        lines.append(f"component failures: {len(report.component_failures)}")
    for rec in report.discrepancies + report.component_failures:
        lines.append(f"  {','.join(rec.flags)}: {rec.matrix}")
    _emit(obj, as_json, lines)
    if report.discrepancies or report.component_failures:
        sys.exit(EXIT_DISCREPANCY)
    sys.exit(EXIT_OK)


_COMMON = [
    click.option("--omega", "omega_text", required=True, help="Comma-separated factor dimensions."),
    click.option("--budget", type=int, default=DEFAULT_BUDGET, show_default=True),
    click.option("--threads", type=int, default=1, show_default=True),
    click.option("--census", "census_path", type=click.Path(dir_okay=False), default=None),
    click.option("--json", "as_json", is_flag=True, help="Emit one JSON object."),
]


def _common(fn):
    for deco in reversed(_COMMON):
        fn = deco(fn)
    return fn


@main.command(name="enumerate")
@_common
def enumerate_cmd(
    omega_text: str, budget: int, threads: int, census_path: Optional[str], as_json: bool
) -> None:
    """Enumerate the valid matrices of a family, optionally writing a census."""
    omega = _parse_omega(omega_text)
    sink, close = _census_writer(census_path, omega, DEFAULT_SEED, budget)
    count = 0
    try:
        for A in enumerate_valid(omega, budget=budget, threads=threads):
            count += 1
            if sink is not None:
                sink(build_record(A, []))
    except BudgetError as exc:
        close()
        _fail(EXIT_BUDGET, str(exc))
    finally:
        close()
    obj = {"omega": list(omega.dims), "space": space_size(omega), "valid": count}
    _emit(obj, as_json, [f"space: {space_size(omega)}, valid: {count}"])
    sys.exit(EXIT_OK)


@main.command()
@_common
@click.option(
    "--check",
    "what",
    type=click.Choice(["spin", "w3", "w4", "elementary"]),
    default="spin",
    show_default=True,
)
@click.option("--sample", type=int, default=None, help="Seeded valid-sample size (w3/w4).")
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
def verify(
    omega_text: str,
    budget: int,
    threads: int,
    census_path: Optional[str],
    as_json: bool,
    what: str,
    sample: Optional[int],
    seed: int,
) -> None:
    """Cross-check closed-form criteria against the digraph form and oracle."""
    omega = _parse_omega(omega_text)
    if sample is not None and what not in ("w3", "w4"):
        _fail(EXIT_INPUT, "--sample applies only to w3/w4 checks")
    sink, close = _census_writer(census_path, omega, seed, budget)
    try:
        if what == "spin":
            report = crosscheck_spin(omega, budget=budget, threads=threads, sink=sink)
        elif what in ("w3", "w4"):
            report = crosscheck_w(
                omega,
                3 if what == "w3" else 4,
                sample=sample,
                budget=budget,
                seed=seed,
                threads=threads,
                sink=sink,
            )
        else:
            report = verify_elementary(omega, budget=budget, threads=threads, sink=sink)
    except BudgetError as exc:
        _fail(EXIT_BUDGET, str(exc))
    except ValueError as exc:
        _fail(EXIT_INPUT, str(exc))
    finally:
        close()
    _report_exit(report, as_json, {"check": what})


@main.command()
@_common
@click.option("--t", "t", type=int, required=True, help="Conjecture level (1 or 2).")
@click.option(
    "--reading",
    type=click.Choice(list(CONJECTURE_READINGS)),
    default="shifted",
    show_default=True,
)
@click.option("--sample", type=int, default=None, help="Seeded valid-sample size.")
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
def conjecture(
    omega_text: str,
    budget: int,
    threads: int,
    census_path: Optional[str],
    as_json: bool,
    t: int,
    reading: str,
    sample: Optional[int],
    seed: int,
) -> None:
    """Compare the conjectured congruences with oracle class vanishing."""
    omega = _parse_omega(omega_text)
    sink, close = _census_writer(census_path, omega, seed, budget)
    try:
        report = verify_conjecture(
            omega,
            t,
            reading,
            sample=sample,
            budget=budget,
            seed=seed,
            threads=threads,
            sink=sink,
        )
    except BudgetError as exc:
        _fail(EXIT_BUDGET, str(exc))
    except ValueError as exc:
        _fail(EXIT_INPUT, str(exc))
    finally:
        close()
    _report_exit(report, as_json, {"t": t, "reading": reading})


if __name__ == "__main__":
    main()
