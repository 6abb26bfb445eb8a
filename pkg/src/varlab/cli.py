"""Batch front door: CSV ingestion, VaR and subadditivity reports,
comonotonic couplings, seeded equivalence trials, and Gaussian checks.

Input CSV is UTF-8, comma separated, one column per loss variable, with an
optional header row and an optional weight column named "weight". Cells are
decimal numbers and convert to exact rationals, so the discrete reports carry
no floating point error at all. Rationals serialize as "num/den" strings;
the Gaussian subcommand's floating point outputs round to 12 significant
digits so identical inputs always produce identical bytes.

Exit codes: 0 on success, 2 on input validation failure, 3 on an internal
invariant breach (an equivalence violation, which should never occur).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from . import __version__
from .comonotonicity import comonotonic_coupling, is_comonotonic
from .distributions import DiscreteDistribution, JointDiscreteDistribution
from .gaussian import (
    GaussianSpec,
    gaussian_comonotone_condition,
    gaussian_portfolio_var,
    gaussian_subadditivity_gap,
    gaussian_var,
)
from .subadditivity import (
    GeneratorSpec,
    equivalence_trial,
    random_comonotonic,
    random_coupling,
    subadditivity_report,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INVARIANT = 3


# ---------------------------------------------------------------------------
# CSV ingestion and dumping


def _parse_cell(text: str, row: int, col: int) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(
            f"row {row}, column {col}: cannot parse {text.strip()!r} as a number"
        ) from None


def _row_is_numeric(row: Sequence[str]) -> bool:
    for cell in row:
        try:
            Fraction(cell.strip())
        except (ValueError, ZeroDivisionError):
            return False
    return True


def ingest_csv(
    path,
    *,
    has_header: bool | None = None,
    weight_column: int | str | None = None,
) -> JointDiscreteDistribution:
    """Read loss samples into an exact joint distribution.

    Each data row becomes one support point with weight 1, or the value of
    the weight column when one is present; duplicate rows merge and weights
    normalize to probabilities. With ``has_header=None`` the header is
    sniffed: a first row containing any non-numeric cell is treated as a
    header. ``weight_column`` may be a 0-based index or a header name; when
    omitted, a header column named "weight" is used automatically.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    if not rows:
        raise ValueError(f"{path}: no data rows")

    if has_header is None:
        has_header = not _row_is_numeric(rows[0])
    header = [c.strip() for c in rows[0]] if has_header else None
    data = rows[1:] if has_header else rows
    first_row_number = 2 if has_header else 1
    if not data:
        raise ValueError(f"{path}: no data rows")

    ncols = len(header) if header is not None else len(data[0])
    widx: int | None = None
    if weight_column is not None:
        if isinstance(weight_column, str) and not weight_column.lstrip("-").isdigit():
            if header is None:
                raise ValueError("named weight column requires a header row")
            lowered = [h.lower() for h in header]
            if weight_column.lower() not in lowered:
                raise ValueError(f"weight column {weight_column!r} not found in header")
            widx = lowered.index(weight_column.lower())
        else:
            widx = int(weight_column)
            if not 0 <= widx < ncols:
                raise ValueError(f"weight column index {widx} out of range")
    elif header is not None:
        lowered = [h.lower() for h in header]
        if "weight" in lowered:
            widx = lowered.index("weight")

    loss_cols = [c for c in range(ncols) if c != widx]
    if not loss_cols:
        raise ValueError("no loss columns left after removing the weight column")

    pairs = []
    for offset, row in enumerate(data):
        rownum = first_row_number + offset
        if len(row) != ncols:
            raise ValueError(f"row {rownum}: expected {ncols} cells, got {len(row)} (ragged row)")
        coords = tuple(_parse_cell(row[c], rownum, c + 1) for c in loss_cols)
        if widx is None:
            weight = Fraction(1)
        else:
            weight = _parse_cell(row[widx], rownum, widx + 1)
            if weight <= 0:
                raise ValueError(f"row {rownum}: weight must be positive, got {weight}")
        pairs.append((coords, weight))
    return JointDiscreteDistribution.from_weighted_points(pairs)


def decimal_cell(value: Fraction) -> str:
    """Exact decimal string for a rational whose denominator is 2^a * 5^b."""
    den = value.denominator
    twos = fives = 0
    rest = den
    while rest % 2 == 0:
        rest //= 2
        twos += 1
    while rest % 5 == 0:
        rest //= 5
        fives += 1
    if rest != 1:
        raise ValueError(f"{value} has no finite decimal expansion")
    places = max(twos, fives)
    digits = abs(value.numerator) * (10**places // den)
    sign = "-" if value.numerator < 0 else ""
    if places == 0:
        return f"{sign}{digits}"
    whole, frac = divmod(digits, 10**places)
    text = f"{frac:0{places}d}".rstrip("0")
    return f"{sign}{whole}.{text}" if text else f"{sign}{whole}"


def dump_csv(j: JointDiscreteDistribution, stream: TextIO) -> None:
    """Write a joint law as loss columns plus an integer weight column.

    Coordinates must have finite decimal expansions; probabilities are
    rescaled by their common denominator so weights are exact integers and
    ``ingest_csv`` reproduces the law bit for bit.
    """
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow([f"x{i + 1}" for i in range(j.dimension)] + ["weight"])
    denom = lcm(*(p.denominator for _, p in j.points))
    for coords, p in j.points:
        writer.writerow([decimal_cell(c) for c in coords] + [str(int(p * denom))])


# ---------------------------------------------------------------------------
# Report construction and serialization


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _round12(x: float) -> float:
    return float(f"{x:.12g}")


def _digest(j: JointDiscreteDistribution) -> str:
    h = hashlib.sha256()
    for coords, p in j.points:
        h.update(";".join(_frac_str(c) for c in coords).encode())
        h.update(b"|")
        h.update(_frac_str(p).encode())
        h.update(b"\n")
    return h.hexdigest()


@dataclass(frozen=True)
class MarginalSummary:
    column: int
    atom_count: int
    mean: Fraction


@dataclass(frozen=True)
class VarRow:
    alpha: Fraction
    marginal_vars: tuple[Fraction, ...]
    var_of_sum: Fraction
    sum_of_vars: Fraction
    relation: str


@dataclass(frozen=True)
class AnalysisReport:
    """Machine-readable result of a full analysis run."""

    input_digest: str
    marginals_summary: tuple[MarginalSummary, ...]
    var_table: tuple[VarRow, ...]
    comonotonic: bool
    witness: tuple | None
    subadditive_everywhere: bool
    additive_everywhere: bool
    tool_version: str

    def to_json_dict(self) -> dict:
        return {
            "input_digest": self.input_digest,
            "marginals_summary": [
                {"column": m.column, "atom_count": m.atom_count, "mean": _frac_str(m.mean)}
                for m in self.marginals_summary
            ],
            "var_table": [
                {
                    "alpha": _frac_str(r.alpha),
                    "marginal_vars": [_frac_str(v) for v in r.marginal_vars],
                    "var_of_sum": _frac_str(r.var_of_sum),
                    "sum_of_vars": _frac_str(r.sum_of_vars),
                    "relation": r.relation,
                }
                for r in self.var_table
            ],
            "comonotonic": {
                "comonotonic": self.comonotonic,
                "witness": None
                if self.witness is None
                else [[_frac_str(c) for c in point] for point in self.witness],
            },
            "theorem_flags": {
                "subadditive_everywhere": self.subadditive_everywhere,
                "additive_everywhere": self.additive_everywhere,
            },
            "tool_version": self.tool_version,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n"


def run_report(
    j: JointDiscreteDistribution, alphas: Iterable | None = None
) -> AnalysisReport:
    """Full analysis of a joint loss law.

    The VaR table is evaluated at the given levels, or at every critical
    level of the instance by default (breakpoint right endpoints, so the
    rows cover all of (0, 1) exactly). The subadditivity and additivity
    flags always come from the full breakpoint sweep regardless of which
    levels the table shows. Explicit levels must lie strictly inside (0, 1).
    """
    report = subadditivity_report(j)
    ms = j.marginals()
    s = j.sum_distribution()
    if alphas is None:
        rows = [
            VarRow(
                alpha=v.alpha_star,
                marginal_vars=tuple(m._quantile_step(v.alpha_star) for m in ms),
                var_of_sum=v.var_sum,
                sum_of_vars=v.sum_of_vars,
                relation=v.relation,
            )
            for v in report.verdicts
        ]
    else:
        rows = []
        for alpha in alphas:
            a = Fraction(alpha)
            marginal_vars = tuple(m.quantile(a) for m in ms)
            var_of_sum = s.quantile(a)
            sum_of_vars = sum(marginal_vars)
            if var_of_sum < sum_of_vars:
                relation = "<"
            elif var_of_sum == sum_of_vars:
                relation = "="
            else:
                relation = ">"
            rows.append(VarRow(a, marginal_vars, var_of_sum, sum_of_vars, relation))
    verdict = is_comonotonic(j)
    return AnalysisReport(
        input_digest=_digest(j),
        marginals_summary=tuple(
            MarginalSummary(column=i + 1, atom_count=len(m), mean=m.mean())
            for i, m in enumerate(ms)
        ),
        var_table=tuple(rows),
        comonotonic=verdict.comonotonic,
        witness=verdict.witness,
        subadditive_everywhere=report.subadditive_everywhere,
        additive_everywhere=report.additive_everywhere,
        tool_version=__version__,
    )


def _var_table_csv(report: AnalysisReport) -> str:
    """Plot-ready CSV of the VaR table (floats, 12 significant digits)."""
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    ncols = len(report.marginals_summary)
    writer.writerow(
        ["alpha"]
        + [f"var_{i + 1}" for i in range(ncols)]
        + ["var_of_sum", "sum_of_vars", "relation"]
    )
    for r in report.var_table:
        writer.writerow(
            [f"{float(r.alpha):.12g}"]
            + [f"{float(v):.12g}" for v in r.marginal_vars]
            + [f"{float(r.var_of_sum):.12g}", f"{float(r.sum_of_vars):.12g}", r.relation]
        )
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Argument plumbing


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _collect_alphas(args, *, required: bool) -> list[Fraction] | None:
    alphas: list[Fraction] = []
    for text in args.alpha or []:
        alphas.append(Fraction(text))
    if args.alphas_file:
        for line in Path(args.alphas_file).read_text(encoding="utf-8").splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                alphas.append(Fraction(line))
    if not alphas:
        if required:
            raise ValueError("at least one --alpha (or --alphas-file) is required")
        return None
    for a in alphas:
        if not 0 < a < 1:
            raise ValueError(f"alpha must lie strictly inside (0, 1), got {a}")
    return alphas


def _ingest_from_args(args) -> JointDiscreteDistribution:
    return ingest_csv(
        args.csv, has_header=args.header, weight_column=args.weight_column
    )


def _add_io_flags(parser: argparse.ArgumentParser, default_format: str = "json") -> None:
    parser.add_argument(
        "--output",
        choices=("json", "csv"),
        default=default_format,
        help=f"output format (default: {default_format})",
    )
    parser.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")


def _add_alpha_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--alpha",
        action="append",
        metavar="LEVEL",
        help="confidence level in (0, 1); decimals and fractions like 39/40 accepted; repeatable",
    )
    parser.add_argument(
        "--alphas-file",
        metavar="PATH",
        help="file with one confidence level per line (# comments allowed)",
    )


def _add_csv_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--header",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="force header row on or off (default: sniff the first row)",
    )
    parser.add_argument(
        "--weight-column",
        metavar="COL",
        help="weight column as 0-based index or header name (default: header named 'weight')",
    )


# ---------------------------------------------------------------------------
# Subcommands


def cmd_var(args) -> int:
    j = _ingest_from_args(args)
    alphas = _collect_alphas(args, required=True)
    report = run_report(j, alphas)
    if args.output == "csv":
        _emit(_var_table_csv(report), args.out)
    else:
        payload = {
            "input_digest": report.input_digest,
            "var_table": report.to_json_dict()["var_table"],
            "tool_version": report.tool_version,
        }
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_report(args) -> int:
    j = _ingest_from_args(args)
    alphas = _collect_alphas(args, required=False)
    report = run_report(j, alphas)
    if args.output == "csv":
        _emit(_var_table_csv(report), args.out)
    else:
        _emit(report.to_json(), args.out)
    if not (
        report.comonotonic
        == report.subadditive_everywhere
        == report.additive_everywhere
    ):
        print(
            "internal invariant breach: comonotonicity and subadditivity flags disagree",
            file=sys.stderr,
        )
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_couple(args) -> int:
    marginals: list[DiscreteDistribution] = []
    for path in args.csv:
        j = ingest_csv(path, has_header=args.header, weight_column=args.weight_column)
        marginals.extend(j.marginals())
    coupled = comonotonic_coupling(marginals)
    if args.output == "csv":
        import io

        buf = io.StringIO()
        dump_csv(coupled, buf)
        _emit(buf.getvalue(), args.out)
    else:
        payload = {
            "dimension": coupled.dimension,
            "points": [
                {"coords": [_frac_str(c) for c in coords], "prob": _frac_str(p)}
                for coords, p in coupled.points
            ],
            "tool_version": __version__,
        }
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.trials < 1:
        raise ValueError("--trials must be at least 1")
    rows = []
    failures = 0
    for t in range(args.trials):
        meta = random.Random((args.seed << 32) ^ t)
        n = meta.randint(1, args.max_n)
        spec = GeneratorSpec(n=n, max_atoms=args.max_atoms)
        gen_seed = meta.getrandbits(48)
        if args.kind == "mixed":
            kind = "comonotonic" if meta.random() < 0.5 else "coupling"
        else:
            kind = args.kind
        if kind == "comonotonic":
            j = random_comonotonic(gen_seed, spec)
        else:
            j = random_coupling(gen_seed, spec)
        verdict = equivalence_trial(j)
        if not verdict.consistent:
            failures += 1
        rows.append((t, kind, n, verdict))
    if args.output == "csv":
        import io

        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["trial", "kind", "n", "comonotonic", "subadditive_everywhere",
             "additive_everywhere", "consistent"]
        )
        for t, kind, n, v in rows:
            writer.writerow(
                [t, kind, n, v.comonotonic, v.subadditive_everywhere,
                 v.additive_everywhere, v.consistent]
            )
        _emit(buf.getvalue(), args.out)
    else:
        payload = {
            "seed": args.seed,
            "trials": args.trials,
            "comonotonic_instances": sum(1 for *_, v in rows if v.comonotonic),
            "consistent_trials": args.trials - failures,
            "all_consistent": failures == 0,
            "tool_version": __version__,
        }
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    if failures:
        print(
            f"internal invariant breach: equivalence violated in {failures} trial(s)",
            file=sys.stderr,
        )
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_elliptic(args) -> int:
    try:
        raw = json.loads(Path(args.spec).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{args.spec}: invalid JSON ({exc})") from None
    if not isinstance(raw, dict) or "mean" not in raw or "covariance" not in raw:
        raise ValueError(f'{args.spec}: expected an object with "mean" and "covariance"')
    spec = GaussianSpec(mean=raw["mean"], covariance=raw["covariance"])
    alphas = _collect_alphas(args, required=False)
    levels = [float(a) for a in alphas] if alphas else [0.01, 0.05, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99]
    sigmas = spec.sigmas
    table = []
    for level in levels:
        marginal_vars = [
            gaussian_var(float(mu), float(sg), level)
            for mu, sg in zip(spec.mean, sigmas)
        ]
        portfolio = gaussian_portfolio_var(spec, level)
        table.append(
            {
                "alpha": _round12(level),
                "marginal_vars": [_round12(v) for v in marginal_vars],
                "sum_of_marginal_vars": _round12(sum(marginal_vars)),
                "portfolio_var": _round12(portfolio),
                "gap": _round12(gaussian_subadditivity_gap(spec, level)),
            }
        )
    if args.output == "csv":
        import io

        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["alpha", "portfolio_var", "sum_of_marginal_vars", "gap"])
        for row in table:
            writer.writerow(
                [row["alpha"], row["portfolio_var"], row["sum_of_marginal_vars"], row["gap"]]
            )
        _emit(buf.getvalue(), args.out)
    else:
        payload = {
            "dimension": spec.dimension,
            "comonotone_condition": gaussian_comonotone_condition(spec),
            "var_table": table,
            "tool_version": __version__,
        }
        _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="varlab",
        description="Exact VaR subadditivity and comonotonicity analysis "
        "on finite discrete loss distributions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_var = sub.add_parser("var", help="per-column VaR at the given levels")
    p_var.add_argument("csv", help="CSV of loss samples")
    _add_csv_flags(p_var)
    _add_alpha_flags(p_var)
    _add_io_flags(p_var)
    p_var.set_defaults(func=cmd_var)

    p_report = sub.add_parser(
        "report", help="full subadditivity and comonotonicity analysis"
    )
    p_report.add_argument("csv", help="CSV of loss samples")
    _add_csv_flags(p_report)
    _add_alpha_flags(p_report)
    _add_io_flags(p_report)
    p_report.set_defaults(func=cmd_report)

    p_couple = sub.add_parser(
        "couple", help="comonotonic coupling of the marginals of the input columns"
    )
    p_couple.add_argument("csv", nargs="+", help="CSV file(s); every column is one marginal")
    _add_csv_flags(p_couple)
    _add_io_flags(p_couple, default_format="csv")
    p_couple.set_defaults(func=cmd_couple)

    p_sim = sub.add_parser(
        "simulate", help="seeded random equivalence trials (exact, zero tolerance)"
    )
    p_sim.add_argument("--seed", type=int, default=0, help="base seed (default: 0)")
    p_sim.add_argument("--trials", type=int, default=100, help="number of trials (default: 100)")
    p_sim.add_argument("--max-n", type=int, default=4, help="max dimension per trial (default: 4)")
    p_sim.add_argument("--max-atoms", type=int, default=8, help="max atoms per marginal (default: 8)")
    p_sim.add_argument(
        "--kind",
        choices=("comonotonic", "coupling", "mixed"),
        default="mixed",
        help="instance generator to use (default: mixed)",
    )
    _add_io_flags(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_ell = sub.add_parser("elliptic", help="Gaussian closed-form VaR and gap checks")
    p_ell.add_argument("spec", help='JSON file: {"mean": [...], "covariance": [[...], ...]}')
    _add_alpha_flags(p_ell)
    _add_io_flags(p_ell)
    p_ell.set_defaults(func=cmd_elliptic)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, LookupError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
