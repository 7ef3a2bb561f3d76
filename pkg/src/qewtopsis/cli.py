"""
Command-line interface.

    qewtopsis evaluate   --indicators data.csv --method all --out results/
    qewtopsis sweep-xi   --supply supply.csv --orders orders.csv --out results/
    qewtopsis robustness --supply supply.csv --orders orders.csv --seed 7 --out results/

Exit status: 0 success, 1 input error, 2 computation error. Errors are
reported as one ``error: <kind>: <message>`` line on stderr.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import report
from .dataset import (
    IndicatorMatrix,
    ParseError,
    RawSupplyData,
    SupplyCsvSchema,
    attach_orders,
    derive_indicators,
    parse_indicator_csv,
    parse_supply_csv,
)
from .gra import GreyConfig, xi_sweep
from .pipeline import (
    MethodFailure,
    METHODS,
    ModelConfig,
    compare_methods,
    reference_comparison,
    robustness_sweep,
    run_ew_topsis,
    run_method,
)
from .transforms import forward_normalize

logger = logging.getLogger("qewtopsis")

EXIT_OK, EXIT_INPUT, EXIT_COMPUTE = 0, 1, 2


class InputError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    supply: Path | None
    orders: Path | None
    indicators: Path | None
    method: str
    grey: GreyConfig
    model: ModelConfig
    out: Path
    formats: tuple[str, ...]
    seed: int
    delimiter: str = ","
    id_column: str = "id"
    subset_sizes: tuple[int, ...] | None = None
    iterations: int = 10
    reference_report: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "CliConfig":
        if (args.indicators is None) == (args.supply is None):
            raise InputError("give exactly one of --supply or --indicators")
        if args.orders is not None and args.supply is None:
            raise InputError("--orders requires --supply")
        try:
            grey = GreyConfig(
                sweep_start=args.xi_start, sweep_end=args.xi_end, sweep_step=args.xi_step
            )
            model = ModelConfig(
                normalize_entropy=args.normalize_entropy,
                q_weight_mode=args.q_weight_mode,
                q_min=args.q_min,
                q_max=args.q_max,
            )
        except ValueError as exc:
            raise InputError(str(exc)) from None
        formats = ("csv", "json") if args.format == "both" else (args.format,)
        sizes = None
        if getattr(args, "subset_sizes", None):
            try:
                sizes = tuple(int(s) for s in args.subset_sizes.split(","))
            except ValueError:
                raise InputError(f"bad --subset-sizes {args.subset_sizes!r}") from None
        return cls(
            supply=args.supply,
            orders=args.orders,
            indicators=args.indicators,
            method=getattr(args, "method", "qew"),
            grey=grey,
            model=model,
            out=args.out,
            formats=formats,
            seed=args.seed,
            delimiter=args.delimiter,
            id_column=args.id_column,
            subset_sizes=sizes,
            iterations=getattr(args, "iterations", 10),
            reference_report=getattr(args, "reference_report", False),
        )


# -- input / output -------------------------------------------------------------


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None


def load_raw(config: CliConfig) -> RawSupplyData:
    if config.supply is None:
        raise InputError("this command needs raw supply data (--supply/--orders)")
    schema = SupplyCsvSchema(id_column=config.id_column, delimiter=config.delimiter)
    data = parse_supply_csv(_read(config.supply), schema)
    if config.orders is not None:
        data = attach_orders(data, _read(config.orders), schema)
    return data


def load_matrix(config: CliConfig) -> IndicatorMatrix:
    if config.indicators is not None:
        return parse_indicator_csv(_read(config.indicators), config.delimiter)
    data = load_raw(config)
    if not data.has_orders:
        raise InputError("deriving indicators needs order quantities (--orders)")
    try:
        return derive_indicators(data)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def write_outputs(out: Path, files: dict[str, str]) -> None:
    """Write every file to a temp name first, then rename them all into place."""
    out.mkdir(parents=True, exist_ok=True)
    staged = []
    try:
        for name, text in files.items():
            fd, tmp = tempfile.mkstemp(dir=out, prefix=f".{name}.", suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            staged.append((tmp, out / name))
    except BaseException:
        for tmp, _ in staged:
            os.unlink(tmp)
        raise
    for tmp, final in staged:
        os.replace(tmp, final)


def _table_files(stem: str, table, formats) -> dict[str, str]:
    files = {}
    if "csv" in formats:
        files[f"{stem}.csv"] = report.score_csv(table)
    if "json" in formats:
        files[f"{stem}.json"] = report.score_json(table)
    return files


# -- commands -------------------------------------------------------------------


def cmd_evaluate(config: CliConfig) -> dict[str, str]:
    matrix = load_matrix(config)
    files: dict[str, str] = {}
    if config.method == "all":
        results = compare_methods(matrix, config.grey, config.model)
        summary: dict = {"method": "all", "indicators": list(matrix.names), "methods": {}, "errors": {}}
        for r in results:
            if isinstance(r, MethodFailure):
                summary["errors"][r.method] = r.error
                print(f"warning: method {r.method} failed: {r.error}", file=sys.stderr)
                continue
            files.update(_table_files(f"scores_{r.method}", r.score_table, config.formats))
            summary["methods"][r.method] = report.weights_summary(r, matrix.names)
            if r.method == "qew" and config.reference_report:
                files["reference_comparison.json"] = report.dumps(reference_comparison(r))
        files["weights.json"] = report.dumps(summary)
        return files

    result = run_method(matrix, config.method, config.grey, config.model)
    files.update(_table_files("scores", result.score_table, config.formats))
    if result.baseline is not None:
        files.update(_table_files("scores_ew", result.baseline.score_table, config.formats))
    files["weights.json"] = report.dumps(report.weights_summary(result, matrix.names))
    if config.reference_report and result.method == "qew":
        files["reference_comparison.json"] = report.dumps(reference_comparison(result))
    return files


def cmd_sweep_xi(config: CliConfig) -> dict[str, str]:
    matrix = load_matrix(config)
    baseline = run_ew_topsis(matrix)
    reference = np.clip(baseline.score_table.closeness, 0.0, 1.0)
    sweep = xi_sweep(reference, forward_normalize(matrix), baseline.weight_vector, config.grey)
    print(f"selected xi: {sweep.best_xi!r}")
    return {
        "xi_sweep.csv": report.sweep_csv(sweep, matrix.names),
        "xi_sweep.json": report.dumps(report.sweep_summary(sweep, baseline.weight_vector, matrix.names)),
    }


def default_subset_sizes(m: int, iterations: int) -> tuple[int, ...]:
    """Evenly spaced supplier counts from about m/10 up to m."""
    lo = max(2, m // 10)
    return tuple(int(round(v)) for v in np.linspace(lo, m, max(iterations, 2)))


def cmd_robustness(config: CliConfig) -> dict[str, str]:
    data = load_raw(config)
    if not data.has_orders:
        raise InputError("deriving indicators needs order quantities (--orders)")
    sizes = config.subset_sizes or default_subset_sizes(len(data), config.iterations)
    for k in sizes:
        if not 2 <= k <= len(data):
            raise InputError(f"subset size {k} outside [2, {len(data)}]")
    result = robustness_sweep(data, sizes, config.seed, config.grey, config.model)
    return {
        "robustness.csv": report.robustness_csv(result),
        "summary.json": report.dumps(report.robustness_summary(result, config.seed)),
    }


COMMANDS = {"evaluate": cmd_evaluate, "sweep-xi": cmd_sweep_xi, "robustness": cmd_robustness}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("input")
    src.add_argument("--supply", type=Path, help="supply CSV: id column plus one column per period")
    src.add_argument("--orders", type=Path, help="order CSV with the same ids and periods")
    src.add_argument("--indicators", type=Path, help="pre-derived indicator CSV with a direction row")
    src.add_argument("--delimiter", default=",")
    src.add_argument("--id-column", default="id")
    g = common.add_argument_group("model")
    g.add_argument("--xi-start", type=float, default=0.001)
    g.add_argument("--xi-end", type=float, default=0.005)
    g.add_argument("--xi-step", type=float, default=0.0001)
    g.add_argument("--q-min", type=float, default=1e-6)
    g.add_argument("--q-max", type=float, default=50.0)
    g.add_argument("--normalize-entropy", action=argparse.BooleanOptionalAction, default=True)
    g.add_argument("--q-weight-mode", choices=("entropy", "utility"), default="entropy")
    o = common.add_argument_group("output")
    o.add_argument("--out", type=Path, default=Path("."))
    o.add_argument("--format", choices=("csv", "json", "both"), default="csv",
                   help="table format; summaries are always JSON")
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="qewtopsis", description="Supplier evaluation with entropy-weight and q-entropy-weight TOPSIS."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    ev = sub.add_parser("evaluate", parents=[common], help="score suppliers")
    ev.add_argument("--method", choices=(*METHODS, "all"), default="qew")
    ev.add_argument("--reference-report", action="store_true",
                    help="also write computed-vs-published figures (qew/all)")
    sub.add_parser("sweep-xi", parents=[common], help="grey distinguishing-coefficient sweep")
    rb = sub.add_parser("robustness", parents=[common], help="weight stability over supplier subsets")
    rb.add_argument("--subset-sizes", help="comma-separated supplier counts, one per iteration")
    rb.add_argument("--iterations", type=int, default=10)
    return parser


def _fail(kind: str, exc: BaseException, code: int) -> int:
    message = " ".join(str(exc).split()) or type(exc).__name__
    print(f"error: {kind}: {message}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = CliConfig.from_args(args)
        files = COMMANDS[args.command](config)
    except (InputError, ParseError) as exc:
        return _fail("input", exc, EXIT_INPUT)
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return _fail("compute", exc, EXIT_COMPUTE)
    try:
        write_outputs(config.out, files)
    except OSError as exc:
        return _fail("output", exc, EXIT_INPUT)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
