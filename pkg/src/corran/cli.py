"""Command-line front end.

``corran analyze`` reads a table, runs the analysis and writes the requested
artifacts into an output directory. Exit codes: 0 success, 1 input or
validation error, 2 numeric failure, 64 bad flags.
"""

from __future__ import annotations

import argparse
import os
import shutil
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .association import extract, to_csv
from .ca import Normalization, fit
from .errors import BadDims, InputError, NumericError, UnknownNormalization
from .render import biplot, coordinates_csv, emit_report, emit_svg, residuals_csv, summary_csv
from .residuals import residuals
from .table import parse_long_csv, parse_matrix_csv, validate

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERIC = 2
EXIT_USAGE = 64


@dataclass
class RunConfig:
    input_path: str
    output_dir: str
    layout: str = "matrix"
    row_field: str | None = None
    col_field: str | None = None
    value_field: str | None = None
    normalization: str = "symmetric"
    dims: tuple[int, int] = (1, 2)
    emit_report: bool = True
    emit_svg: bool = True
    emit_csv: bool = True
    display_dims: int | None = None


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="corran", description="Correspondence analysis of a two-way table.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("analyze", help="analyze a CSV table and write results")
    p.add_argument("--input", required=True, help="CSV file to read")
    p.add_argument("--layout", choices=("long", "matrix"), default="matrix")
    p.add_argument("--row", dest="row_field", help="row label field (long layout)")
    p.add_argument("--col", dest="col_field", help="column label field (long layout)")
    p.add_argument("--value", dest="value_field", help="value field (long layout)")
    p.add_argument("--normalization", default="symmetric",
                   choices=[n.value for n in Normalization])
    p.add_argument("--dims", nargs=2, type=int, default=(1, 2), metavar=("X", "Y"),
                   help="biplot axes, 1-based (default: 1 2)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--display-dims", type=int, default=None, metavar="N",
                   help="show only the first N dimensions in the report summary")
    p.add_argument("--no-report", action="store_true")
    p.add_argument("--no-svg", action="store_true")
    p.add_argument("--no-csv", action="store_true")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    dims = tuple(args.dims)
    if dims[0] == dims[1] or min(dims) < 1:
        raise UsageError(f"--dims must name two distinct axes >= 1, got {dims[0]} {dims[1]}")
    if args.layout == "long" and not (args.row_field and args.col_field and args.value_field):
        raise UsageError("--layout long requires --row, --col and --value")
    if args.display_dims is not None and args.display_dims < 1:
        raise UsageError("--display-dims must be >= 1")
    if not args.input:
        raise UsageError("--input must not be empty")
    return RunConfig(
        input_path=args.input,
        output_dir=args.out,
        layout=args.layout,
        row_field=args.row_field,
        col_field=args.col_field,
        value_field=args.value_field,
        normalization=args.normalization,
        dims=dims,
        emit_report=not args.no_report,
        emit_svg=not args.no_svg,
        emit_csv=not args.no_csv,
        display_dims=args.display_dims,
    )


def render_outputs(config: RunConfig) -> dict[str, str]:
    """Run the pipeline and return ``{file name: content}``."""
    try:
        text = Path(config.input_path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {config.input_path}: {exc.strerror or exc}") from None
    except UnicodeDecodeError:
        raise InputError(f"{config.input_path} is not valid UTF-8") from None
    if config.layout == "long":
        table = parse_long_csv(text, config.row_field, config.col_field, config.value_field)
    else:
        table = parse_matrix_csv(text)
    validate(table)

    model = fit(table)
    res = residuals(table)
    assoc = extract(res)

    files = {}
    if config.emit_report:
        files["report.md"] = emit_report(model, res, assoc, display_dims=config.display_dims)
    if config.emit_svg:
        files["biplot.svg"] = emit_svg(biplot(model, config.normalization, config.dims))
    if config.emit_csv:
        files["coordinates.csv"] = coordinates_csv(model, config.normalization)
        files["residuals.csv"] = residuals_csv(res)
        files["summary.csv"] = summary_csv(model)
        files["associations.csv"] = to_csv(assoc)
    return files


def _write_atomically(files: dict[str, str], output_dir: str) -> None:
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(prefix=".corran-", dir=out))
    try:
        for name, content in files.items():
            (tmp / name).write_text(content, encoding="utf-8", newline="")
        for name in files:
            os.replace(tmp / name, out / name)
    finally:
        shutil.rmtree(tmp, ignore_errors=True)


def run(config: RunConfig) -> int:
    try:
        files = render_outputs(config)
        _write_atomically(files, config.output_dir)
    except (BadDims, UnknownNormalization) as exc:
        print(f"error: {exc}" + (" (use --no-svg for tables with a single dimension)"
                                 if isinstance(exc, BadDims) and exc.n_axes < 2 else ""),
              file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: cannot write to {config.output_dir}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except UsageError as exc:
        print(f"corran: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
