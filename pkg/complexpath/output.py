from __future__ import annotations

import csv
import logging
import math
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from complexpath.experiments import (
    CompositeOutcome,
    ConvergenceTable,
    PathRow,
    SchrodingerComparison,
    StabilityResult,
)
from complexpath.order_conditions import monomial_label
from complexpath.ssp import SspCurve

logger = logging.getLogger(__name__)


def format_value(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Sequence[Any]], header: Mapping[str, Any]) -> Path:
    """CSV with ``# key=value`` lines on top; floats keep 17 significant digits."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        for key in sorted(header):
            handle.write(f"# {key}={header[key]}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(value) for value in row])
    logger.debug("wrote %s", path)
    return path


def write_gnuplot(path: Path, title: str, body: Sequence[str]) -> Path:
    path = Path(path)
    lines = [
        "set datafile separator ','",
        "set datafile commentschars '#'",
        "set datafile columnheaders",
        "set key outside",
        f"set title '{title}'",
        *body,
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def slug(text: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in text)


def write_convergence(tables: Sequence[ConvergenceTable], out_dir: Path, header: Mapping[str, Any]) -> list[Path]:
    out_dir = Path(out_dir)
    written: list[Path] = []
    plots = []
    for table in tables:
        name = slug(f"converge-{table.problem}-{table.method}.csv")
        written.append(
            write_csv(
                out_dir / name,
                ["dt", "error", "function_evaluations", "status"],
                ([row.dt, row.error, row.function_evaluations, row.status] for row in table.rows),
                {
                    **header,
                    "problem": table.problem,
                    "method": table.method,
                    "norm": table.norm,
                    "slope": format_value(table.slope),
                },
            )
        )
        plots.append(f"'{name}' using 1:2 with linespoints title '{table.label} ({table.slope:.2f})'")
    summary = write_csv(
        out_dir / "converge-summary.csv",
        ["problem", "method", "norm", "expected_order", "slope"],
        ([t.problem, t.method, t.norm, t.expected_order, t.slope] for t in tables),
        header,
    )
    written.append(summary)
    if plots:
        written.append(
            write_gnuplot(
                out_dir / "converge.gp",
                "terminal error against step size",
                ["set logscale xy", "set xlabel 'dt'", "set ylabel 'error'", "plot " + ", \\\n     ".join(plots)],
            )
        )
    return written


def write_stability(result: StabilityResult, out_dir: Path, header: Mapping[str, Any]) -> list[Path]:
    out_dir = Path(out_dir)
    header = {**header, "scaling": result.scaling}
    axis = "z / n" if result.scaling == "per-stage" else "z"
    written: list[Path] = []
    plots = []
    for raster in result.rasters:
        name = slug(f"stability-{raster.name}.csv")
        grid_x, grid_y = np.meshgrid(raster.x, raster.y)
        written.append(
            write_csv(
                out_dir / name,
                ["re_z", "im_z", "stable"],
                zip(grid_x.ravel(), grid_y.ravel(), raster.inside.ravel()),
                {**header, "polynomial": raster.name},
            )
        )
        plots.append(f"'{name}' using 1:2:($3 > 0 ? 1 : 1/0) with dots title '{raster.name}'")
    written.append(
        write_csv(
            out_dir / "stability-extents.csv",
            ["polynomial", "ray", "extent"],
            ([row.name, row.ray, row.extent] for row in result.extents),
            header,
        )
    )
    if plots:
        written.append(
            write_gnuplot(
                out_dir / "stability.gp",
                "regions where |Phi(z)| <= 1",
                [
                    "set size ratio -1",
                    f"set xlabel 'Re {axis}'",
                    f"set ylabel 'Im {axis}'",
                    "plot " + ", \\\n     ".join(plots),
                ],
            )
        )
    return written


def write_paths(rows: Sequence[PathRow], out_dir: Path, header: Mapping[str, Any]) -> list[Path]:
    out_dir = Path(out_dir)
    polyline_rows = []
    summary_rows = []
    for row in rows:
        for index, point in enumerate(row.path.polyline()):
            polyline_rows.append([row.path.name, index, point.real, point.imag])
        weights = " ".join(f"{w.real:.17g}{w.imag:+.17g}i" for w in row.path.weights)
        summary_rows.append(
            [row.path.name, len(row.path.weights), row.path.validity_class.value, weights, row.max_residual]
        )
    polylines = write_csv(out_dir / "paths-polylines.csv", ["path", "index", "re_t", "im_t"], polyline_rows, header)
    summary = write_csv(
        out_dir / "paths.csv", ["path", "steps", "validity_class", "weights", "max_residual"], summary_rows, header
    )
    script = write_gnuplot(
        out_dir / "paths.gp",
        "step paths in the complex time plane",
        [
            "set size ratio -1",
            "set xlabel 'Re t'",
            "set ylabel 'Im t'",
            "plot 'paths-polylines.csv' using 3:4 with linespoints notitle",
        ],
    )
    return [polylines, summary, script]


def write_ssp(curve: SspCurve, out_dir: Path, header: Mapping[str, Any]) -> list[Path]:
    out_dir = Path(out_dir)
    header = {**header, "ssp_variant": curve.variant, "dt_cap": curve.dt_cap}
    data = write_csv(out_dir / "ssp.csv", ["u", *curve.methods], curve.rows(), header)
    plots = [f"'ssp.csv' using 1:{i + 2} with lines title '{name}'" for i, name in enumerate(curve.methods)]
    script = write_gnuplot(
        out_dir / "ssp.gp",
        "largest monotone step for y' = -y exp(-y)",
        ["set logscale x", "set xlabel 'u'", "set ylabel 'dt max'", "plot " + ", \\\n     ".join(plots)],
    )
    return [data, script]


def write_schrodinger(comparison: SchrodingerComparison, out_dir: Path, header: Mapping[str, Any]) -> list[Path]:
    out_dir = Path(out_dir)
    columns = ["dt"]
    for name in comparison.methods:
        columns += [f"error_{name}", f"evaluations_{name}"]
    rows = []
    for row in comparison.rows:
        values: list[Any] = [row.dt]
        for error, evaluations in zip(row.errors, row.evaluations):
            values += [error, evaluations]
        rows.append(values)
    data = write_csv(out_dir / "schrodinger.csv", columns, rows, header)
    plots = [
        f"'schrodinger.csv' using 1:{2 + 2 * i} with linespoints title '{name}'"
        for i, name in enumerate(comparison.methods)
    ]
    script = write_gnuplot(
        out_dir / "schrodinger.gp",
        "infinity-norm error at matched evaluation budgets",
        ["set logscale xy", "set xlabel 'dt'", "set ylabel 'error'", "plot " + ", \\\n     ".join(plots)],
    )
    return [data, script]


def write_composite(outcome: CompositeOutcome, out_dir: Path, header: Mapping[str, Any]) -> list[Path]:
    out_dir = Path(out_dir)
    coefficients = outcome.scheme.composite_coefficients()
    scheme_csv = write_csv(
        out_dir / "composite-coefficients.csv",
        ["name", "re", "im"],
        ([name, value.real, value.imag] for name, value in coefficients.items()),
        {**header, "achieved_order_relaxed": outcome.report.achieved_order_relaxed},
    )
    residuals = write_csv(
        out_dir / "composite-residuals.csv",
        ["h_power", "monomial", "residual_re", "residual_im"],
        ([k, monomial_label(m), r.real, r.imag] for k, m, r in outcome.report.residuals),
        header,
    )
    return [scheme_csv, residuals]
