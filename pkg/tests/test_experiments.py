from __future__ import annotations

import math

import numpy as np
import pytest

from complexpath.config import COMPOSITE_FIXTURE_NAME, ConfigError
from complexpath.errors import ArgumentError, CheckFailure
from complexpath.experiments import (
    ConvergenceRow,
    ConvergenceTable,
    Ladder,
    build_config,
    check_convergence,
    check_paths,
    check_schrodinger,
    check_ssp,
    check_stability,
    config_hash,
    error_norm,
    estimate_order,
    fit_step,
    load_config,
    run_converge,
    run_header,
    run_paths,
    run_schrodinger_compare,
    run_solve_composite,
    run_stability,
)
from complexpath.output import format_value, write_convergence, write_csv, write_paths, write_stability
from complexpath.ssp import SspCurve, SspStatus
from complexpath.storage import FixtureStore


def test_estimate_order_is_exact_for_a_power_law():
    dts = [0.1, 0.05, 0.025, 0.0125]
    assert estimate_order([3.0 * dt**2 for dt in dts], dts) == pytest.approx(2.0, abs=1e-12)


def test_estimate_order_skips_unusable_pairs():
    dts = [0.1, 0.05, 0.025, 0.0125]
    errors = [math.nan, 0.05**3, 0.025**3, 0.0125**3]
    assert estimate_order(errors, dts) == pytest.approx(3.0, abs=1e-12)


def test_estimate_order_needs_three_pairs():
    with pytest.raises(ArgumentError):
        estimate_order([1e-2, math.inf, 1e-4], [0.1, 0.05, 0.025])
    with pytest.raises(ArgumentError):
        estimate_order([1e-2], [0.1, 0.05])


def test_table_fit_leaves_out_failed_rows():
    table = ConvergenceTable("dahlquist", "euler-1", "inf", 1)
    table.rows = [ConvergenceRow(1.0, math.nan, 0, "blow-up")] + [
        ConvergenceRow(dt, 0.5 * dt, 10) for dt in (0.5, 0.25, 0.125)
    ]
    assert table.fit() == pytest.approx(1.0)
    assert table.label == "dahlquist/euler-1"


def test_error_norms():
    computed = np.array([1.0, 2.0, 4.0])
    reference = np.array([1.0, 2.0, 2.0])
    assert error_norm(computed, reference, "inf") == 2.0
    assert error_norm(computed, reference, "2") == pytest.approx(math.sqrt(4.0 / 3.0))
    assert error_norm(computed, reference, "relative") == pytest.approx(1.0)
    with pytest.raises(ArgumentError):
        error_norm(computed, np.zeros(3), "relative")


def test_fit_step_divides_the_span():
    assert fit_step(3.0, 0.7) == pytest.approx(0.75)
    assert fit_step(1.0, 5.0) == 1.0


def test_ladder_steps_and_validation():
    assert Ladder(base=1.0, ratio=0.5, count=3).steps() == [1.0, 0.5, 0.25]
    with pytest.raises(ValueError):
        Ladder(count=2)
    with pytest.raises(ValueError):
        Ladder(ratio=1.0)


def test_layering_puts_flags_over_the_file_over_defaults():
    config = build_config("converge", {"methods": ["euler-1"], "seed": 3}, {"seed": 7, "problems": None})
    assert config.methods == ["euler-1"]
    assert config.problems == ["dahlquist"]
    assert config.seed == 7


def test_schrodinger_defaults():
    config = build_config("schrodinger")
    assert config.fair
    assert config.ladder.steps()[0] == 1e-3
    assert config.methods == ["ralston3", "complex-3-linear"]


def test_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        build_config("converge", {"unknown": 1})
    with pytest.raises(ConfigError):
        build_config("converge", {"kind": "ssp"})
    with pytest.raises(ConfigError):
        build_config("stability", {"window": "1,2"})
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(broken, "converge")
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json", "converge")


def test_config_file_round_trip(tmp_path):
    config = build_config("converge", {"problems": ["square"], "ladder": {"base": 0.1, "count": 4}})
    document = tmp_path / "converge.json"
    document.write_text(config.model_dump_json(), encoding="utf-8")
    again = load_config(document, "converge")
    assert again == config
    assert config_hash(again) == config_hash(config)
    assert len(config_hash(config)) == 16
    assert config_hash(build_config("converge", {"seed": 1})) != config_hash(build_config("converge"))


def test_run_header_fields():
    header = run_header(build_config("paths", {"seed": 4}))
    assert set(header) == {"version", "config_hash", "seed"}
    assert header["seed"] == "4"


def test_two_step_path_converges_at_second_order():
    tables = run_converge(build_config("converge"))
    assert len(tables) == 1
    assert tables[0].slope == pytest.approx(2.0, abs=0.15)
    check_convergence(tables, build_config("converge"))


def test_projected_nonlinear_path_converges_at_third_order_on_squared_decay():
    config = build_config(
        "converge",
        {"problems": ["square"], "methods": ["complex-3-nonlinear"], "ladder": {"base": 0.1, "count": 5}},
    )
    tables = run_converge(config)
    assert tables[0].slope == pytest.approx(3.0, abs=0.25)


def test_fair_mode_matches_evaluation_counts():
    config = build_config("converge", {"methods": ["euler-1", "complex-2-linear"], "fair": True})
    tables = {table.method: table for table in run_converge(config)}
    for euler_row, path_row in zip(tables["euler-1"].rows, tables["complex-2-linear"].rows):
        assert euler_row.function_evaluations == path_row.function_evaluations


def test_blow_up_rows_are_kept_and_flagged():
    config = build_config(
        "converge",
        {
            "problem_params": {"dahlquist": {"lam": -30.0, "t_end": 10.0}},
            "methods": ["euler-1"],
            "ladder": {"base": 1.0, "count": 8},
        },
    )
    table = run_converge(config)[0]
    assert table.rows[0].status == "blow-up"
    assert math.isnan(table.rows[0].error)
    assert all(row.status == "ok" for row in table.rows[-3:])


def test_convergence_check_reports_misses():
    tables = run_converge(build_config("converge"))
    with pytest.raises(CheckFailure):
        check_convergence(tables, build_config("converge", {"expect": {"dahlquist/complex-2-linear": 3.0}}))


def test_stability_extents_and_check():
    config = build_config(
        "stability",
        {"optimized": [], "resolution": [41, 31], "expect": {"euler-1": 2.0, "complex-3-linear": 2.5127}},
    )
    result = run_stability(config)
    assert len(result.rasters) == 3
    assert result.extent("euler-1") == pytest.approx(2.0, abs=1e-8)
    check_stability(result, config)
    with pytest.raises(ArgumentError):
        result.extent("euler-1", "1+1i")


def test_cubic_family_members_join_the_stability_run():
    config = build_config("stability", {"methods": [], "optimized": [], "cubic_k": ["0.1134"], "rays": ["-1-2i"]})
    result = run_stability(config)
    assert result.extents[0].name == "cubic-0.1134"
    assert result.extents[0].extent > 0


def test_paths_run_lists_every_ordering():
    rows = run_paths(build_config("paths", {"path_steps": [3]}))
    assert len(rows) == 6
    check_paths(rows, build_config("paths"))
    polyline = rows[0].path.polyline()
    assert polyline[0] == 0
    assert polyline[-1] == pytest.approx(1.0)


def test_paths_run_verifies_library_entries():
    rows = run_paths(build_config("paths", {"path_steps": [1], "methods": ["complex-3-nonlinear"]}))
    assert [row.path.name for row in rows][-1] == "complex-3-nonlinear"
    assert rows[-1].max_residual < 1e-8


def test_schrodinger_comparison_at_matched_budgets():
    config = build_config("schrodinger", {"ladder": {"base": 1e-3, "ratio": 0.5, "count": 3}})
    comparison = run_schrodinger_compare(config)
    assert comparison.methods == ("ralston3", "complex-3-linear")
    assert len(comparison.rows) == 3
    check_schrodinger(comparison, config)


def test_schrodinger_needs_two_methods():
    with pytest.raises(ArgumentError):
        run_schrodinger_compare(build_config("schrodinger", {"methods": ["rk4"]}))


def test_format_value():
    assert format_value(True) == "1"
    assert format_value(math.nan) == "nan"
    assert format_value(-math.inf) == "-inf"
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value(np.int64(3)) == "3"


def test_csv_header_lines_come_first(tmp_path):
    path = write_csv(tmp_path / "out.csv", ["a", "b"], [[1, 0.5]], {"seed": 0, "config_hash": "abc"})
    assert path.read_text().splitlines() == ["# config_hash=abc", "# seed=0", "a,b", "1,0.5"]


def test_convergence_files(tmp_path):
    config = build_config("converge")
    written = write_convergence(run_converge(config), tmp_path, run_header(config))
    names = {path.name for path in written}
    assert names == {"converge-dahlquist-complex-2-linear.csv", "converge-summary.csv", "converge.gp"}
    table = (tmp_path / "converge-dahlquist-complex-2-linear.csv").read_text().splitlines()
    assert table[0] == f"# config_hash={config_hash(config)}"
    assert "dt,error,function_evaluations,status" in table
    assert "set datafile columnheaders" in (tmp_path / "converge.gp").read_text()


def test_stability_and_path_files(tmp_path):
    config = build_config("stability", {"methods": ["euler-1"], "optimized": [], "resolution": [5, 4]})
    written = write_stability(run_stability(config), tmp_path, run_header(config))
    raster = (tmp_path / "stability-euler-1.csv").read_text().splitlines()
    assert raster[-21] == "re_z,im_z,stable"
    assert len(written) == 3
    rows = run_paths(build_config("paths", {"path_steps": [2]}))
    write_paths(rows, tmp_path, {})
    assert ",linear-only," in (tmp_path / "paths.csv").read_text()


def _ssp_curve(ours, theirs):
    u = np.array([1.0, 3.3, 4.0, 5.0])
    methods = ("midpoint2", "ssprk2", "complex-2-linear")
    dt_max = {"midpoint2": np.array(theirs), "ssprk2": np.array(theirs), "complex-2-linear": np.array(ours)}
    status = {name: (SspStatus.BOUNDED,) * 4 for name in methods}
    return SspCurve(u, methods, dt_max, status)


def test_ssp_check_only_looks_at_large_states():
    config = build_config("ssp")
    check_ssp(_ssp_curve([5.7, 22.1, 42.0, 98.0], [3.5, 28.0, 38.0, 78.0]), config)
    with pytest.raises(CheckFailure):
        check_ssp(_ssp_curve([5.7, 22.1, 37.0, 98.0], [3.5, 28.0, 38.0, 78.0]), config)
    with pytest.raises(CheckFailure):
        check_ssp(_ssp_curve([5.7, 22.1, 38.0, 78.0], [3.5, 28.0, 38.0, 78.0]), config)


@pytest.fixture(scope="module")
def reference_store(tmp_path_factory):
    return FixtureStore(tmp_path_factory.mktemp("fixtures"))


def _table(problem, method, base, count, store=None, **params):
    config = build_config(
        "converge",
        {
            "problems": [problem],
            "methods": [method],
            "ladder": {"base": base, "ratio": 0.5, "count": count},
            "problem_params": {problem: params},
        },
    )
    return run_converge(config, store)[0]


@pytest.mark.parametrize("problem", ["dahlquist", "shm"])
@pytest.mark.parametrize("method,order", [("euler-1", 1), ("complex-2-linear", 2), ("complex-3-linear", 3)])
def test_linear_paths_converge_at_their_step_count(problem, method, order):
    assert _table(problem, method, 0.1, 7).slope == pytest.approx(order, abs=0.15)


@pytest.mark.parametrize("problem", ["square", "exp", "nlsin"])
def test_projected_nonlinear_path_is_third_order_on_scalar_problems(problem):
    assert _table(problem, "complex-3-nonlinear", 0.1, 7).slope == pytest.approx(3.0, abs=0.25)


def test_three_step_linear_path_on_the_wave_equation():
    # 0.04 sits inside the imaginary-axis limit sqrt(3) / 34 of the 70-mode operator
    assert _table("wave", "complex-3-linear", 0.04, 7).slope == pytest.approx(3.0, abs=0.2)


def test_projected_nonlinear_path_on_burgers():
    # errors reach 1e-13 at the fifth rung; the diffusive limit caps the coarsest step near 0.02
    assert _table("burgers", "complex-3-nonlinear", 0.02, 5).slope == pytest.approx(3.0, abs=0.25)


@pytest.mark.slow
def test_projected_nonlinear_path_on_van_der_pol(reference_store):
    table = _table("vdp", "complex-3-nonlinear", 0.1, 7, reference_store)
    assert table.slope == pytest.approx(3.0, abs=0.25)


@pytest.mark.slow
def test_implicit_midpoint_pair_on_the_fine_heat_grid():
    table = _table("heat", "implicit-midpoint-2", 0.1, 4)
    assert all(row.status == "ok" for row in table.rows)
    assert table.slope == pytest.approx(4.0, abs=0.25)


@pytest.mark.slow
def test_backward_euler_path_on_the_fine_heat_grid():
    table = _table("heat", "backward-euler-3", 0.025, 5)
    assert all(row.status == "ok" for row in table.rows)
    assert table.slope == pytest.approx(3.0, abs=0.2)


@pytest.mark.slow
def test_implicit_midpoint_pair_on_stiff_van_der_pol(reference_store):
    # three rungs from 0.1 keep every error above 5e-12; dt 0.2 is still pre-asymptotic
    table = _table("vdp", "implicit-midpoint-2", 0.1, 3, reference_store, mu=10.0)
    assert min(row.error for row in table.rows) > 1e-12
    assert table.slope == pytest.approx(4.0, abs=0.25)


@pytest.mark.slow
@pytest.mark.parametrize("problem", ["square", "exp"])
def test_composite_scheme_is_fifth_order_on_autonomous_problems(reference_store, problem):
    if reference_store.load_scheme(COMPOSITE_FIXTURE_NAME) is None:
        run_solve_composite(build_config("solve-composite"), reference_store)
    table = _table(problem, COMPOSITE_FIXTURE_NAME, 0.125, 4, reference_store)
    assert table.rows[0].function_evaluations == 5 * 8
    assert table.slope == pytest.approx(5.0, abs=0.25)
