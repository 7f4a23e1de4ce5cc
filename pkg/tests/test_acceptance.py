"""Exit criteria for the package, one test (or test group) per criterion.

A PASS/FAIL/SKIP line per criterion is printed in the terminal summary.

Criterion 6 needs the 2016 leading-causes-of-death extract (51 locations x 10
causes). Point ``CORRAN_NCHS2016_CSV`` at it, or place it at
``tests/data/nchs2016.csv``. Accepted files: the catalog download (fields
``Year``, ``Cause Name``, ``State``, ``Deaths``) or any CSV with the last three.
Without the file that criterion is skipped.
"""

import csv
import io
import os
import time
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest

from corran.association import extract, extract_cells
from corran.ca import fit, inertia_summary, masses, proportion_matrix
from corran.cli import main
from corran.render import biplot, emit_svg
from corran.residuals import chi_square_upper_tail, residuals
from corran.svd import svd
from corran.table import parse_long_csv, parse_matrix_csv

from conftest import DATA, GOLDEN, labeled, random_tables
from oracles import brute_singular_values, chi2_upper_tail_quadrature, jacobi_eigenvalues


def criterion(n, title):
    return pytest.mark.criterion(n, title)


# 1 ---------------------------------------------------------------------------

@criterion(1, "perfect-association oracle [[10,0],[0,10]]")
def test_perfect_association_oracle(perfect):
    start = time.perf_counter()
    model = fit(perfect)
    res = residuals(perfect)
    elapsed = time.perf_counter() - start

    assert abs(res.statistic - 20) <= 1e-12
    assert res.df == 1
    np.testing.assert_allclose(res.signed_cells, [[5, -5], [-5, 5]], rtol=0, atol=1e-12)
    assert abs(model.total_inertia - 1) <= 1e-12
    assert model.n_axes == 1
    assert abs(model.singular_values[0] - 1) <= 1e-10
    np.testing.assert_allclose(model.row_distances, 1, rtol=0, atol=1e-12)
    np.testing.assert_allclose(model.col_distances, 1, rtol=0, atol=1e-12)
    assert elapsed < 1.0


# 2 ---------------------------------------------------------------------------

def _outer_tables():
    rng = np.random.default_rng(2024)
    for _ in range(20):
        a, b = rng.integers(2, 9, size=2)
        s = rng.uniform(0.1, 50, size=a)
        t = rng.uniform(0.1, 50, size=b)
        yield labeled(np.outer(s, t))


@criterion(2, "independence oracle on 20 outer-product tables")
@pytest.mark.parametrize("table", list(_outer_tables()), ids=lambda t: "x".join(map(str, t.shape)))
def test_independence_oracle(table):
    res = residuals(table)
    assert res.statistic <= 1e-9 * table.grand_total
    assert fit(table).total_inertia <= 1e-12


# 3 ---------------------------------------------------------------------------

@criterion(3, "cross-module identities on 100 random tables")
def test_cross_module_identities():
    start = time.perf_counter()
    for table in random_tables(seed=3, n=100, max_dim=8, low=1, high=100):
        model = fit(table)
        res = residuals(table)
        assert table.grand_total * model.total_inertia == pytest.approx(res.statistic, rel=1e-9)

        f2 = np.sum(model.row_principal ** 2, axis=1)
        np.testing.assert_allclose(model.row_distances ** 2, f2, rtol=1e-9, atol=0)
        g2 = np.sum(model.col_principal ** 2, axis=1)
        np.testing.assert_allclose(model.col_distances ** 2, g2, rtol=1e-9, atol=0)

        p = proportion_matrix(table)
        r, c = masses(p)
        rebuilt = np.outer(r, c) * (1 + (model.row_std * model.singular_values) @ model.col_std.T)
        np.testing.assert_allclose(rebuilt, p, rtol=0, atol=1e-9)

        centered = (p - np.outer(r, c)) / np.sqrt(np.outer(r, c))
        oracle = brute_singular_values(centered)[: model.n_axes]
        np.testing.assert_allclose(model.singular_values, oracle, rtol=0, atol=1e-9)
    assert time.perf_counter() - start < 10.0


# 4 ---------------------------------------------------------------------------

@criterion(4, "SVD kernel accuracy on 100 random matrices up to 51x10")
def test_svd_kernel():
    rng = np.random.default_rng(4)
    for i in range(100):
        a = int(rng.integers(1, 52))
        b = int(rng.integers(1, 11))
        m = rng.normal(size=(a, b)) * 10 ** rng.uniform(-3, 3)
        if i % 4 == 0:
            m = m.T
        res = svd(m)
        q = min(m.shape)
        assert np.abs(m - res.reconstruct()).max() <= 1e-10 * (1 + np.abs(m).max())
        assert np.abs(res.left.T @ res.left - np.eye(q)).max() <= 1e-10
        assert np.abs(res.right.T @ res.right - np.eye(q)).max() <= 1e-10
        small = m.T @ m if m.shape[0] >= m.shape[1] else m @ m.T
        oracle = np.sqrt(np.clip(jacobi_eigenvalues(small), 0, None))
        np.testing.assert_allclose(res.singular_values, oracle, rtol=1e-9)


# 5 ---------------------------------------------------------------------------

@criterion(5, "p-value engine against adaptive quadrature")
@pytest.mark.parametrize("x", [0.1, 1, 3.841, 20, 100])
@pytest.mark.parametrize("df", [1, 5, 30, 450])
def test_p_value_grid(x, df):
    assert abs(chi_square_upper_tail(x, df) - chi2_upper_tail_quadrature(x, df)) <= 1e-6


@criterion(5, "p-value engine against adaptive quadrature")
def test_p_value_critical():
    assert abs(chi_square_upper_tail(3.841, 1) - 0.0500) <= 5e-4


# 6 ---------------------------------------------------------------------------

# reference singular values for axes 1-8 of the 2016 table
PUBLISHED_SINGULAR_VALUES = [0.078, 0.051, 0.038, 0.035, 0.029, 0.026, 0.024, 0.019]
PUBLISHED_CELLS = {
    ("Alabama", "Unintentional injuries"): (-33.55, 0.05),
    ("Florida", "Stroke"): (213.6, 0.05),
    ("New York", "Heart disease"): (1718.6, 0.05),
    ("Alaska", "Suicide"): (205.56, 0.05),
}
EXCLUDED = {"All causes", "United States"}


def _nchs_path():
    env = os.environ.get("CORRAN_NCHS2016_CSV")
    path = Path(env) if env else DATA / "nchs2016.csv"
    return path if path.is_file() else None


def load_nchs2016(path):
    text = path.read_text(encoding="utf-8-sig")
    reader = csv.DictReader(io.StringIO(text, newline=""))
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["State", "Cause Name", "Deaths"])
    for rec in reader:
        if "Year" in rec and rec["Year"].strip() != "2016":
            continue
        if rec["State"].strip() in EXCLUDED or rec["Cause Name"].strip() in EXCLUDED:
            continue
        w.writerow([rec["State"], rec["Cause Name"], rec["Deaths"].replace(",", "")])
    return parse_long_csv(out.getvalue(), "State", "Cause Name", "Deaths")


@criterion(6, "published 2016 results (needs external dataset)")
def test_published_results():
    path = _nchs_path()
    if path is None:
        pytest.skip("2016 leading-causes-of-death dataset not available; set CORRAN_NCHS2016_CSV")
    table = load_nchs2016(path)
    assert table.shape == (51, 10)
    model = fit(table)
    res = residuals(table)

    assert abs(res.statistic - 28696.584) <= 0.5
    for got, want in zip(model.singular_values, PUBLISHED_SINGULAR_VALUES):
        assert abs(got - want) <= 0.0005
    summary = inertia_summary(model)
    assert abs(summary[0].proportion - 0.429) <= 0.001
    assert abs(summary[1].proportion - 0.187) <= 0.001
    assert abs(summary[1].cumulative - 0.616) <= 0.001

    for (row, col), (value, tol) in PUBLISHED_CELLS.items():
        i, j = table.row_labels.index(row), table.col_labels.index(col)
        assert abs(res.signed_cells[i, j] - value) <= tol

    published = parse_matrix_csv((DATA / "nchs2016_signed_chisq.csv").read_text(encoding="utf-8"))
    expected = {r.row_label: (r.strongest, r.weakest) for r in
                extract_cells(published.row_labels, published.col_labels, published.counts).rows}
    for rec in extract(res).rows:
        assert (rec.strongest, rec.weakest) == expected[rec.row_label]


# 7 ---------------------------------------------------------------------------

@criterion(7, "two CLI runs give byte-identical output directories")
@pytest.mark.parametrize("argv", [
    ["--input", str(DATA / "small_long.csv"), "--layout", "long",
     "--row", "region", "--col", "category", "--value", "count"],
    ["--input", str(DATA / "perfect_2x2.csv"), "--no-svg"],
    ["--input", str(DATA / "uniform_2x2.csv"), "--no-svg", "--normalization", "principal"],
])
def test_determinism(tmp_path, argv):
    dirs = [tmp_path / "run1", tmp_path / "run2"]
    for d in dirs:
        assert main(["analyze", *argv, "--out", str(d)]) == 0
    names = sorted(p.name for p in dirs[0].iterdir())
    assert names == sorted(p.name for p in dirs[1].iterdir())
    assert names
    for name in names:
        assert (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes()


# 8 ---------------------------------------------------------------------------

@criterion(8, "golden reports and well-formed SVG")
@pytest.mark.parametrize("name", ["perfect_2x2", "uniform_2x2"])
def test_golden_reports(tmp_path, name):
    assert main(["analyze", "--input", str(DATA / f"{name}.csv"), "--no-svg", "--no-csv",
                 "--out", str(tmp_path)]) == 0
    assert (tmp_path / "report.md").read_bytes() == (GOLDEN / f"{name}_report.md").read_bytes()


@criterion(8, "golden reports and well-formed SVG")
def test_svg_structure(tmp_path):
    table = parse_long_csv((DATA / "small_long.csv").read_text(), "region", "category", "count")
    root = ET.fromstring(emit_svg(biplot(fit(table))))
    ns = "{http://www.w3.org/2000/svg}"
    assert sum(1 for _ in root.iter(ns + "circle")) == 4
    assert sum(1 for _ in root.iter(ns + "path")) == 3
    assert sum(1 for el in root.iter(ns + "text") if el.get("class") == "label") == 7
