"""Specification-suite drivers and table rendering."""
import numpy as np
import pytest

from artfeat.corpus import PlantSpec, generate_synthetic
from artfeat.hedonic import (
    ModelSpec,
    SuiteEntry,
    benchmark_specs,
    cross_effect_specs,
    period_specs,
    render_markdown,
    render_tsv,
    run_specification_suite,
)

PLANT = PlantSpec({
    "const": 6.0, "Lline": 0.5, "Lcolor": 0.4, "Surface": 0.05,
    "Age": 0.01, "Signature": 0.2, "Dated": 0.1,
})


@pytest.fixture(scope="module")
def corpus():
    return generate_synthetic(400, PLANT, 0.3, seed=13)


def test_benchmark_ladder_layout():
    specs = benchmark_specs()
    assert [name for name, _ in specs] == ["(1)", "(2)", "(3)", "(4)", "(5)", "(6)"]
    by_name = dict(specs)
    assert by_name["(2)"].regressors == ("Lline", "Lcolor")
    assert by_name["(4)"].regressors == ("Lline", "Lline^2", "Lcolor", "Lcolor^2")
    assert "Lcolor^2" not in by_name["(6)"].regressors
    assert "Lline^2" in by_name["(6)"].regressors
    for name in ("(1)", "(3)", "(5)", "(6)"):
        for control in ("Surface", "Surface^2", "Age", "Signature", "Dated",
                        "material", "city", "salesroom", "salesyear"):
            assert control in by_name[name].regressors, (name, control)
    for name in ("(2)", "(4)"):
        assert "Surface" not in by_name[name].regressors


def test_period_ladder_layout():
    specs = period_specs()
    assert [name for name, _ in specs] == [f"period {p}" for p in range(1, 9)]
    assert all(spec.regressors == ("Lline", "Lcolor") for _, spec in specs)
    assert [spec.subsample["period"] for _, spec in specs] == list(range(1, 9))


def test_cross_effect_ladder_layout():
    specs = cross_effect_specs()
    assert [name for name, _ in specs] == ["(1)", "(2)", "(3)", "(4)", "(5)"]
    by_name = dict(specs)
    assert "Lline*Lcolor" in by_name["(2)"].regressors
    assert "Lline*Surface" in by_name["(3)"].regressors
    assert "Lcolor*Surface" in by_name["(4)"].regressors
    for term in ("Lline*Lcolor", "Lline*Surface", "Lcolor*Surface"):
        assert term in by_name["(5)"].regressors
    for _, spec in specs:
        assert "Surface^2" not in spec.regressors
        for control in ("Age", "Signature", "Dated", "material", "city",
                        "salesroom", "salesyear"):
            assert control in spec.regressors


def test_suite_runs_all_benchmark_columns(corpus):
    entries = run_specification_suite(corpus, benchmark_specs())
    assert all(e.fit is not None for e in entries)
    # every column fits the same observations
    assert len({e.fit.n for e in entries}) == 1
    effort_only = entries[1].fit
    assert effort_only.coefficients["Lline"] == pytest.approx(0.5, abs=0.1)
    assert effort_only.coefficients["Lcolor"] == pytest.approx(0.4, abs=0.1)
    full = entries[2].fit
    assert full.r_squared >= effort_only.r_squared - 1e-12


def test_suite_isolates_failures(corpus):
    suite = [
        ("good", ModelSpec(regressors=("Lline",))),
        ("empty", ModelSpec(regressors=("Lline",), subsample={"painter": "qi"})),
        ("also good", ModelSpec(regressors=("Lcolor",))),
    ]
    entries = run_specification_suite(corpus, suite)
    assert [e.name for e in entries] == ["good", "empty", "also good"]
    assert entries[0].fit is not None and entries[0].error is None
    assert entries[1].fit is None and "empty subsample" in entries[1].error
    assert entries[2].fit is not None


def test_period_suite_covers_subsamples(corpus):
    entries = run_specification_suite(corpus, period_specs())
    fitted = [e for e in entries if e.fit is not None]
    assert sum(e.fit.n for e in fitted) == sum(
        1 for r in corpus.records  # every record lands in exactly one period
    )
    for e in entries:
        if e.fit is None:
            assert "empty subsample" in e.error or "more observations" in e.error


def test_render_tsv_layout(corpus):
    entries = run_specification_suite(corpus, [
        ("m", ModelSpec(regressors=("Lline", "Lcolor"))),
        ("empty", ModelSpec(regressors=("Lline",), subsample={"painter": "qi"})),
    ])
    text = render_tsv(entries)
    lines = text.splitlines()
    assert lines[0].split("\t") == [
        "spec", "term", "coefficient", "robust_se", "t_stat", "p_value",
        "stars", "n", "k", "r_squared", "adj_r_squared", "condition_number",
    ]
    data = [l for l in lines[1:] if not l.startswith("#")]
    assert [l.split("\t")[1] for l in data] == ["const", "Lline", "Lcolor"]
    fit = entries[0].fit
    row = dict(zip(lines[0].split("\t"), data[1].split("\t")))
    # full-precision round trip through repr
    assert float(row["coefficient"]) == fit.coefficients["Lline"]
    assert float(row["robust_se"]) == fit.robust_se["Lline"]
    assert float(row["condition_number"]) == fit.condition_number
    assert int(row["n"]) == fit.n
    assert any(l.startswith("# empty: ") for l in lines)


def test_render_markdown_layout(corpus):
    entries = run_specification_suite(corpus, benchmark_specs())
    text = render_markdown(entries)
    lines = text.splitlines()
    assert lines[0].split("|")[1].strip() == "term"
    assert set(lines[1]) <= {"|", "-"}
    labels = [l.split("|")[1].strip() for l in lines if l.startswith("|")]
    assert labels.index("Lline") < labels.index("const")
    assert "material dummies" in labels
    assert "n" in labels and "R-squared" in labels and "adj R-squared" in labels
    assert "Robust standard errors in parentheses; *** p<0.01, ** p<0.05, * p<0.1." in text
    # effort-only column (2) leaves the Surface cell blank
    surface_row = next(l for l in lines if l.split("|")[1].strip() == "Surface")
    cells = [c.strip() for c in surface_row.split("|")[2:-1]]
    assert cells[1] == "" and cells[0] != ""
    # cells carry coefficient, stars, and the SE in parentheses
    lline_row = next(l for l in lines if l.split("|")[1].strip() == "Lline")
    assert "(" in lline_row and ")" in lline_row


def test_render_markdown_reports_failures(corpus):
    entries = run_specification_suite(corpus, [
        ("ok", ModelSpec(regressors=("Lline",))),
        ("nope", ModelSpec(regressors=("Lline",), subsample={"painter": "qi"})),
    ])
    text = render_markdown(entries)
    assert "nope: not fitted (" in text
    header = text.splitlines()[0]
    assert "ok" in header and "nope" in header


def test_renderers_are_deterministic(corpus):
    entries = run_specification_suite(corpus, cross_effect_specs())
    assert render_tsv(entries) == render_tsv(entries)
    assert render_markdown(entries) == render_markdown(entries)
