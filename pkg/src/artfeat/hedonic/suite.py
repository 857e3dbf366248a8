"""Multi-specification drivers and coefficient-table rendering."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ..errors import ArtfeatError
from ..corpus.records import Corpus
from .ols import STAR_LEGEND, FitResult, fit_model
from .spec import ModelSpec
from .terms import KIND_DUMMY

ATTRIBUTE_TERMS = ("Surface", "Surface^2", "Age", "Signature", "Dated")
CONTROL_BLOCKS = ("material", "city", "salesroom", "salesyear")


@dataclass(frozen=True)
class SuiteEntry:
    """One suite column: a fit, or the error that prevented it."""

    name: str
    spec: ModelSpec
    fit: Optional[FitResult] = None
    error: Optional[str] = None


def run_specification_suite(
    corpus: Corpus, suite: Sequence[tuple[str, ModelSpec]]
) -> list[SuiteEntry]:
    """Fit every named spec; a failing spec is reported, not fatal."""
    entries = []
    for name, spec in suite:
        try:
            entries.append(SuiteEntry(name, spec, fit=fit_model(spec, corpus)))
        except ArtfeatError as exc:
            entries.append(SuiteEntry(name, spec, error=str(exc)))
    return entries


def benchmark_specs() -> list[tuple[str, ModelSpec]]:
    """The six-column benchmark ladder: attributes only; effort measures
    only; both; quadratic effort alone; quadratic effort with controls; and
    the quadratic ladder without the color square."""
    effort = ("Lline", "Lcolor")
    quad = ("Lline", "Lline^2", "Lcolor", "Lcolor^2")
    controls = ATTRIBUTE_TERMS + CONTROL_BLOCKS
    layout = [
        ("(1)", controls),
        ("(2)", effort),
        ("(3)", effort + controls),
        ("(4)", quad),
        ("(5)", quad + controls),
        ("(6)", ("Lline", "Lline^2", "Lcolor") + controls),
    ]
    return [(name, ModelSpec(regressors=terms)) for name, terms in layout]


def period_specs() -> list[tuple[str, ModelSpec]]:
    """Effort-only fits on each of the eight career-period subsamples."""
    return [
        (f"period {p}", ModelSpec(regressors=("Lline", "Lcolor"), subsample={"period": p}))
        for p in range(1, 9)
    ]


def cross_effect_specs() -> list[tuple[str, ModelSpec]]:
    """Effort-by-attribute interaction ladder over five columns."""
    base_front = ("Lline", "Lcolor")
    base_back = ("Age", "Signature", "Dated") + CONTROL_BLOCKS
    layout = [
        ("(1)", base_front + ("Surface",) + base_back),
        ("(2)", base_front + ("Lline*Lcolor", "Surface") + base_back),
        ("(3)", base_front + ("Surface", "Lline*Surface") + base_back),
        ("(4)", base_front + ("Surface", "Lcolor*Surface") + base_back),
        ("(5)", base_front + ("Lline*Lcolor", "Surface", "Lline*Surface", "Lcolor*Surface") + base_back),
    ]
    return [(name, ModelSpec(regressors=terms)) for name, terms in layout]


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _is_dummy_column(name: str) -> bool:
    return "[" in name


def _row_order(entries: Sequence[SuiteEntry]) -> tuple[list[str], list[str]]:
    """(scalar coefficient rows in first-seen order with const last,
    dummy blocks in first-seen order)."""
    scalars: list[str] = []
    blocks: list[str] = []
    for entry in entries:
        for term in entry.spec.terms:
            if term.kind == KIND_DUMMY:
                if term.name not in blocks:
                    blocks.append(term.name)
            elif term.name not in scalars:
                scalars.append(term.name)
    scalars.append("const")
    return scalars, blocks


def render_tsv(entries: Sequence[SuiteEntry]) -> str:
    """Long-format machine table, one row per (spec, coefficient), floats at
    full precision. Failed specs appear as trailing #-comment lines."""
    header = (
        "spec\tterm\tcoefficient\trobust_se\tt_stat\tp_value\tstars\t"
        "n\tk\tr_squared\tadj_r_squared\tcondition_number"
    )
    lines = [header]
    for entry in entries:
        fit = entry.fit
        if fit is None:
            continue
        for name in fit.names:
            lines.append(
                f"{entry.name}\t{name}\t{fit.coefficients[name]!r}\t{fit.robust_se[name]!r}\t"
                f"{fit.t_stats[name]!r}\t{fit.p_values[name]!r}\t{fit.stars[name]}\t"
                f"{fit.n}\t{fit.k}\t{fit.r_squared!r}\t{fit.adj_r_squared!r}\t"
                f"{fit.condition_number!r}"
            )
    for entry in entries:
        if entry.error is not None:
            lines.append(f"# {entry.name}: {entry.error}")
        elif entry.fit is not None:
            for warning in entry.fit.warnings:
                lines.append(f"# {entry.name}: {warning}")
    return "\n".join(lines) + "\n"


def _cell(fit: FitResult, name: str) -> str:
    if name not in fit.coefficients:
        return ""
    return f"{fit.coefficients[name]:.4g}{fit.stars[name]} ({fit.robust_se[name]:.4g})"


def render_markdown(entries: Sequence[SuiteEntry]) -> str:
    """Column-per-spec table with "coefficient stars (se)" cells, dummy
    blocks collapsed to control rows, and fit statistics at the bottom."""
    scalars, blocks = _row_order(entries)
    headers = ["term"] + [e.name for e in entries]

    def row(label: str, cells: list[str]) -> list[str]:
        return [label] + cells

    body: list[list[str]] = []
    for name in scalars:
        cells = [_cell(e.fit, name) if e.fit else "" for e in entries]
        if any(cells):
            body.append(row(name, cells))
    for block in blocks:
        cells = [
            "yes" if e.fit and any(t.kind == KIND_DUMMY and t.name == block for t in e.spec.terms)
            else ""
            for e in entries
        ]
        body.append(row(f"{block} dummies", cells))
    body.append(row("n", [str(e.fit.n) if e.fit else "" for e in entries]))
    body.append(row("R-squared", [f"{e.fit.r_squared:.4g}" if e.fit else "" for e in entries]))
    body.append(row("adj R-squared", [f"{e.fit.adj_r_squared:.4g}" if e.fit else "" for e in entries]))

    widths = [max(len(r[i]) for r in [headers] + body) for i in range(len(headers))]
    def fmt(cells: list[str]) -> str:
        return "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"

    lines = [fmt(headers), "|" + "|".join("-" * (w + 2) for w in widths) + "|"]
    lines += [fmt(r) for r in body]
    lines.append("")
    lines.append(f"Robust standard errors in parentheses; {STAR_LEGEND}.")
    for entry in entries:
        if entry.error is not None:
            lines.append(f"{entry.name}: not fitted ({entry.error})")
    return "\n".join(lines) + "\n"
