"""Regression term grammar.

Term strings name design-matrix content:
  base        Lline, Lcolor, Surface, Age, Signature, Dated
  square      <continuous base>^2, e.g. "Lline^2"
  interaction <factor>*<factor> with non-dummy factors, e.g. "Lcolor*Surface"
  dummy block material, city, salesroom, salesyear, painter (one-hot minus a
              reference category; columns named like "city[paris]")
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import SpecError

BASE_CONTINUOUS = ("Lline", "Lcolor", "Surface", "Age")
BASE_BINARY = ("Signature", "Dated")
BASE_TERMS = BASE_CONTINUOUS + BASE_BINARY
DUMMY_BLOCKS = ("material", "city", "salesroom", "salesyear", "painter")

KIND_BASE = "base"
KIND_SQUARE = "square"
KIND_INTERACTION = "interaction"
KIND_DUMMY = "dummy"


@dataclass(frozen=True)
class Term:
    kind: str
    name: str                      # canonical rendering, used as column name
    factors: tuple[str, ...] = ()  # base names the term is computed from

    def __str__(self) -> str:
        return self.name


def parse_term(text: str) -> Term:
    """Parse one term string; raises SpecError with the offending text."""
    s = text.strip()
    if not s:
        raise SpecError("empty term")
    if s in BASE_TERMS:
        return Term(KIND_BASE, s, (s,))
    if s in DUMMY_BLOCKS:
        return Term(KIND_DUMMY, s)
    if s.endswith("^2"):
        base = s[:-2]
        if base in BASE_CONTINUOUS:
            return Term(KIND_SQUARE, s, (base,))
        if base in BASE_BINARY:
            raise SpecError(f"{s!r}: a squared 0/1 attribute duplicates the attribute itself")
        raise SpecError(f"{s!r}: unknown base term {base!r}")
    if "*" in s:
        parts = [p.strip() for p in s.split("*")]
        if len(parts) != 2:
            raise SpecError(f"{s!r}: interactions join exactly two factors")
        factors = []
        for p in parts:
            f = parse_term(p)
            if f.kind == KIND_DUMMY:
                raise SpecError(f"{s!r}: dummy blocks cannot be interaction factors")
            if f.kind == KIND_INTERACTION:
                raise SpecError(f"{s!r}: nested interactions are not supported")
            factors.append(f)
        if factors[0].name == factors[1].name:
            raise SpecError(f"{s!r}: use {parts[0]}^2 instead of a self-interaction")
        name = f"{factors[0].name}*{factors[1].name}"
        return Term(KIND_INTERACTION, name, (factors[0].name, factors[1].name))
    raise SpecError(f"unknown term {s!r}")


def check_no_duplicates(terms: list[Term]) -> None:
    """Reject duplicate terms, treating A*B and B*A as the same column."""
    seen: set = set()
    for t in terms:
        key = frozenset(t.factors) if t.kind == KIND_INTERACTION else t.name
        if key in seen:
            raise SpecError(f"duplicate term {t.name!r}")
        seen.add(key)
