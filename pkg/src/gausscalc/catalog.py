"""The shipped invariant formulas and their claimed invariances."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .codec import parse_formula_document
from .formulae import Formula, pair
from .gauss import GaussDiagram
from .mortier import certify

NAMES = ("v21", "v22", "S2", "Q2", "V2", "V2star", "M2")

# claim token -> certification conditions it needs
CLAIM_CONDITIONS = {"R": ("R1", "R2", "R3"), "OC": ("OC",), "SC": ("SC",), "SV": ("SV",)}


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    formula: Formula
    claims: tuple[str, ...]

    @property
    def n(self) -> int:
        return self.formula.n

    def unconfirmed_claims(self) -> list[str]:
        granted = certify(self.formula).certified()
        return [c for c in self.claims if not set(CLAIM_CONDITIONS[c]) <= granted]


def catalog_text(name: str) -> str:
    return resources.files("gausscalc").joinpath(f"data/catalog/{name}.f").read_text()


@lru_cache(maxsize=None)
def load_catalog(check: bool = True) -> dict[str, CatalogEntry]:
    """Load all seven entries; with ``check`` every claim must be certified."""
    out = {}
    for name in NAMES:
        doc = parse_formula_document(catalog_text(name))
        if doc.name != name:
            raise CatalogError(f"catalog file {name}.f declares name {doc.name!r}")
        entry = CatalogEntry(name, doc.formula, doc.claims)
        if check:
            bad = entry.unconfirmed_claims()
            if bad:
                raise CatalogError(f"{name}: claimed invariance(s) {', '.join(bad)} not certified")
        out[name] = entry
    return out


def evaluate_catalog(g: GaussDiagram, names=None) -> dict[str, int]:
    """Values of the catalog entries whose strand count matches ``g``.

    Explicitly requested names with the wrong strand count raise.
    """
    cat = load_catalog()
    if names is None:
        return {k: pair(e.formula, g) for k, e in cat.items() if e.n == g.n}
    out = {}
    for k in names:
        if k not in cat:
            raise CatalogError(f"unknown catalog entry {k!r}")
        out[k] = pair(cat[k].formula, g)
    return out
