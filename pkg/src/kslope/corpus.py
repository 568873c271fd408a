"""Builders for the worked examples: exact setup documents with known rings."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import IncompleteAmbientData, KslopeError
from .exact import format_rational, parse_rational
from .fibration import BundleData
from .geometry import Setup, load_setup


def _q(x) -> str:
    return format_rational(parse_rational(x))


def _cls(*coords) -> list[str]:
    return [_q(c) for c in coords]


def _mono(*names, value) -> dict:
    return {"monomial": list(names), "value": _q(value)}


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    params: dict
    document: dict

    def setup(self) -> Setup:
        return load_setup(self.document)


def pp2_document() -> dict:
    return {
        "name": "pp2",
        "dimension": 2,
        "basis": ["H"],
        "intersection": [_mono("H", "H", value=1)],
        "classes": {"omega": _cls(1), "canonical": _cls(-3), "twist": _cls(0), "reference": _cls(1)},
        "divisors": [
            {"name": "line", "components": [{"name": "line", "class": _cls(1), "multiplicity": 1}]},
            {"name": "conic", "components": [{"name": "conic", "class": _cls(2), "multiplicity": 1}]},
        ],
        "curve_cone": [{"name": "H", "class": _cls(1)}],
    }


def pp2() -> Setup:
    """The projective plane with a line as the Kähler class."""
    return load_setup(pp2_document())


def product_of_curves_document(g: int) -> dict:
    """C x C for a curve of genus ``g``, basis (f1, f2, delta).

    Omega defaults to the s = 1 member of the degenerating family built on
    H = f1 + f2, namely 2(f1 + f2) + delta/(g - 1).
    """
    g = int(g)
    if g < 2:
        raise KslopeError("product_of_curves needs genus g >= 2 (the diagonal is not exceptional)")
    r = Fraction(1, g - 1)
    return {
        "name": f"product-of-curves-g{g}",
        "dimension": 2,
        "basis": ["f1", "f2", "delta"],
        "intersection": [
            _mono("f1", "f2", value=1),
            _mono("f1", "delta", value=1),
            _mono("f2", "delta", value=1),
            _mono("delta", "delta", value=2 - 2 * g),
        ],
        "classes": {
            "omega": _cls(2, 2, r),
            "canonical": _cls(2 * g - 2, 2 * g - 2, 0),
            "twist": _cls(0, 0, 0),
            "reference": _cls(1, 1, 0),
        },
        "divisors": [
            {
                "name": "delta",
                "components": [{"name": "delta", "class": _cls(0, 0, 1), "multiplicity": 1}],
            }
        ],
        "curve_cone": [
            {"name": "f1", "class": _cls(1, 0, 0)},
            {"name": "f2", "class": _cls(0, 1, 0)},
            {"name": "delta", "class": _cls(0, 0, 1)},
        ],
    }


def product_of_curves(g: int = 2) -> Setup:
    return load_setup(product_of_curves_document(g))


def ah_template_document(g: int, d: int, ambient: dict) -> dict:
    """Surface template around a divisor Gamma with Gamma^2 = d(2 - 2g).

    ``ambient`` must give ``H2`` (H^2), ``H.Gamma``, ``K.H`` and either
    ``K.Gamma`` or the arithmetic genus ``p_a`` of Gamma (K.Gamma then
    follows from adjunction).
    """
    g, d = int(g), int(d)
    if g < 2 or d < 2:
        raise KslopeError("ah_template needs g >= 2 and d >= 2")
    for key in ("H2", "H.Gamma", "K.H"):
        if key not in ambient:
            raise IncompleteAmbientData(f"ambient data is missing {key!r}")
    h2 = parse_rational(ambient["H2"])
    hg = parse_rational(ambient["H.Gamma"])
    kh = parse_rational(ambient["K.H"])
    gg = Fraction(d * (2 - 2 * g))
    if "K.Gamma" in ambient:
        kg = parse_rational(ambient["K.Gamma"])
    elif "p_a" in ambient:
        kg = 2 * parse_rational(ambient["p_a"]) - 2 - gg
    else:
        raise IncompleteAmbientData("ambient data needs 'K.Gamma' or 'p_a'")
    det = h2 * gg - hg * hg
    if det == 0:
        raise IncompleteAmbientData("H and Gamma are linearly dependent in the declared form")
    # K = a H + b Gamma with K.H = kh, K.Gamma = kg
    a = (kh * gg - kg * hg) / det
    b = (h2 * kg - hg * kh) / det
    r = hg / -gg
    return {
        "name": f"ah-template-g{g}-d{d}",
        "dimension": 2,
        "basis": ["H", "Gamma"],
        "intersection": [
            _mono("H", "H", value=h2),
            _mono("H", "Gamma", value=hg),
            _mono("Gamma", "Gamma", value=gg),
        ],
        "classes": {
            "omega": _cls(2, r),
            "canonical": _cls(a, b),
            "twist": _cls(0, 0),
            "reference": _cls(1, 0),
        },
        "divisors": [
            {"name": "Gamma", "components": [{"name": "Gamma", "class": _cls(0, 1), "multiplicity": 1}]}
        ],
        "curve_cone": [{"name": "Gamma", "class": _cls(0, 1)}],
    }


def ah_template(g: int, d: int, ambient: dict) -> Setup:
    return load_setup(ah_template_document(g, d, ambient))


def voisin_bundle_example() -> BundleData:
    """O(-E_q) + O on the blown-up torus product; only rank and degrees."""
    return BundleData.split([-1, 0])


def voisin_bundle_document() -> dict:
    return voisin_bundle_example().to_json()


def _ah_default(g=2, d=2, **ambient):
    ambient.setdefault("H2", 1)
    ambient.setdefault("H.Gamma", 1)
    ambient.setdefault("K.H", 1)
    if "K.Gamma" not in ambient:
        ambient.setdefault("p_a", d * (int(g) - 1) + 1)
    return ah_template_document(int(g), int(d), ambient)


BUILDERS: dict[str, Callable[..., dict]] = {
    "pp2": lambda: pp2_document(),
    "product-of-curves": lambda g=2: product_of_curves_document(int(g)),
    "ah-template": _ah_default,
    "voisin-bundle": lambda: voisin_bundle_document(),
}


def build(name: str, **params) -> CorpusEntry:
    if name not in BUILDERS:
        raise KslopeError(f"unknown corpus entry {name!r}; known: {sorted(BUILDERS)}")
    try:
        doc = BUILDERS[name](**params)
    except TypeError as exc:
        raise KslopeError(f"bad parameters for {name}: {exc}") from None
    return CorpusEntry(name, dict(params), doc)


def all_setups() -> list[Setup]:
    """Every setup-valued corpus entry, with default parameters."""
    return [
        pp2(),
        product_of_curves(2),
        product_of_curves(3),
        load_setup(_ah_default()),
    ]
