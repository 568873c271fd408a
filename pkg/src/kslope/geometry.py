"""Finite-dimensional surrogate of a compact Kähler manifold.

A :class:`Setup` carries a basis of (1,1)-classes, a symmetric degree-n
intersection form on it, the classes Omega, K_M and the twist, a list of
effective divisors and (for surfaces) a declared cone of curves. Only the
declared span is modelled; every positivity statement is relative to it.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    ArityMismatch,
    ConeViolation,
    DimensionMismatch,
    DivisorMismatch,
    NonPositiveVolume,
    SetupError,
)
from .exact import format_rational, parse_rational

ClassVector = tuple  # tuple[Fraction, ...], one coordinate per basis element


def vec(coords) -> ClassVector:
    return tuple(parse_rational(c) for c in coords)


def add(u: ClassVector, v: ClassVector) -> ClassVector:
    return tuple(a + b for a, b in zip(u, v))


def scale(c, u: ClassVector) -> ClassVector:
    c = parse_rational(c)
    return tuple(c * a for a in u)


def lincomb(terms) -> ClassVector:
    """Sum of ``c * u`` over ``(c, u)`` pairs."""
    terms = list(terms)
    out = tuple(Fraction(0) for _ in terms[0][1])
    for c, u in terms:
        out = add(out, scale(c, u))
    return out


def is_zero(u: ClassVector) -> bool:
    return all(a == 0 for a in u)


@dataclass(frozen=True, eq=True)
class IntersectionForm:
    """Totally symmetric n-linear form, keyed by sorted index tuples."""

    n: int
    size: int
    values: Mapping[tuple[int, ...], Fraction] = field(hash=False)

    def value(self, monomial: Sequence[int]) -> Fraction:
        return self.values.get(tuple(sorted(monomial)), Fraction(0))

    def evaluate(self, classes: Sequence[ClassVector]) -> Fraction:
        if len(classes) != self.n:
            raise ArityMismatch(f"intersection needs {self.n} classes, got {len(classes)}")
        supports = [[(i, c) for i, c in enumerate(v) if c != 0] for v in classes]
        total = Fraction(0)
        for combo in itertools.product(*supports):
            val = self.values.get(tuple(sorted(i for i, _ in combo)))
            if val:
                prod = val
                for _, c in combo:
                    prod *= c
                total += prod
        return total


@dataclass(frozen=True)
class Component:
    name: str
    cls: ClassVector
    multiplicity: int


@dataclass(frozen=True)
class Divisor:
    """Effective divisor ``sum m_i D_i``."""

    name: str
    total_class: ClassVector
    components: tuple[Component, ...]


@dataclass(frozen=True)
class Curve:
    name: str
    cls: ClassVector


@dataclass(frozen=True)
class Setup:
    name: str
    n: int
    basis: tuple[str, ...]
    form: IntersectionForm
    omega: ClassVector
    canonical: ClassVector
    twist: ClassVector
    divisors: tuple[Divisor, ...] = ()
    curve_cone: tuple[Curve, ...] | None = None
    named_classes: Mapping[str, ClassVector] = field(default_factory=dict, hash=False)
    sections: Mapping[str, object] = field(default_factory=dict, hash=False)

    @property
    def c1(self) -> ClassVector:
        """First Chern class, stored as ``-K_M``."""
        return scale(-1, self.canonical)

    @property
    def zero(self) -> ClassVector:
        return tuple(Fraction(0) for _ in self.basis)

    def divisor(self, name: str) -> Divisor:
        for d in self.divisors:
            if d.name == name:
                return d
        raise SetupError(f"unknown divisor {name!r}; known: {[d.name for d in self.divisors]}")

    def basis_vector(self, name: str) -> ClassVector:
        i = self.basis.index(name)
        return tuple(Fraction(int(j == i)) for j in range(len(self.basis)))

    def with_omega(self, omega: ClassVector) -> Setup:
        return replace(self, omega=vec(omega))

    def with_twist(self, twist: ClassVector) -> Setup:
        return replace(self, twist=vec(twist))


def intersect(setup: Setup | IntersectionForm, classes: Sequence[ClassVector]) -> Fraction:
    """Multilinear evaluation of the intersection form on ``n`` classes."""
    form = setup.form if isinstance(setup, Setup) else setup
    return form.evaluate([vec(c) for c in classes])


def power_pairing(setup: Setup, a: ClassVector, b: ClassVector, k: int, head=None) -> Fraction:
    """``head . a^(m-k) . b^k`` where m = n (or n-1 when ``head`` is given)."""
    m = setup.n - (1 if head is not None else 0)
    classes = ([head] if head is not None else []) + [a] * (m - k) + [b] * k
    return intersect(setup, classes)


def self_power(setup: Setup, a: ClassVector) -> Fraction:
    return intersect(setup, [a] * setup.n)


def pairs_positively_with_cone(setup: Setup, cls: ClassVector, strict: bool = True) -> bool:
    """Volume and declared-curve positivity of ``cls``."""
    vol = self_power(setup, cls)
    ok = vol > 0 if strict else vol >= 0
    for curve in setup.curve_cone or ():
        d = intersect(setup, [cls, curve.cls])
        ok = ok and (d > 0 if strict else d >= 0)
    return ok


def check_kahler(setup: Setup, cls: ClassVector, label: str = "class") -> None:
    vol = self_power(setup, cls)
    if vol <= 0:
        raise NonPositiveVolume(f"{label}^{setup.n} = {vol} is not positive")
    for curve in setup.curve_cone or ():
        d = intersect(setup, [cls, curve.cls])
        if d <= 0:
            raise ConeViolation(f"{label} . {curve.name} = {d} is not positive")


# -- document format ---------------------------------------------------------


def _coords(raw, size: int, what: str) -> ClassVector:
    if not isinstance(raw, (list, tuple)):
        raise SetupError(f"{what}: expected a coordinate list")
    if len(raw) != size:
        raise DimensionMismatch(f"{what}: {len(raw)} coordinates for a basis of size {size}")
    return vec(raw)


def _coords_json(u: ClassVector) -> list[str]:
    return [format_rational(c) for c in u]


def _normalise_section(value):
    """Canonical JSON-compatible form of an auxiliary section."""
    if isinstance(value, dict):
        return {k: _normalise_section(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_normalise_section(v) for v in value]
    if isinstance(value, Fraction):
        return format_rational(value)
    return value


RESERVED_CLASSES = ("omega", "canonical", "twist")


def setup_from_document(doc: Mapping) -> Setup:
    """Validate a setup document and build a :class:`Setup`."""
    try:
        name = str(doc["name"])
        n = int(doc["dimension"])
        basis = tuple(str(b) for b in doc["basis"])
        classes = doc["classes"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SetupError(f"missing or malformed field: {exc}") from None
    if n < 1:
        raise DimensionMismatch("dimension must be positive")
    if len(set(basis)) != len(basis) or not basis:
        raise SetupError("basis names must be nonempty and distinct")
    index = {b: i for i, b in enumerate(basis)}
    size = len(basis)

    values: dict[tuple[int, ...], Fraction] = {}
    for entry in doc.get("intersection", []):
        mono = entry["monomial"]
        if len(mono) != n:
            raise DimensionMismatch(f"monomial {mono} has degree {len(mono)}, expected {n}")
        try:
            key = tuple(sorted(index[m] for m in mono))
        except KeyError as exc:
            raise SetupError(f"monomial uses unknown basis element {exc}") from None
        val = parse_rational(entry["value"])
        if key in values and values[key] != val:
            raise SetupError(f"conflicting values for monomial {mono}")
        if val != 0:
            values[key] = val
    form = IntersectionForm(n, size, values)

    omega = _coords(classes.get("omega"), size, "omega")
    canonical = _coords(classes.get("canonical"), size, "canonical")
    twist = _coords(classes["twist"], size, "twist") if "twist" in classes else tuple(
        Fraction(0) for _ in basis
    )
    named = {
        k: _coords(v, size, k) for k, v in sorted(classes.items()) if k not in RESERVED_CLASSES
    }

    divisors = []
    for d in doc.get("divisors", []):
        dname = str(d["name"])
        comps = []
        for j, c in enumerate(d.get("components", [])):
            m = c.get("multiplicity", 1)
            if isinstance(m, bool) or int(m) != m or int(m) < 1:
                raise SetupError(f"divisor {dname}: multiplicity must be a positive integer")
            comps.append(
                Component(str(c.get("name", f"{dname}_{j}")), _coords(c["class"], size, dname), int(m))
            )
        if not comps:
            raise SetupError(f"divisor {dname} has no components")
        total = lincomb((c.multiplicity, c.cls) for c in comps)
        if "total_class" in d:
            declared = _coords(d["total_class"], size, dname)
            if declared != total:
                raise DivisorMismatch(
                    f"divisor {dname}: total_class differs from the sum of its components"
                )
        divisors.append(Divisor(dname, total, tuple(comps)))
    if len({d.name for d in divisors}) != len(divisors):
        raise SetupError("divisor names must be distinct")

    cone = None
    if doc.get("curve_cone") is not None:
        if n != 2:
            raise DimensionMismatch("a curve cone is only meaningful on surfaces")
        cone = tuple(
            Curve(str(c["name"]), _coords(c["class"], size, str(c["name"])))
            for c in doc["curve_cone"]
        )

    sections = {
        k: _normalise_section(doc[k]) for k in ("fibration", "bundle") if doc.get(k) is not None
    }
    setup = Setup(name, n, basis, form, omega, canonical, twist, tuple(divisors), cone, named, sections)
    check_kahler(setup, omega, "omega")
    return setup


def setup_to_document(setup: Setup) -> dict:
    inter = [
        {"monomial": [setup.basis[i] for i in key], "value": format_rational(val)}
        for key, val in sorted(setup.form.values.items())
        if val != 0
    ]
    classes = {
        "omega": _coords_json(setup.omega),
        "canonical": _coords_json(setup.canonical),
        "twist": _coords_json(setup.twist),
    }
    for k in sorted(setup.named_classes):
        classes[k] = _coords_json(setup.named_classes[k])
    doc = {
        "name": setup.name,
        "dimension": setup.n,
        "basis": list(setup.basis),
        "intersection": inter,
        "classes": classes,
        "divisors": [
            {
                "name": d.name,
                "total_class": _coords_json(d.total_class),
                "components": [
                    {"name": c.name, "class": _coords_json(c.cls), "multiplicity": c.multiplicity}
                    for c in d.components
                ],
            }
            for d in setup.divisors
        ],
        "curve_cone": None
        if setup.curve_cone is None
        else [{"name": c.name, "class": _coords_json(c.cls)} for c in setup.curve_cone],
    }
    for k in ("fibration", "bundle"):
        if k in setup.sections:
            doc[k] = setup.sections[k]
    return doc


def dumps(obj) -> str:
    """Byte-stable JSON rendering used for every emitted document."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def loads(text: str):
    # JSON floats become exact decimals, never binary floats
    return json.loads(text, parse_float=Fraction)


def serialize(setup: Setup) -> str:
    return dumps(setup_to_document(setup))


def load_setup(source) -> Setup:
    """Load a setup from a path, a JSON string or an already parsed mapping."""
    if isinstance(source, Mapping):
        return setup_from_document(source)
    text = str(source)
    if not text.lstrip().startswith("{"):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    try:
        doc = loads(text)
    except json.JSONDecodeError as exc:
        raise SetupError(f"setup document does not parse: {exc}") from None
    return setup_from_document(doc)


def setup_digest(setup: Setup) -> str:
    return "sha256:" + hashlib.sha256(serialize(setup).encode("utf-8")).hexdigest()


def parse_class(setup: Setup, text: str) -> ClassVector:
    """Resolve a class given by name (named class, divisor, basis element)
    or as comma-separated coordinates."""
    text = text.strip()
    lookup = {"omega": setup.omega, "canonical": setup.canonical, "twist": setup.twist}
    lookup.update(setup.named_classes)
    if text in lookup:
        return lookup[text]
    for d in setup.divisors:
        if d.name == text:
            return d.total_class
    if text in setup.basis:
        return setup.basis_vector(text)
    parts = [p for p in text.replace(";", ",").split(",") if p.strip()]
    return _coords(parts, len(setup.basis), "class")
