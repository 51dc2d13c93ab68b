"""Finite categories given by explicit composition tables, and functors.

Objects and morphisms are named by strings; the composition table is a
partial map defined exactly on composable pairs.  Validation reports every
violated law, not just the first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .report import Report


class InvalidCategory(ValueError):
    """Raised by validate_category; carries the full violation report."""

    def __init__(self, report: Report):
        super().__init__(report.as_text())
        self.report = report


class NotAFunctor(ValueError):
    def __init__(self, report: Report):
        super().__init__(report.as_text())
        self.report = report


class NotGroupoid(ValueError):
    pass


class NotConnected(ValueError):
    pass


@dataclass(frozen=True)
class Morphism:
    name: str
    src: str
    tgt: str


@dataclass(frozen=True)
class FinCategory:
    """A finite category: objects, morphisms, identities, composition table.

    ``compose`` maps (a, b) to the composite a after b, defined exactly when
    src(a) = tgt(b).  Instances are built through ``validate_category``.
    """

    objects: tuple[str, ...]
    morphisms: tuple[Morphism, ...]
    identity: Mapping[str, str]
    compose_table: Mapping[tuple[str, str], str]
    _by_name: Mapping[str, Morphism] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self._by_name is None:
            object.__setattr__(self, "_by_name", {m.name: m for m in self.morphisms})

    def morphism(self, name: str) -> Morphism:
        return self._by_name[name]

    def src(self, name: str) -> str:
        return self._by_name[name].src

    def tgt(self, name: str) -> str:
        return self._by_name[name].tgt

    def id_of(self, obj: str) -> str:
        return self.identity[obj]

    def comp(self, a: str, b: str) -> str:
        """The composite a.b (a after b)."""
        return self.compose_table[(a, b)]

    def morphism_names(self) -> tuple[str, ...]:
        return tuple(m.name for m in self.morphisms)

    def is_identity(self, a: str) -> bool:
        return any(self.identity[i] == a for i in self.objects)

    def arrows_into(self, obj: str) -> list[str]:
        return [m.name for m in self.morphisms if m.tgt == obj]

    def arrows_out_of(self, obj: str) -> list[str]:
        return [m.name for m in self.morphisms if m.src == obj]


def composable_pairs(D: FinCategory) -> list[tuple[str, str]]:
    """All (a, b) with src(a) = tgt(b), in declaration order of a then b."""
    return [(a.name, b.name) for a in D.morphisms for b in D.morphisms if a.src == b.tgt]


def composable_triples(D: FinCategory) -> list[tuple[str, str, str]]:
    return [(a.name, b.name, c.name)
            for a in D.morphisms for b in D.morphisms for c in D.morphisms
            if a.src == b.tgt and b.src == c.tgt]


def validate_category(raw) -> FinCategory:
    """Check the category laws on raw tables; raise InvalidCategory listing all violations.

    ``raw`` is either a FinCategory or a dict with keys objects, morphisms,
    identity, compose (same shapes as the FinCategory fields).
    """
    if isinstance(raw, FinCategory):
        cand = raw
    else:
        cand = FinCategory(
            objects=tuple(raw["objects"]),
            morphisms=tuple(m if isinstance(m, Morphism) else Morphism(*m) for m in raw["morphisms"]),
            identity=dict(raw["identity"]),
            compose_table=dict(raw["compose"]),
        )
    rep = Report("category laws")
    names = set()
    for m in cand.morphisms:
        if m.name in names:
            rep.fail("distinct-names", f"duplicate morphism name {m.name}")
        names.add(m.name)
        if m.src not in cand.objects or m.tgt not in cand.objects:
            rep.fail("typing", f"morphism {m.name} has unknown src/tgt")
    if len(set(cand.objects)) != len(cand.objects):
        rep.fail("distinct-names", "duplicate object name")
    for i in cand.objects:
        e = cand.identity.get(i)
        if e is None or e not in names:
            rep.fail("IdentityViolation", f"object {i} has no identity morphism")
            continue
        m = cand.morphism(e)
        if m.src != i or m.tgt != i:
            rep.fail("IdentityViolation", f"identity {e} of {i} is not an endomorphism of {i}")
    if not rep.passed:
        raise InvalidCategory(rep)

    pairs = set(composable_pairs(cand))
    for key in cand.compose_table:
        if key not in pairs:
            rep.fail("CompositionDomainError", f"compose defined on non-composable pair {key}")
    for (a, b) in sorted(pairs):
        ab = cand.compose_table.get((a, b))
        if ab is None:
            rep.fail("CompositionDomainError", f"compose undefined on composable pair ({a},{b})")
            continue
        if ab not in names:
            rep.fail("CompositionDomainError", f"composite {ab} of ({a},{b}) is not a morphism")
            continue
        if cand.tgt(ab) != cand.tgt(a) or cand.src(ab) != cand.src(b):
            rep.fail("CompositionDomainError",
                     f"composite {ab} of ({a},{b}) has wrong endpoints")
    if not rep.passed:
        raise InvalidCategory(rep)

    for i in cand.objects:
        e = cand.identity[i]
        for m in cand.morphisms:
            if m.src == i and cand.comp(m.name, e) != m.name:
                rep.fail("IdentityViolation", f"{m.name} . {e} != {m.name}")
            if m.tgt == i and cand.comp(e, m.name) != m.name:
                rep.fail("IdentityViolation", f"{e} . {m.name} != {m.name}")
    for (a, b, c) in composable_triples(cand):
        if cand.comp(cand.comp(a, b), c) != cand.comp(a, cand.comp(b, c)):
            rep.fail("AssociativityViolation", f"({a},{b},{c})")
    if not rep.passed:
        raise InvalidCategory(rep)
    return cand


def is_groupoid(D: FinCategory) -> tuple[bool, dict[str, str] | None]:
    """True iff every morphism has a two-sided inverse; returns the inverse table."""
    inverse: dict[str, str] = {}
    for m in D.morphisms:
        inv = None
        for n in D.morphisms:
            if n.src == m.tgt and n.tgt == m.src:
                if D.comp(m.name, n.name) == D.id_of(m.tgt) and D.comp(n.name, m.name) == D.id_of(m.src):
                    inv = n.name
                    break
        if inv is None:
            return False, None
        inverse[m.name] = inv
    return True, inverse


def is_connected(D: FinCategory) -> bool:
    """Connectivity of the underlying undirected graph on objects."""
    if not D.objects:
        return True
    seen = {D.objects[0]}
    frontier = [D.objects[0]]
    while frontier:
        i = frontier.pop()
        for m in D.morphisms:
            for nxt in ((m.tgt,) if m.src == i else ()) + ((m.src,) if m.tgt == i else ()):
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
    return len(seen) == len(D.objects)


def standard_category(kind: str, **params) -> FinCategory:
    """Named constructors: terminal, group (from a table), indiscrete(n), delta1."""
    if kind == "terminal":
        return validate_category({
            "objects": ["*"],
            "morphisms": [("id", "*", "*")],
            "identity": {"*": "id"},
            "compose": {("id", "id"): "id"},
        })
    if kind == "group":
        elements: Sequence[str] = params["elements"]
        table: Mapping[tuple[str, str], str] = params["table"]
        unit: str = params["unit"]
        if unit not in elements:
            raise ValueError("group unit not among elements")
        for g in elements:
            for h in elements:
                if (g, h) not in table:
                    raise ValueError(f"group table missing entry ({g},{h})")
        return validate_category({
            "objects": ["*"],
            "morphisms": [(g, "*", "*") for g in elements],
            "identity": {"*": unit},
            "compose": dict(table),
        })
    if kind == "indiscrete":
        n: int = params["n"]
        objs = [str(i + 1) for i in range(n)]
        morphs = [(f"<{x},{y}>", y, x) for x in objs for y in objs]
        compose = {}
        for x in objs:
            for y in objs:
                for z in objs:
                    compose[(f"<{x},{y}>", f"<{y},{z}>")] = f"<{x},{z}>"
        return validate_category({
            "objects": objs,
            "morphisms": morphs,
            "identity": {x: f"<{x},{x}>" for x in objs},
            "compose": compose,
        })
    if kind == "delta1":
        return validate_category({
            "objects": ["0", "1"],
            "morphisms": [("id0", "0", "0"), ("id1", "1", "1"), ("u", "0", "1")],
            "identity": {"0": "id0", "1": "id1"},
            "compose": {("id0", "id0"): "id0", ("id1", "id1"): "id1",
                        ("u", "id0"): "u", ("id1", "u"): "u"},
        })
    raise ValueError(f"unknown standard category kind {kind!r}")


def cyclic_group_category(n: int) -> FinCategory:
    """The one-object category of Z/n, elements g0..g{n-1}."""
    els = [f"g{k}" for k in range(n)]
    table = {(f"g{a}", f"g{b}"): f"g{(a + b) % n}" for a in range(n) for b in range(n)}
    return standard_category("group", elements=els, table=table, unit="g0")


@dataclass(frozen=True)
class FunctorData:
    """A functor between finite categories, given by object and morphism maps."""

    source: FinCategory
    target: FinCategory
    object_map: Mapping[str, str]
    morphism_map: Mapping[str, str]

    def on_obj(self, i: str) -> str:
        return self.object_map[i]

    def on_mor(self, a: str) -> str:
        return self.morphism_map[a]


def validate_functor(raw, source: FinCategory, target: FinCategory) -> FunctorData:
    """Check functoriality of raw object/morphism maps; raise NotAFunctor with witnesses."""
    if isinstance(raw, FunctorData):
        omap, mmap = dict(raw.object_map), dict(raw.morphism_map)
    else:
        omap, mmap = dict(raw["objects"]), dict(raw["morphisms"])
    rep = Report("functor laws")
    for i in source.objects:
        if omap.get(i) not in target.objects:
            rep.fail("NotAFunctor", f"object {i} not mapped into the target")
    for m in source.morphisms:
        fm = mmap.get(m.name)
        if fm is None or fm not in target.morphism_names():
            rep.fail("NotAFunctor", f"morphism {m.name} not mapped into the target")
            continue
        if target.src(fm) != omap.get(m.src) or target.tgt(fm) != omap.get(m.tgt):
            rep.fail("NotAFunctor", f"morphism {m.name}: endpoints not preserved")
    if not rep.passed:
        raise NotAFunctor(rep)
    for i in source.objects:
        if mmap[source.id_of(i)] != target.id_of(omap[i]):
            rep.fail("NotAFunctor", f"identity of {i} not preserved")
    for (a, b) in composable_pairs(source):
        if mmap[source.comp(a, b)] != target.comp(mmap[a], mmap[b]):
            rep.fail("NotAFunctor", f"composition not preserved on ({a},{b})")
    if not rep.passed:
        raise NotAFunctor(rep)
    return FunctorData(source, target, omap, mmap)


def identity_functor(D: FinCategory) -> FunctorData:
    return FunctorData(D, D, {i: i for i in D.objects}, {m: m for m in D.morphism_names()})


def arrow_category(D: FinCategory) -> tuple[FinCategory, FunctorData]:
    """The category with objects D_1 and morphisms the composable pairs.

    A pair (a, b) is the morphism a : b -> ab; the projection functor sends
    the object b to tgt(b) and the morphism (a, b) to a.
    """
    def pname(a: str, b: str) -> str:
        return f"({a},{b})"

    objs = list(D.morphism_names())
    morphs = [Morphism(pname(a, b), b, D.comp(a, b)) for (a, b) in composable_pairs(D)]
    identity = {b: pname(D.id_of(D.tgt(b)), b) for b in objs}
    compose = {}
    for (a2, b2) in composable_pairs(D):
        for (a1, b1) in composable_pairs(D):
            # (a2 : b2 -> a2.b2) after (a1 : b1 -> a1.b1) needs b2 = a1.b1
            if b2 == D.comp(a1, b1) and D.src(a2) == D.tgt(a1):
                compose[(pname(a2, b2), pname(a1, b1))] = pname(D.comp(a2, a1), b1)
    ar = validate_category({
        "objects": objs,
        "morphisms": morphs,
        "identity": identity,
        "compose": compose,
    })
    t = validate_functor(
        {"objects": {b: D.tgt(b) for b in objs},
         "morphisms": {pname(a, b): a for (a, b) in composable_pairs(D)}},
        ar, D)
    return ar, t
