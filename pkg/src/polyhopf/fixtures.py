"""The named example library, mutants, and seeded random structure generators.

Fixture names follow the registry in FIXTURES; ``make_fixture`` parses
names like ``hopfcat(kZ2,2)`` or ``grp(z3)``.  The random generators only
produce valid structures: a random base from a curated family followed by
conjugation with random invertible matrices, which preserves every axiom
and every fusion verdict exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dfield
from itertools import product as iproduct
from typing import Callable, Mapping

from .exact import FieldSpec, LabeledSpace, Matrix, NotInvertible, QQ, kron
from .fincat import FinCategory, cyclic_group_category, standard_category
from .hopfstruct import HopfRepresentation, free_hopf_representation
from .modrep import PolyModule, free_module
from .polyalg import Polyalgebra, Polybialgebra, structure_from_tables
from .rmatrix import RMatrixData


class UnknownFixture(ValueError):
    pass


# ----------------------------------------------------------------------
# classical bialgebras as one-morphism structures


def monoid_bialgebra(field: FieldSpec, elements: list[str],
                     table: Mapping[tuple[str, str], str], unit_el: str) -> Polybialgebra:
    """Monoid algebra with group-like basis: Delta(x) = x (x) x, eps = 1."""
    D = standard_category("terminal")
    return structure_from_tables(
        D, field,
        space_labels={"id": list(elements)},
        mult_entries={("id", "id"): [(table[(x, y)], x, y, 1) for x in elements for y in elements]},
        unit_entries={"*": [(unit_el, 1)]},
        comult_entries={"id": [(x, x, x, 1) for x in elements]},
        counit_entries={"id": [(x, 1) for x in elements]},
    )


def group_algebra(field: FieldSpec, n: int) -> Polybialgebra:
    els = [f"g{k}" for k in range(n)]
    table = {(f"g{a}", f"g{b}"): f"g{(a + b) % n}" for a in range(n) for b in range(n)}
    return monoid_bialgebra(field, els, table, "g0")


def idempotent_monoid_bialgebra(field: FieldSpec) -> Polybialgebra:
    """k{1, s} with s^2 = s: a bialgebra whose fusion operator has rank 3."""
    table = {("e", "e"): "e", ("e", "s"): "s", ("s", "e"): "s", ("s", "s"): "s"}
    return monoid_bialgebra(field, ["e", "s"], table, "e")


def sweedler(field: FieldSpec) -> Polybialgebra:
    """The four-dimensional Hopf algebra: g^2 = 1, x^2 = 0, xg = -gx."""
    D = standard_category("terminal")
    mult = [
        ("1", "1", "1", 1), ("g", "1", "g", 1), ("x", "1", "x", 1), ("gx", "1", "gx", 1),
        ("g", "g", "1", 1), ("1", "g", "g", 1), ("gx", "g", "x", 1), ("x", "g", "gx", 1),
        ("x", "x", "1", 1), ("gx", "x", "g", -1),
        ("gx", "gx", "1", 1), ("x", "gx", "g", -1),
    ]
    comult = [
        ("1", "1", "1", 1),
        ("g", "g", "g", 1),
        ("x", "1", "x", 1), ("g", "x", "x", 1),
        ("gx", "g", "gx", 1), ("1", "gx", "gx", 1),
    ]
    return structure_from_tables(
        D, field,
        space_labels={"id": ["1", "g", "x", "gx"]},
        mult_entries={("id", "id"): mult},
        unit_entries={"*": [("1", 1)]},
        comult_entries={"id": comult},
        counit_entries={"id": [("1", 1), ("g", 1)]},
    )


def dual_group_algebra(field: FieldSpec, n: int) -> Polybialgebra:
    """Functions on Z/n: pointwise product, convolution coproduct."""
    D = standard_category("terminal")
    labels = [f"d{k}" for k in range(n)]
    return structure_from_tables(
        D, field,
        space_labels={"id": labels},
        mult_entries={("id", "id"): [(f"d{k}", f"d{k}", f"d{k}", 1) for k in range(n)]},
        unit_entries={"*": [(f"d{k}", 1) for k in range(n)]},
        comult_entries={"id": [(f"d{i}", f"d{(k - i) % n}", f"d{k}", 1)
                               for k in range(n) for i in range(n)]},
        counit_entries={"id": [("d0", 1)]},
    )


# ----------------------------------------------------------------------
# structures over bigger sources


def const_polyalgebra(field: FieldSpec, D: FinCategory) -> Polybialgebra:
    names = D.morphism_names()
    return structure_from_tables(
        D, field,
        space_labels={a: ["e"] for a in names},
        mult_entries={pair: [("e", "e", "e", 1)] for pair in _pairs(D)},
        unit_entries={i: [("e", 1)] for i in D.objects},
        comult_entries={a: [("e", "e", "e", 1)] for a in names},
        counit_entries={a: [("e", 1)] for a in names},
    )


def grp_polyalgebra(field: FieldSpec, n: int) -> Polybialgebra:
    """Lines over the one-object groupoid Z/n; the wrap-up is the group algebra."""
    return const_polyalgebra(field, cyclic_group_category(n))


def hopfcat(H: Polybialgebra, n: int) -> Polybialgebra:
    """Copy a one-morphism structure onto every morphism of the indiscrete category."""
    if len(H.D.morphisms) != 1:
        raise ValueError("hopfcat takes a one-morphism structure")
    e = H.D.morphisms[0].name
    D = standard_category("indiscrete", n=n)
    field = H.field
    labels = list(H.spaces[e].labels)
    spaces = {a: H.spaces[e] for a in D.morphism_names()}
    mult = {pair: H.mult[(e, e)] for pair in _pairs(D)}
    units = {i: H.units[H.D.objects[0]] for i in D.objects}
    comult = {a: H.comult[e] for a in D.morphism_names()}
    counit = {a: H.counit[e] for a in D.morphism_names()}
    return Polybialgebra(Polyalgebra(D, field, spaces, mult, units), comult, counit)


def zero_block_fixture(field: FieldSpec) -> Polybialgebra:
    """Over the group Z/2: the line at the identity, the zero space at g."""
    D = cyclic_group_category(2)
    return structure_from_tables(
        D, field,
        space_labels={"g0": ["e"], "g1": []},
        mult_entries={("g0", "g0"): [("e", "e", "e", 1)]},
        unit_entries={"*": [("e", 1)]},
        comult_entries={"g0": [("e", "e", "e", 1)]},
        counit_entries={"g0": [("e", 1)]},
    )


def sign_twist_indiscrete2(field: FieldSpec) -> Polybialgebra:
    """Lines over the indiscrete groupoid on two objects, twisted by a sign.

    The twist is the coboundary of l(<1,2>) = -1: products through <1,2>
    pick up signs, and the coalgebra constants compensate so all axioms
    hold exactly.  Action type, so the restriction equivalence applies.
    """
    D = standard_category("indiscrete", n=2)
    lam = {a: 1 for a in D.morphism_names()}
    lam["<1,2>"] = -1

    def inv(s):
        return field.inv(field.coerce(s))

    mult_entries = {}
    for (a, b) in _pairs(D):
        ab = D.comp(a, b)
        s = field.mul(field.mul(field.coerce(lam[a]), field.coerce(lam[b])), inv(lam[ab]))
        mult_entries[(a, b)] = [("e", "e", "e", s)]
    return structure_from_tables(
        D, field,
        space_labels={a: ["e"] for a in D.morphism_names()},
        mult_entries=mult_entries,
        unit_entries={i: [("e", 1)] for i in D.objects},
        comult_entries={a: [("e", "e", "e", inv(lam[a]))] for a in D.morphism_names()},
        counit_entries={a: [("e", lam[a])] for a in D.morphism_names()},
    )


def nonhopf_delta1(field: FieldSpec) -> Polybialgebra:
    """A valid transitive non-Hopf structure over the arrow poset.

    The space over the non-identity morphism is a two-dimensional
    group-like coalgebra whose right action factors through the counit of
    the idempotent-monoid algebra below it; the fusion operator then has
    rank 2 of 4 and the lifted unit has dimension 2.
    """
    D = standard_category("delta1")
    return structure_from_tables(
        D, field,
        space_labels={"id0": ["1", "s"], "id1": ["1"], "u": ["v1", "v2"]},
        mult_entries={
            ("id0", "id0"): [("1", "1", "1", 1), ("s", "1", "s", 1),
                             ("s", "s", "1", 1), ("s", "s", "s", 1)],
            ("id1", "id1"): [("1", "1", "1", 1)],
            ("u", "id0"): [("v1", "v1", "1", 1), ("v1", "v1", "s", 1),
                           ("v2", "v2", "1", 1), ("v2", "v2", "s", 1)],
            ("id1", "u"): [("v1", "1", "v1", 1), ("v2", "1", "v2", 1)],
        },
        unit_entries={"0": [("1", 1)], "1": [("1", 1)]},
        comult_entries={
            "id0": [("1", "1", "1", 1), ("s", "s", "s", 1)],
            "id1": [("1", "1", "1", 1)],
            "u": [("v1", "v1", "v1", 1), ("v2", "v2", "v2", 1)],
        },
        counit_entries={
            "id0": [("1", 1), ("s", 1)],
            "id1": [("1", 1)],
            "u": [("v1", 1), ("v2", 1)],
        },
    )


# ----------------------------------------------------------------------
# mutants (deliberately broken)


def kZ2_bad_assoc(field: FieldSpec) -> Polybialgebra:
    """The group algebra of Z/2 with one product entry negated."""
    B = group_algebra(field, 2)
    m = B.mult[("id", "id")]
    ent = list(m.entries)
    # negate the coefficient of e in g*g
    ent[0 * 4 + 3] = field.neg(ent[0 * 4 + 3])
    mult = dict(B.mult)
    mult[("id", "id")] = Matrix(field, m.rows, m.cols, ent)
    base = Polyalgebra(B.D, field, dict(B.spaces), mult, dict(B.units))
    return Polybialgebra(base, dict(B.comult), dict(B.counit))


def kZ2_bad_comult(field: FieldSpec) -> Polybialgebra:
    """Delta(g) = g (x) e: breaks multiplicativity of the coproduct."""
    B = group_algebra(field, 2)
    D = B.D
    return structure_from_tables(
        D, field,
        space_labels={"id": ["g0", "g1"]},
        mult_entries={("id", "id"): [(f"g{(a + b) % 2}", f"g{a}", f"g{b}", 1)
                                     for a in range(2) for b in range(2)]},
        unit_entries={"*": [("g0", 1)]},
        comult_entries={"id": [("g0", "g0", "g0", 1), ("g1", "g0", "g1", 1)]},
        counit_entries={"id": [("g0", 1), ("g1", 1)]},
    )


# ----------------------------------------------------------------------
# modules and R-matrices


def flip_module(field: FieldSpec) -> PolyModule:
    """The plane over grp(z2) with the generator swapping coordinates."""
    spaces = {"*": LabeledSpace.make(("a", "b"))}
    actions = {
        "g0": Matrix.identity(field, 2),
        "g1": Matrix.from_rows(field, [[0, 1], [1, 0]]),
    }
    return PolyModule(spaces, actions)


def shear_module(field: FieldSpec) -> PolyModule:
    """Like flip_module but with a non-involutive action: fails the module law."""
    spaces = {"*": LabeledSpace.make(("a", "b"))}
    actions = {
        "g0": Matrix.identity(field, 2),
        "g1": Matrix.from_rows(field, [[1, 1], [0, 1]]),
    }
    return PolyModule(spaces, actions)


def sign_module(field: FieldSpec, odd: bool) -> PolyModule:
    """A line over func(z2), graded even or odd."""
    spaces = {"*": LabeledSpace.make(("v",))}
    row = [0, 1] if odd else [1, 0]
    return PolyModule(spaces, {"id": Matrix.from_rows(field, [row])})


def sign_rmatrix(field: FieldSpec) -> RMatrixData:
    """R = sum beta(g,h) d_g (x) d_h on func(z2), beta(g,g) = -1."""
    vec = [1, 1, 1, -1]  # (d0,d0), (d0,d1), (d1,d0), (d1,d1)
    return RMatrixData({"*": Matrix.column(field, vec)})


def trivial_rmatrix(B: Polybialgebra) -> RMatrixData:
    """R_i = u_i (x) u_i; the induced transposition is the flip."""
    out = {}
    for i in B.D.objects:
        u = B.units[i]
        out[i] = kron(u, u)
    return RMatrixData(out)


# ----------------------------------------------------------------------
# registry


@dataclass
class Fixture:
    name: str
    structure: Polybialgebra
    rmatrix: RMatrixData | None = None


def _pairs(D: FinCategory):
    from .fincat import composable_pairs

    return composable_pairs(D)


def _const_target(field: FieldSpec, arg: str) -> Polybialgebra:
    if arg == "terminal":
        return const_polyalgebra(field, standard_category("terminal"))
    if arg == "delta1":
        return const_polyalgebra(field, standard_category("delta1"))
    if arg.startswith("indiscrete"):
        return const_polyalgebra(field, standard_category("indiscrete", n=int(arg[len("indiscrete"):])))
    if arg.startswith("z"):
        return const_polyalgebra(field, cyclic_group_category(int(arg[1:])))
    raise UnknownFixture(f"const({arg})")


def make_fixture(name: str, field: FieldSpec = QQ) -> Fixture:
    """Build a named fixture; names follow the ``base(args)`` convention."""
    key = name.strip()
    base, args = key, []
    if "(" in key and key.endswith(")"):
        base = key[: key.index("(")]
        args = [s.strip() for s in key[key.index("(") + 1 : -1].split(",") if s.strip()]
    if base == "kZ2":
        return Fixture(key, group_algebra(field, 2))
    if base == "kZn":
        return Fixture(key, group_algebra(field, int(args[0])))
    if base == "sweedler":
        return Fixture(key, sweedler(field))
    if base == "grp":
        return Fixture(key, grp_polyalgebra(field, int(args[0][1:] if args[0].startswith("z") else args[0])))
    if base == "const":
        return Fixture(key, _const_target(field, args[0]))
    if base == "func":
        return Fixture(key, dual_group_algebra(field, int(args[0][1:] if args[0].startswith("z") else args[0])))
    if base == "hopfcat":
        inner = make_fixture(args[0], field).structure
        return Fixture(key, hopfcat(inner, int(args[1])))
    if base == "monoid-idem":
        return Fixture(key, idempotent_monoid_bialgebra(field))
    if base == "zero-block":
        return Fixture(key, zero_block_fixture(field))
    if base == "sign-twist":
        return Fixture(key, sign_twist_indiscrete2(field))
    if base == "nonhopf-delta1":
        return Fixture(key, nonhopf_delta1(field))
    if base == "rmat":
        inner = make_fixture("func(z2)", field).structure
        return Fixture(key, inner, rmatrix=sign_rmatrix(field))
    raise UnknownFixture(name)


FIXTURE_NAMES = [
    "kZ2", "sweedler", "func(z2)", "monoid-idem",
    "grp(z2)", "grp(z3)",
    "const(terminal)", "const(delta1)", "const(indiscrete2)",
    "hopfcat(kZ2,2)", "hopfcat(sweedler,2)",
    "zero-block", "sign-twist", "nonhopf-delta1", "rmat(func(z2))",
]


# ----------------------------------------------------------------------
# seeded random generation (always valid by construction)


def random_invertible(rng: random.Random, field: FieldSpec, n: int) -> Matrix:
    while True:
        rows = [[rng.randrange(field.characteristic) if field.characteristic
                 else rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        m = Matrix.from_rows(field, rows)
        if not isinstance(m.try_invert(), NotInvertible):
            return m


def conjugate(B: Polybialgebra, P: Mapping[str, Matrix]) -> Polybialgebra:
    """Transport the structure constants along a basis change of every space."""
    D, field = B.D, B.field
    Pinv = {a: P[a].try_invert() for a in D.morphism_names()}
    mult = {}
    for (a, b) in _pairs(D):
        ab = D.comp(a, b)
        mult[(a, b)] = P[ab] @ B.mult[(a, b)] @ kron(Pinv[a], Pinv[b])
    units = {i: P[D.id_of(i)] @ B.units[i] for i in D.objects}
    comult = {a: kron(P[a], P[a]) @ B.comult[a] @ Pinv[a] for a in D.morphism_names()}
    counit = {a: B.counit[a] @ Pinv[a] for a in D.morphism_names()}
    base = Polyalgebra(D, field, dict(B.spaces), mult, units)
    return Polybialgebra(base, comult, counit)


def random_conjugate(rng: random.Random, B: Polybialgebra) -> Polybialgebra:
    P = {a: random_invertible(rng, B.field, B.dim(a)) for a in B.D.morphism_names()}
    return conjugate(B, P)


def enumerate_monoids(n: int) -> list[dict]:
    """All monoid tables on e, s1, ..., s{n-1} (e the identity), n <= 3."""
    els = ["e"] + [f"s{k}" for k in range(1, n)]
    free = els[1:]
    out = []
    cells = [(x, y) for x in free for y in free]
    for choice in iproduct(els, repeat=len(cells)):
        table = {("e", x): x for x in els}
        table.update({(x, "e"): x for x in els})
        table.update({cells[k]: choice[k] for k in range(len(cells))})
        if all(table[(table[(x, y)], z)] == table[(x, table[(y, z)])]
               for x in els for y in els for z in els):
            out.append({"elements": els, "table": table, "unit": "e"})
    return out


_MONOIDS = {n: enumerate_monoids(n) for n in (1, 2, 3)}


def random_valid_polybialgebra(rng: random.Random, field: FieldSpec) -> Polybialgebra:
    """A random valid structure: curated base, then random basis change."""
    kind = rng.randrange(5)
    if kind == 0:
        spec = rng.choice(_MONOIDS[rng.randint(1, 3)])
        B = monoid_bialgebra(field, spec["elements"], spec["table"], spec["unit"])
    elif kind == 1:
        B = dual_group_algebra(field, rng.randint(2, 3))
    elif kind == 2:
        B = grp_polyalgebra(field, rng.randint(2, 3))
    elif kind == 3:
        D = rng.choice([
            standard_category("terminal"),
            standard_category("delta1"),
            standard_category("indiscrete", n=2),
            cyclic_group_category(2),
        ])
        B = const_polyalgebra(field, D)
    else:
        spec = rng.choice(_MONOIDS[rng.randint(1, 3)])
        H = monoid_bialgebra(field, spec["elements"], spec["table"], spec["unit"])
        B = hopfcat(H, 2)
    return random_conjugate(rng, B)


def random_module(rng: random.Random, B: Polybialgebra, dims: Mapping[str, int]) -> PolyModule:
    """A free module conjugated by random isomorphisms per object."""
    X = free_module(B, dims)
    Q = {i: random_invertible(rng, B.field, X.dim(i)) for i in B.D.objects}
    Qinv = {i: Q[i].try_invert() for i in B.D.objects}
    actions = {}
    for m in B.D.morphisms:
        a = m.name
        actions[a] = Q[m.tgt] @ X.actions[a] @ kron(B.ident(B.dim(a)), Qinv[m.src])
    return PolyModule(dict(X.spaces), actions)


def random_representation(rng: random.Random, B: Polybialgebra, dims: Mapping[str, int]):
    """A free representation conjugated by random isomorphisms per morphism."""
    from .modrep import free_representation

    W = free_representation(B, dims)
    Q = {a: random_invertible(rng, B.field, W.dim(a)) for a in B.D.morphism_names()}
    Qinv = {a: Q[a].try_invert() for a in B.D.morphism_names()}
    actions = {}
    for (a, b) in _pairs(B.D):
        ab = B.D.comp(a, b)
        actions[(a, b)] = Q[ab] @ W.actions[(a, b)] @ kron(B.ident(B.dim(a)), Qinv[b])
    from .modrep import PolyRepresentation

    return PolyRepresentation(dict(W.spaces), actions)


def random_hopf_representation(rng: random.Random, B: Polybialgebra,
                               dims: Mapping[str, int]) -> HopfRepresentation:
    """A free Hopf representation conjugated by random isomorphisms."""
    H = free_hopf_representation(B, dims)
    W = H.base
    Q = {a: random_invertible(rng, B.field, W.dim(a)) for a in B.D.morphism_names()}
    Qinv = {a: Q[a].try_invert() for a in B.D.morphism_names()}
    actions = {}
    for (a, b) in _pairs(B.D):
        ab = B.D.comp(a, b)
        actions[(a, b)] = Q[ab] @ W.actions[(a, b)] @ kron(B.ident(B.dim(a)), Qinv[b])
    coactions = {}
    for a in B.D.morphism_names():
        coactions[a] = kron(B.ident(B.dim(a)), Q[a]) @ H.coactions[a] @ Qinv[a]
    from .modrep import PolyRepresentation

    return HopfRepresentation(PolyRepresentation(dict(W.spaces), actions), coactions)
