"""Modules and representations over a structure-constant Hopf polyalgebra.

A module is a family of spaces X_i indexed by the objects of the source
category with actions M_a (x) X_{src a} -> X_{tgt a}; a representation is
the bigger gadget indexed by morphisms with actions over composable pairs.
This module also houses the free constructions, the adjunction triangle
checks, pull-back along a functor, the representations-as-modules
translation over the arrow category, and the connected-groupoid
restriction equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .exact import (
    LabeledSpace,
    Matrix,
    NotInvertible,
    ShapeMismatch,
    kron,
    perm_tensor,
)
from .fincat import (
    FinCategory,
    FunctorData,
    NotConnected,
    NotGroupoid,
    arrow_category,
    composable_pairs,
    is_connected,
    is_groupoid,
    validate_category,
    validate_functor,
)
from .polyalg import Polyalgebra, Polybialgebra, comonoidal_split
from .report import Report


class NotActionType(ValueError):
    pass


@dataclass(frozen=True)
class PolyModule:
    """Spaces per object with actions rho_a : M_a (x) X_{src a} -> X_{tgt a}."""

    spaces: Mapping[str, LabeledSpace]
    actions: Mapping[str, Matrix]

    def dim(self, i: str) -> int:
        return self.spaces[i].dim


@dataclass(frozen=True)
class PolyRepresentation:
    """Spaces per morphism with actions rho_{a,b} : M_a (x) W_b -> W_{ab}."""

    spaces: Mapping[str, LabeledSpace]
    actions: Mapping[tuple[str, str], Matrix]

    def dim(self, a: str) -> int:
        return self.spaces[a].dim


@dataclass(frozen=True)
class ModuleMorphism:
    """Componentwise linear map; keys are objects (modules) or morphisms (reps)."""

    components: Mapping[str, Matrix]

    def is_invertible(self) -> bool:
        return all(not isinstance(c.try_invert(), NotInvertible) for c in self.components.values())


def _space(dim: int, prefix: str = "e") -> LabeledSpace:
    return LabeledSpace(dim, tuple(f"{prefix}{k}" for k in range(dim)))


def module_shapes_ok(B: Polybialgebra, X: PolyModule) -> None:
    for i in B.D.objects:
        if i not in X.spaces:
            raise ShapeMismatch(f"module has no space at object {i}")
    for m in B.D.morphisms:
        a = m.name
        rho = X.actions.get(a)
        want = (X.dim(m.tgt), B.dim(a) * X.dim(m.src))
        if rho is None or (rho.rows, rho.cols) != want:
            raise ShapeMismatch(f"action at {a}: want shape {want}")


def validate_module(B: Polybialgebra, X: PolyModule) -> Report:
    """Associativity over composable pairs and unitality at every object."""
    module_shapes_ok(B, X)
    rep = Report("module axioms")
    D = B.D
    for (a, b) in composable_pairs(D):
        k = D.src(b)
        lhs = X.actions[a] @ kron(B.ident(B.dim(a)), X.actions[b])
        rhs = X.actions[D.comp(a, b)] @ kron(B.mult[(a, b)], B.ident(X.dim(k)))
        rep.record(f"assoc({a},{b})", lhs == rhs, witness=None if lhs == rhs else lhs - rhs)
    for i in D.objects:
        e = D.id_of(i)
        got = X.actions[e] @ kron(B.units[i], B.ident(X.dim(i)))
        ident = Matrix.identity(B.field, X.dim(i))
        rep.record(f"unital({i})", got == ident, witness=None if got == ident else got - ident)
    return rep


def validate_module_morphism(B: Polybialgebra, f: ModuleMorphism, X: PolyModule, Y: PolyModule) -> Report:
    rep = Report("module morphism")
    for m in B.D.morphisms:
        a = m.name
        fi, fj = f.components[m.tgt], f.components[m.src]
        lhs = fi @ X.actions[a]
        rhs = Y.actions[a] @ kron(B.ident(B.dim(a)), fj)
        rep.record(f"intertwines({a})", lhs == rhs, witness=None if lhs == rhs else lhs - rhs)
    return rep


def validate_representation(B: Polybialgebra, W: PolyRepresentation) -> Report:
    """Associativity over composable triples and the unit axiom per morphism."""
    rep = Report("representation axioms")
    D = B.D
    for a in D.morphism_names():
        if a not in W.spaces:
            raise ShapeMismatch(f"representation has no space at morphism {a}")
    for (a, b) in composable_pairs(D):
        r = W.actions.get((a, b))
        want = (W.dim(D.comp(a, b)), B.dim(a) * W.dim(b))
        if r is None or (r.rows, r.cols) != want:
            raise ShapeMismatch(f"action at ({a},{b}): want shape {want}")
    from .fincat import composable_triples

    for (a, b, c) in composable_triples(D):
        lhs = W.actions[(D.comp(a, b), c)] @ kron(B.mult[(a, b)], B.ident(W.dim(c)))
        rhs = W.actions[(a, D.comp(b, c))] @ kron(B.ident(B.dim(a)), W.actions[(b, c)])
        rep.record(f"assoc({a},{b},{c})", lhs == rhs, witness=None if lhs == rhs else lhs - rhs)
    for m in D.morphisms:
        a = m.name
        e = D.id_of(m.tgt)
        got = W.actions[(e, a)] @ kron(B.units[m.tgt], B.ident(W.dim(a)))
        ident = Matrix.identity(B.field, W.dim(a))
        rep.record(f"unital({a})", got == ident, witness=None if got == ident else got - ident)
    return rep


def validate_representation_morphism(B: Polybialgebra, f: ModuleMorphism,
                                     W: PolyRepresentation, V: PolyRepresentation) -> Report:
    rep = Report("representation morphism")
    D = B.D
    for (a, b) in composable_pairs(D):
        lhs = f.components[D.comp(a, b)] @ W.actions[(a, b)]
        rhs = V.actions[(a, b)] @ kron(B.ident(B.dim(a)), f.components[b])
        rep.record(f"intertwines({a},{b})", lhs == rhs, witness=None if lhs == rhs else lhs - rhs)
    return rep


# ----------------------------------------------------------------------
# monoidal structure on modules


def unit_module(B: Polybialgebra) -> PolyModule:
    """The monoidal unit: the line at every object, acted on through the counits."""
    spaces = {i: _space(1, "u") for i in B.D.objects}
    actions = {m.name: B.counit[m.name] for m in B.D.morphisms}
    return PolyModule(spaces, actions)


def tensor_modules(B: Polybialgebra, X: PolyModule, Y: PolyModule) -> PolyModule:
    """Componentwise tensor; the action comultiplies and routes one copy to each factor."""
    spaces = {i: X.spaces[i].tensor(Y.spaces[i]) for i in B.D.objects}
    actions = {}
    for m in B.D.morphisms:
        a = m.name
        j = m.src
        actions[a] = kron(X.actions[a], Y.actions[a]) @ comonoidal_split(B, a, X.dim(j), Y.dim(j))
    return PolyModule(spaces, actions)


# ----------------------------------------------------------------------
# free constructions


def free_representation(B: Polybialgebra, dims: Mapping[str, int]) -> PolyRepresentation:
    """W_a = M_a (x) X_{src a} with the product acting."""
    coords = {i: _space(dims[i], f"x{i}.") for i in B.D.objects}
    spaces = {m.name: B.spaces[m.name].tensor(coords[m.src]) for m in B.D.morphisms}
    actions = {}
    for (a, b) in composable_pairs(B.D):
        k = B.D.src(b)
        actions[(a, b)] = kron(B.mult[(a, b)], B.ident(dims[k]))
    return PolyRepresentation(spaces, actions)


def distribute(field, d_out: int, block_dims: Sequence[int]) -> Matrix:
    """Permutation matrix M (x) (+X_t) -> +(M (x) X_t) in the fixed index convention."""
    total = sum(block_dims)
    n = d_out * total
    zero, one = field.zero(), field.one()
    out = [zero] * (n * n)
    offs = []
    acc = 0
    for d in block_dims:
        offs.append(acc)
        acc += d
    for mrow in range(d_out):
        for t, d in enumerate(block_dims):
            for x in range(d):
                src = mrow * total + offs[t] + x
                tgt = d_out * offs[t] + mrow * d + x
                out[tgt * n + src] = one
    return Matrix(field, n, n, out)


def assemble_blocks(field, row_blocks: Sequence[int], col_blocks: Sequence[int],
                    blocks: Mapping[tuple[int, int], Matrix]) -> Matrix:
    """Dense matrix from a sparse dict of blocks between direct sums."""
    rows, cols = sum(row_blocks), sum(col_blocks)
    zero = field.zero()
    out = [zero] * (rows * cols)
    roffs, acc = [], 0
    for d in row_blocks:
        roffs.append(acc)
        acc += d
    coffs, acc = [], 0
    for d in col_blocks:
        coffs.append(acc)
        acc += d
    for (bi, bj), m in blocks.items():
        if (m.rows, m.cols) != (row_blocks[bi], col_blocks[bj]):
            raise ShapeMismatch("assemble_blocks: block shape mismatch")
        for i in range(m.rows):
            base = (roffs[bi] + i) * cols + coffs[bj]
            mrow = i * m.cols
            for j in range(m.cols):
                out[base + j] = m.entries[mrow + j]
    return Matrix(field, rows, cols, out)


def free_module(B: Polybialgebra, dims: Mapping[str, int]) -> PolyModule:
    """F(V)_i = +_{a : tgt a = i} M_a (x) V_{src a}, with the product acting blockwise."""
    D = B.D
    spaces = {}
    blocks_at = {i: D.arrows_into(i) for i in D.objects}
    for i in D.objects:
        labels = []
        for a in blocks_at[i]:
            for x in B.spaces[a].labels:
                for k in range(dims[D.src(a)]):
                    labels.append(f"{a}:{x}|{k}")
        spaces[i] = LabeledSpace(len(labels), tuple(labels))
    actions = {}
    for m in D.morphisms:
        b, j, i = m.name, m.src, m.tgt
        db = B.dim(b)
        src_blocks = [B.dim(a) * dims[D.src(a)] for a in blocks_at[j]]
        tgt_blocks = [B.dim(c) * dims[D.src(c)] for c in blocks_at[i]]
        blocks = {}
        for t, a in enumerate(blocks_at[j]):
            ba = D.comp(b, a)
            blocks[(blocks_at[i].index(ba), t)] = kron(B.mult[(b, a)], B.ident(dims[D.src(a)]))
        body = assemble_blocks(B.field, tgt_blocks, [db * s for s in src_blocks], blocks)
        actions[b] = body @ distribute(B.field, db, src_blocks)
    return PolyModule(spaces, actions)


def check_rep_adjunction(B: Polybialgebra, dims: Mapping[str, int], W: PolyRepresentation) -> Report:
    """Both triangle identities of the free/forgetful adjunction, on instances.

    The unit inserts u_i, the counit acts along identities; the triangles
    are exact matrix identities.  Also reports invertibility of the counit
    components when the structure is action type over a groupoid.
    """
    rep = Report("representation adjunction triangles")
    D, f = B.D, B.field
    for i in D.objects:
        e = D.id_of(i)
        w = W.dim(e)
        got = W.actions[(e, e)] @ kron(B.units[i], Matrix.identity(f, w))
        rep.record(f"triangle-V({i})", got == Matrix.identity(f, w))
    for m in D.morphisms:
        a, j = m.name, m.src
        e = D.id_of(j)
        n = B.dim(a) * dims[j]
        got = kron(B.mult[(a, e)], B.ident(dims[j])) \
            @ kron(B.ident(B.dim(a)), kron(B.units[j], B.ident(dims[j])))
        rep.record(f"triangle-L({a})", got == Matrix.identity(f, n))
    gpd, _ = is_groupoid(D)
    at, _ = action_type_status(B)
    if gpd and at:
        for m in D.morphisms:
            a, j = m.name, m.src
            e = D.id_of(j)
            eps_a = W.actions[(a, e)]
            rep.record(f"counit-invertible({a})",
                       not isinstance(eps_a.try_invert(), NotInvertible),
                       "forgetful functor is an equivalence on this instance")
    return rep


# ----------------------------------------------------------------------
# pull-back and the arrow-category translation


def pullback(B: Polybialgebra, f: FunctorData) -> Polybialgebra:
    """The structure over the functor's source: everything reindexed along f."""
    if f.target is not B.D and f.target != B.D:
        raise ValueError("functor target is not the structure's source category")
    Dp = f.source
    spaces = {a: B.spaces[f.on_mor(a)] for a in Dp.morphism_names()}
    mult = {(a, b): B.mult[(f.on_mor(a), f.on_mor(b))] for (a, b) in composable_pairs(Dp)}
    units = {i: B.units[f.on_obj(i)] for i in Dp.objects}
    base = Polyalgebra(Dp, B.field, spaces, mult, units)
    comult = {a: B.comult[f.on_mor(a)] for a in Dp.morphism_names()}
    counit = {a: B.counit[f.on_mor(a)] for a in Dp.morphism_names()}
    return Polybialgebra(base, comult, counit)


def pullback_module(f: FunctorData, X: PolyModule) -> PolyModule:
    spaces = {j: X.spaces[f.on_obj(j)] for j in f.source.objects}
    actions = {a: X.actions[f.on_mor(a)] for a in f.source.morphism_names()}
    return PolyModule(spaces, actions)


def rep_to_module(B: Polybialgebra, W: PolyRepresentation) -> PolyModule:
    """A representation is a module over the pull-back to the arrow category."""
    D = B.D
    spaces = {b: W.spaces[b] for b in D.morphism_names()}
    actions = {f"({a},{b})": W.actions[(a, b)] for (a, b) in composable_pairs(D)}
    return PolyModule(spaces, actions)


def module_to_rep(B: Polybialgebra, X: PolyModule) -> PolyRepresentation:
    D = B.D
    spaces = {b: X.spaces[b] for b in D.morphism_names()}
    actions = {(a, b): X.actions[f"({a},{b})"] for (a, b) in composable_pairs(D)}
    return PolyRepresentation(spaces, actions)


def arrow_structure(B: Polybialgebra) -> tuple[Polybialgebra, FunctorData]:
    """The pulled-back structure over the arrow category, with the projection functor."""
    ar, t = arrow_category(B.D)
    return pullback(B, t), t


# ----------------------------------------------------------------------
# action type and invertibility of actions


def action_type_status(B: Polybialgebra) -> tuple[bool, Report]:
    """All products and units invertible (a pseudofunctor, representably)."""
    rep = Report("action type")
    ok = True
    for (a, b) in sorted(composable_pairs(B.D)):
        inv = B.mult[(a, b)].try_invert()
        good = not isinstance(inv, NotInvertible)
        ok = ok and good
        rep.record(f"m({a},{b})-invertible", good)
    for i in B.D.objects:
        inv = B.units[i].try_invert()
        good = not isinstance(inv, NotInvertible)
        ok = ok and good
        rep.record(f"u({i})-invertible", good)
    return ok, rep


def action_invertibility(B: Polybialgebra, X: PolyModule) -> Report:
    """Actions along invertible morphisms of the source are isomorphisms.

    Requires action type; morphisms with no inverse in the source are
    reported as skipped.  When dim M_a = 1 the certified map is the mate
    X_src -> X_tgt; otherwise full row rank of rho_a is the witness.
    """
    at, atrep = action_type_status(B)
    if not at:
        raise NotActionType(atrep.as_text())
    module_shapes_ok(B, X)
    rep = Report("action invertibility")
    D = B.D
    for m in D.morphisms:
        a = m.name
        inv = None
        for n in D.morphisms:
            if n.src == m.tgt and n.tgt == m.src \
                    and D.comp(a, n.name) == D.id_of(m.tgt) and D.comp(n.name, a) == D.id_of(m.src):
                inv = n.name
                break
        if inv is None:
            rep.ok(f"skipped({a})", "not invertible in the source category")
            continue
        if B.dim(a) == 1:
            vec = Matrix.from_rows(B.field, [[1]])
            mate = X.actions[a] @ kron(vec, B.ident(X.dim(m.src)))
            good = not isinstance(mate.try_invert(), NotInvertible)
            rep.record(f"mate-invertible({a})", good)
        else:
            rho = X.actions[a]
            rep.record(f"action-surjective({a})", rho.rank() == rho.rows)
    return rep


# ----------------------------------------------------------------------
# connected groupoid: restriction and extension


def endo_subcategory(D: FinCategory, i0: str) -> tuple[FinCategory, FunctorData]:
    """The full subcategory on one object, with its inclusion functor."""
    loops = [m for m in D.morphisms if m.src == i0 and m.tgt == i0]
    names = [m.name for m in loops]
    sub = validate_category({
        "objects": [i0],
        "morphisms": [(m.name, i0, i0) for m in loops],
        "identity": {i0: D.id_of(i0)},
        "compose": {(a, b): D.comp(a, b) for a in names for b in names},
    })
    incl = validate_functor({"objects": {i0: i0}, "morphisms": {a: a for a in names}}, sub, D)
    return sub, incl


def basepoint_paths(D: FinCategory, i0: str) -> dict[str, str]:
    """Deterministic BFS choice of a morphism i0 -> i for every object."""
    if i0 not in D.objects:
        raise ValueError(f"unknown basepoint {i0}")
    paths = {i0: D.id_of(i0)}
    frontier = [i0]
    while frontier:
        nxt = []
        for j in frontier:
            for m in D.morphisms:
                if m.src == j and m.tgt not in paths:
                    paths[m.tgt] = D.comp(m.name, paths[j])
                    nxt.append(m.tgt)
        frontier = nxt
    if len(paths) != len(D.objects):
        raise NotConnected(f"objects {sorted(set(D.objects) - set(paths))} unreachable from {i0}")
    return paths


def restrict_module(B: Polybialgebra, i0: str, X: PolyModule) -> PolyModule:
    _, incl = endo_subcategory(B.D, i0)
    return pullback_module(incl, X)


def groupoid_restriction(B: Polybialgebra, i0: str, X0: PolyModule) -> PolyModule:
    """Extend a module over the vertex group at i0 to the whole groupoid.

    The action along a : j -> i routes through the chosen paths:
    gamma = a_i^{-1} a a_j is a loop at i0 and the extended action is the
    composite of m_{a,a_j}, the inverse of m_{a_i,gamma}, and the given
    action of gamma.  Everything is an exact matrix; requires a connected
    groupoid and an action-type structure.
    """
    D = B.D
    gpd, invtab = is_groupoid(D)
    if not gpd:
        raise NotGroupoid("source category is not a groupoid")
    if not is_connected(D):
        raise NotConnected("source groupoid is not connected")
    at, atrep = action_type_status(B)
    if not at:
        raise NotActionType(atrep.as_text())
    paths = basepoint_paths(D, i0)
    x0 = X0.spaces[i0]
    d0 = x0.dim
    ident0 = Matrix.identity(B.field, d0)

    spaces = {}
    for i in D.objects:
        spaces[i] = x0 if i == i0 else B.spaces[paths[i]].tensor(x0)

    # unnormalized extension Y_i = M_{a_i} (x) X0
    def phi(i: str) -> Matrix:
        # Y_i -> X_i; identity except at the basepoint where the unit collapses
        if i != i0:
            return Matrix.identity(B.field, B.dim(paths[i]) * d0)
        return kron(B.units[i0].try_invert(), ident0)

    actions = {}
    for m in D.morphisms:
        a, j, i = m.name, m.src, m.tgt
        ai, aj = paths[i], paths[j]
        gamma = D.comp(D.comp(invtab[ai], a), aj)
        step1 = kron(B.mult[(a, aj)], ident0)
        step2 = kron(B.mult[(ai, gamma)].try_invert(), ident0)
        step3 = kron(B.ident(B.dim(ai)), X0.actions[gamma])
        rho_y = step3 @ step2 @ step1
        inv_phi_j = phi(j).try_invert()
        actions[a] = phi(i) @ rho_y @ kron(B.ident(B.dim(a)), inv_phi_j)
    return PolyModule(spaces, actions)


def extension_counit(B: Polybialgebra, i0: str, Y: PolyModule) -> tuple[ModuleMorphism, Report]:
    """The natural comparison ext(restr(Y)) -> Y, with its validity report."""
    paths = basepoint_paths(B.D, i0)
    comps = {}
    for i in B.D.objects:
        comps[i] = Matrix.identity(B.field, Y.dim(i0)) if i == i0 else Y.actions[paths[i]]
    psi = ModuleMorphism(comps)
    ext = groupoid_restriction(B, i0, restrict_module(B, i0, Y))
    rep = validate_module_morphism(B, psi, ext, Y)
    for i in B.D.objects:
        rep.record(f"invertible({i})", not isinstance(comps[i].try_invert(), NotInvertible))
    return psi, rep
