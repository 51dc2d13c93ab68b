"""Wrapping the structure into one algebra on the direct sum of all spaces.

The total algebra is +_a M_a with the (tgt, src) grading, products of
non-composable pairs set to zero and unit the sum of all u_i.  Families of
spaces over the objects with blockwise actions are exactly modules over
the induced monad; the blockwise fusion operator at an object routes block
(a, b) to block (a, ab), which is a bijection of blocks iff the source is
a groupoid -- that is the exact content of the Hopf-monad comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .exact import (
    LabeledSpace,
    Matrix,
    NotInvertible,
    ShapeMismatch,
    kron,
)
from .fincat import composable_pairs
from .modrep import PolyModule, assemble_blocks, distribute, tensor_modules
from .polyalg import Polybialgebra, comonoidal_split, fusion_at
from .report import Report


@dataclass(frozen=True)
class TotalAlgebra:
    """+_a M_a as a single unital algebra, with grading and blockwise coalgebra."""

    B: Polybialgebra
    space: LabeledSpace
    offsets: Mapping[str, int]
    mult: Matrix
    unit: Matrix
    grading: Mapping[str, tuple[str, str]]

    @property
    def dim(self) -> int:
        return self.space.dim

    def validate(self) -> Report:
        rep = Report("total algebra axioms")
        f = self.B.field
        n = self.dim
        ident = Matrix.identity(f, n)
        lhs = self.mult @ kron(self.mult, ident)
        rhs = self.mult @ kron(ident, self.mult)
        rep.record("assoc", lhs == rhs)
        rep.record("unit-left", self.mult @ kron(self.unit, ident) == ident)
        rep.record("unit-right", self.mult @ kron(ident, self.unit) == ident)
        rep.note("blockwise coalgebra: inherited from the per-morphism coalgebras")
        rep.note("finite source: all sums are finite direct sums")
        return rep


def wrap(B: Polybialgebra) -> TotalAlgebra:
    names = list(B.D.morphism_names())
    offsets, acc = {}, 0
    labels = []
    for a in names:
        offsets[a] = acc
        acc += B.dim(a)
        labels.extend(f"{a}:{x}" for x in B.spaces[a].labels)
    S = acc
    f = B.field
    zero = f.zero()
    mult = [zero] * (S * S * S)
    for (a, b) in composable_pairs(B.D):
        ab = B.D.comp(a, b)
        m = B.mult[(a, b)]
        da, db = B.dim(a), B.dim(b)
        for z in range(m.rows):
            row = (offsets[ab] + z) * (S * S)
            for x in range(da):
                for y in range(db):
                    v = m.entries[z * (da * db) + x * db + y]
                    if v:
                        mult[row + (offsets[a] + x) * S + (offsets[b] + y)] = v
    unit = [zero] * S
    for i in B.D.objects:
        e = B.D.id_of(i)
        u = B.units[i]
        for x in range(u.rows):
            unit[offsets[e] + x] = u.entries[x]
    grading = {m.name: (m.tgt, m.src) for m in B.D.morphisms}
    return TotalAlgebra(
        B=B,
        space=LabeledSpace(S, tuple(labels)),
        offsets=offsets,
        mult=Matrix(f, S, S * S, mult),
        unit=Matrix(f, S, 1, unit),
        grading=grading,
    )


def wrapped_fusion(That: TotalAlgebra, xdims: Mapping[str, int], ydims: Mapping[str, int]):
    """The blockwise left fusion operator of the wrapped monad, per object.

    Returns ({object: entry}, Report); each entry carries the matrix,
    source/target dims, and an exact inverse or the rank.
    """
    B = That.B
    D, f = B.D, B.field
    rep = Report("wrapped fusion")
    out = {}
    for i in D.objects:
        pairs = [(a, b) for (a, b) in composable_pairs(D) if D.tgt(a) == i]
        into_i = D.arrows_into(i)
        tgt_pairs = [(c, d) for c in into_i for d in into_i]
        src_dims = [B.dim(a) * xdims[D.src(a)] * B.dim(b) * ydims[D.src(b)] for (a, b) in pairs]
        tgt_dims = [B.dim(c) * xdims[D.src(c)] * B.dim(d) * ydims[D.src(d)] for (c, d) in tgt_pairs]
        blocks = {}
        for t, (a, b) in enumerate(pairs):
            target = (a, D.comp(a, b))
            blocks[(tgt_pairs.index(target), t)] = fusion_at(
                B, "left", a, b, xdims[D.src(a)], ydims[D.src(b)])
        h = assemble_blocks(f, tgt_dims, src_dims, blocks)
        inv = h.try_invert()
        entry = {"matrix": h, "source_dim": sum(src_dims), "target_dim": sum(tgt_dims)}
        if isinstance(inv, NotInvertible):
            entry["invertible"] = False
            entry["rank"] = inv.rank
            rep.fail(f"fusion@{i}", f"source dim {sum(src_dims)}, target dim {sum(tgt_dims)}, "
                                    f"rank {inv.rank}: NotInvertible")
        else:
            assert inv @ h == Matrix.identity(f, h.cols) and h @ inv == Matrix.identity(f, h.rows)
            entry["invertible"] = True
            entry["inverse"] = inv
            rep.ok(f"fusion@{i}", f"dim {sum(src_dims)}, exact inverse verified")
        out[i] = entry
    return out, rep


# ----------------------------------------------------------------------
# graded modules and the module-category identification


@dataclass(frozen=True)
class GradedModule:
    """Family of spaces over the objects with one action of the wrapped monad each."""

    spaces: Mapping[str, LabeledSpace]
    actions: Mapping[str, Matrix]  # per object i: +_{a: tgt a = i} M_a (x) X_{src a} -> X_i

    def dim(self, i: str) -> int:
        return self.spaces[i].dim


def to_graded(B: Polybialgebra, X: PolyModule) -> GradedModule:
    D, f = B.D, B.field
    actions = {}
    for i in D.objects:
        into_i = D.arrows_into(i)
        col_dims = [B.dim(a) * X.dim(D.src(a)) for a in into_i]
        blocks = {(0, t): X.actions[a] for t, a in enumerate(into_i)}
        actions[i] = assemble_blocks(f, [X.dim(i)], col_dims, blocks)
    return GradedModule(dict(X.spaces), actions)


def from_graded(B: Polybialgebra, G: GradedModule) -> PolyModule:
    D = B.D
    actions = {}
    for i in D.objects:
        into_i = D.arrows_into(i)
        off = 0
        r = G.actions[i]
        for a in into_i:
            w = B.dim(a) * G.dim(D.src(a))
            cols = []
            for row in range(r.rows):
                cols.extend(r.entries[row * r.cols + off: row * r.cols + off + w])
            actions[a] = Matrix(B.field, r.rows, w, cols)
            off += w
        if off != r.cols:
            raise ShapeMismatch(f"graded action at {i} has extra columns")
    return PolyModule(dict(G.spaces), actions)


def validate_graded(That: TotalAlgebra, G: GradedModule) -> Report:
    """Monad-module axioms for the wrapped monad, assembled per object."""
    B = That.B
    D, f = B.D, B.field
    rep = Report("graded module axioms")
    for i in D.objects:
        into_i = D.arrows_into(i)
        pairs = [(a, b) for (a, b) in composable_pairs(D) if D.tgt(a) == i]
        pair_dims = [B.dim(a) * B.dim(b) * G.dim(D.src(b)) for (a, b) in pairs]
        # mu-hat at i : block (a,b) -> block ab of T-hat X at i
        tx_dims = [B.dim(c) * G.dim(D.src(c)) for c in into_i]
        mu_blocks = {}
        for t, (a, b) in enumerate(pairs):
            ab = D.comp(a, b)
            mu_blocks[(into_i.index(ab), t)] = kron(B.mult[(a, b)], B.ident(G.dim(D.src(b))))
        mu_hat = assemble_blocks(f, tx_dims, pair_dims, mu_blocks)
        # T-hat(r) at i : block (a,b) -> block a, inner action r at src(a)
        tr_blocks = {}
        for t, (a, b) in enumerate(pairs):
            j = D.src(a)
            into_j = D.arrows_into(j)
            inner_dims = [B.dim(c) * G.dim(D.src(c)) for c in into_j]
            # M_a (x) (block b of (T-hat X)_j) -> M_a (x) X_j, then placed at block a
            sel = into_j.index(b)
            inner = {(0, sel): kron(B.ident(B.dim(a)), _block_of(G.actions[j], inner_dims, sel, f))}
            tr_blocks[(into_i.index(a), t)] = inner[(0, sel)]
        tr = assemble_blocks(f, tx_dims, pair_dims, tr_blocks)
        lhs = G.actions[i] @ mu_hat
        rhs = G.actions[i] @ tr
        rep.record(f"assoc@{i}", lhs == rhs, witness=None if lhs == rhs else lhs - rhs)
        # unit: insert u_i (x) X_i at block id_i
        e = D.id_of(i)
        ins_blocks = {(into_i.index(e), 0): kron(B.units[i], B.ident(G.dim(i)))}
        ins = assemble_blocks(f, tx_dims, [G.dim(i)], ins_blocks)
        got = G.actions[i] @ ins
        rep.record(f"unital@{i}", got == Matrix.identity(f, G.dim(i)))
    return rep


def _block_of(r: Matrix, col_dims, idx: int, f) -> Matrix:
    off = sum(col_dims[:idx])
    w = col_dims[idx]
    cols = []
    for row in range(r.rows):
        cols.extend(r.entries[row * r.cols + off: row * r.cols + off + w])
    return Matrix(f, r.rows, w, cols)


def tensor_graded(That: TotalAlgebra, G: GradedModule, H: GradedModule) -> GradedModule:
    """Tensor through the wrapped comonoidal structure: block a splits to (a, a)."""
    B = That.B
    D, f = B.D, B.field
    spaces = {i: G.spaces[i].tensor(H.spaces[i]) for i in D.objects}
    actions = {}
    for i in D.objects:
        into_i = D.arrows_into(i)
        src_dims = [B.dim(a) * G.dim(D.src(a)) * H.dim(D.src(a)) for a in into_i]
        gx = [B.dim(a) * G.dim(D.src(a)) for a in into_i]
        hx = [B.dim(a) * H.dim(D.src(a)) for a in into_i]
        gtot, htot = sum(gx), sum(hx)
        goffs = [sum(gx[:t]) for t in range(len(gx))]
        hoffs = [sum(hx[:t]) for t in range(len(hx))]
        cols = sum(src_dims)
        zero = f.zero()
        t2 = [zero] * (gtot * htot * cols)
        coff = 0
        for t, a in enumerate(into_i):
            j = D.src(a)
            split = comonoidal_split(B, a, G.dim(j), H.dim(j))
            # split: M_a Gj Hj -> (M_a Gj) (M_a Hj); route into blocks (a of G, a of H)
            for r in range(split.rows):
                p, q = divmod(r, hx[t])
                row = (goffs[t] + p) * htot + (hoffs[t] + q)
                for c in range(split.cols):
                    v = split.entries[r * split.cols + c]
                    if v:
                        t2[row * cols + coff + c] = v
            coff += src_dims[t]
        t2m = Matrix(f, gtot * htot, cols, t2)
        actions[i] = kron(G.actions[i], H.actions[i]) @ t2m
    return GradedModule(spaces, actions)


def module_roundtrip(B: Polybialgebra, X: PolyModule, Y: PolyModule | None = None) -> Report:
    """Convert to a graded module and back: the identity on the nose.

    With a second module, also check that wrapping commutes with the two
    tensor constructions (monoidal identification).
    """
    rep = Report("module round trip")
    That = wrap(B)
    G = to_graded(B, X)
    rep.extend(validate_graded(That, G), "graded ")
    back = from_graded(B, G)
    same = dict(back.actions) == dict(X.actions) and dict(back.spaces) == dict(X.spaces)
    rep.record("roundtrip-exact", same)
    if Y is not None:
        lhs = to_graded(B, tensor_modules(B, X, Y))
        rhs = tensor_graded(That, G, to_graded(B, Y))
        agree = all(lhs.actions[i] == rhs.actions[i] for i in B.D.objects)
        rep.record("tensor-compatible", agree)
    return rep
