"""Hopf modules, Hopf representations, coinvariants, and both decompositions.

A Hopf representation is a representation W with a comodule coaction
delta_a : W_a -> M_a (x) W_a per morphism, compatible with the actions; a
Hopf module is a module with a coaction of the direct-sum coalgebra
+_{a : tgt a = i} M_a at each object.  Coinvariants are kernels of
(coaction - unit coaction).  The decomposition theorems produce explicit
mutually inverse matrices between a Hopf structure and the free one on its
coinvariants; hypothesis failures are reported and the diagnostics still
run, so a failing instance exhibits a concrete non-invertible comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from typing import Mapping

from .exact import (
    LabeledSpace,
    Matrix,
    NotInvertible,
    factor_through_injection,
    kron,
    kron_all,
    perm_tensor,
)
from .fincat import NotGroupoid, composable_pairs, is_groupoid
from .modrep import (
    ModuleMorphism,
    PolyModule,
    PolyRepresentation,
    assemble_blocks,
    distribute,
    free_module,
    free_representation,
    validate_module,
    validate_representation,
    validate_representation_morphism,
)
from .polyalg import Polybialgebra, is_hopf
from .report import Report


@dataclass(frozen=True)
class HopfModule:
    base: PolyModule
    coactions: Mapping[str, Matrix]  # per object i: X_i -> (+_{tgt a = i} M_a) (x) X_i


@dataclass(frozen=True)
class HopfRepresentation:
    base: PolyRepresentation
    coactions: Mapping[str, Matrix]  # per morphism a: W_a -> M_a (x) W_a


@dataclass(frozen=True)
class CoinvariantData:
    spaces: Mapping[str, LabeledSpace]
    inclusions: Mapping[str, Matrix]

    def dim(self, key: str) -> int:
        return self.spaces[key].dim


# ----------------------------------------------------------------------
# the direct-sum coalgebra at an object


def sum_coalgebra(B: Polybialgebra, i: str):
    """(+_{tgt a = i} M_a, Delta, eps): blocks comultiply into their own square."""
    D, f = B.D, B.field
    into_i = D.arrows_into(i)
    dims = [B.dim(a) for a in into_i]
    total = sum(dims)
    offs = [sum(dims[:t]) for t in range(len(dims))]
    zero = f.zero()
    delta = [zero] * (total * total * total)
    eps = [zero] * total
    for t, a in enumerate(into_i):
        d = B.comult[a]
        n = dims[t]
        for r in range(n * n):
            p, q = divmod(r, n)
            row = (offs[t] + p) * total + (offs[t] + q)
            for c in range(n):
                v = d.entries[r * n + c]
                if v:
                    delta[row * total + offs[t] + c] = v
        e = B.counit[a]
        for c in range(n):
            eps[offs[t] + c] = e.entries[c]
    return into_i, dims, Matrix(f, total * total, total, delta), Matrix(f, 1, total, eps)


def unit_coaction(B: Polybialgebra, i: str, xdim: int) -> Matrix:
    """X_i -> C_i (x) X_i inserting u_i in the identity block."""
    into_i, dims, _, _ = sum_coalgebra(B, i)
    e = B.D.id_of(i)
    blocks = {(into_i.index(e), 0): kron(B.units[i], B.ident(xdim))}
    return assemble_blocks(B.field, [d * xdim for d in dims], [xdim], blocks)


# ----------------------------------------------------------------------
# validation


def validate_hopf_module(B: Polybialgebra, HM: HopfModule) -> Report:
    rep = validate_module(B, HM.base)
    rep.title = "Hopf module axioms"
    D, f = B.D, B.field
    X = HM.base
    for i in D.objects:
        into_i, dims, deltaC, epsC = sum_coalgebra(B, i)
        xi = X.dim(i)
        d = HM.coactions[i]
        total = sum(dims)
        if (d.rows, d.cols) != (total * xi, xi):
            rep.fail(f"coaction-shape@{i}", f"{d.rows}x{d.cols}, want {total * xi}x{xi}")
            continue
        counit_ok = kron(epsC, B.ident(xi)) @ d == Matrix.identity(f, xi)
        rep.record(f"comodule-counit@{i}", counit_ok)
        lhs = kron(deltaC, B.ident(xi)) @ d
        rhs = kron(Matrix.identity(f, total), d) @ d
        rep.record(f"comodule-coassoc@{i}", lhs == rhs)
    for m in D.morphisms:
        a, j, i = m.name, m.src, m.tgt
        into_j = D.arrows_into(j)
        into_i = D.arrows_into(i)
        xj, xi = X.dim(j), X.dim(i)
        da = B.dim(a)
        lhs = HM.coactions[i] @ X.actions[a]
        src_blocks = [B.dim(b) * xj for b in into_j]
        tgt_blocks = [B.dim(c) * xi for c in into_i]
        blocks = {}
        for t, b in enumerate(into_j):
            db = B.dim(b)
            inner = kron(B.mult[(a, b)], X.actions[a]) \
                @ kron(perm_tensor(f, (da, da, db), (0, 2, 1)), B.ident(xj)) \
                @ kron_all(B.comult[a], B.ident(db), B.ident(xj))
            blocks[(into_i.index(D.comp(a, b)), t)] = inner
        rhs = assemble_blocks(f, tgt_blocks, [da * s for s in src_blocks], blocks) \
            @ distribute(f, da, src_blocks) \
            @ kron(B.ident(da), HM.coactions[j])
        rep.record(f"compatible({a})", lhs == rhs, witness=None if lhs == rhs else lhs - rhs)
    return rep


def validate_hopf_representation(B: Polybialgebra, HR: HopfRepresentation) -> Report:
    rep = validate_representation(B, HR.base)
    rep.title = "Hopf representation axioms"
    D, f = B.D, B.field
    W = HR.base
    for m in D.morphisms:
        a = m.name
        da, wa = B.dim(a), W.dim(a)
        d = HR.coactions[a]
        if (d.rows, d.cols) != (da * wa, wa):
            rep.fail(f"coaction-shape({a})", f"{d.rows}x{d.cols}, want {da * wa}x{wa}")
            continue
        counit_ok = kron(B.counit[a], B.ident(wa)) @ d == Matrix.identity(f, wa)
        rep.record(f"comodule-counit({a})", counit_ok)
        lhs = kron(B.comult[a], B.ident(wa)) @ d
        rhs = kron(B.ident(da), d) @ d
        rep.record(f"comodule-coassoc({a})", lhs == rhs)
    for (a, b) in composable_pairs(D):
        ab = D.comp(a, b)
        da, db, wb = B.dim(a), B.dim(b), W.dim(b)
        lhs = HR.coactions[ab] @ W.actions[(a, b)]
        rhs = kron(B.mult[(a, b)], W.actions[(a, b)]) \
            @ kron(perm_tensor(f, (da, da, db), (0, 2, 1)), B.ident(wb)) \
            @ kron_all(B.comult[a], B.ident(db), B.ident(wb)) \
            @ kron(B.ident(da), HR.coactions[b])
        rep.record(f"compatible({a},{b})", lhs == rhs, witness=None if lhs == rhs else lhs - rhs)
    return rep


# ----------------------------------------------------------------------
# free constructions


def free_hopf_representation(B: Polybialgebra, dims: Mapping[str, int]) -> HopfRepresentation:
    """W_a = M_a (x) X_{src a}, product action, comultiplication coaction."""
    W = free_representation(B, dims)
    coactions = {}
    for m in B.D.morphisms:
        a = m.name
        coactions[a] = kron(B.comult[a], B.ident(dims[m.src]))
    return HopfRepresentation(W, coactions)


def free_hopf_module(B: Polybialgebra, dims: Mapping[str, int]) -> HopfModule:
    """The free module with the blockwise comultiplication coaction."""
    D, f = B.D, B.field
    X = free_module(B, dims)
    coactions = {}
    for i in D.objects:
        into_i = D.arrows_into(i)
        xblocks = [B.dim(a) * dims[D.src(a)] for a in into_i]
        xoffs = [sum(xblocks[:t]) for t in range(len(xblocks))]
        cdims = [B.dim(c) for c in into_i]
        coffs = [sum(cdims[:t]) for t in range(len(cdims))]
        xi = sum(xblocks)
        total_c = sum(cdims)
        zero = f.zero()
        out = [zero] * (total_c * xi * xi)
        for t, a in enumerate(into_i):
            da, vj = B.dim(a), dims[D.src(a)]
            d = B.comult[a]
            for xm in range(da):
                for xv in range(vj):
                    col = xoffs[t] + xm * vj + xv
                    for r in range(da * da):
                        v = d.entries[r * da + xm]
                        if v:
                            z, p = divmod(r, da)
                            row = (coffs[t] + z) * xi + (xoffs[t] + p * vj + xv)
                            out[row * xi + col] = v
        coactions[i] = Matrix(f, total_c * xi, xi, out)
    return HopfModule(X, coactions)


# ----------------------------------------------------------------------
# coinvariants


def coinvariants(B: Polybialgebra, H) -> CoinvariantData:
    """Kernels of (coaction - unit coaction), with exact inclusions.

    For a Hopf representation the relevant components sit at identities;
    for a Hopf module every object contributes.
    """
    spaces: dict[str, LabeledSpace] = {}
    inclusions: dict[str, Matrix] = {}
    if isinstance(H, HopfRepresentation):
        for i in B.D.objects:
            e = B.D.id_of(i)
            w = H.base.dim(e)
            diff = H.coactions[e] - kron(B.units[i], B.ident(w))
            iota = diff.kernel_basis()
            spaces[i] = LabeledSpace(iota.cols, tuple(f"c{i}.{k}" for k in range(iota.cols)))
            inclusions[i] = iota
    elif isinstance(H, HopfModule):
        for i in B.D.objects:
            xi = H.base.dim(i)
            diff = H.coactions[i] - unit_coaction(B, i, xi)
            iota = diff.kernel_basis()
            spaces[i] = LabeledSpace(iota.cols, tuple(f"c{i}.{k}" for k in range(iota.cols)))
            inclusions[i] = iota
    else:
        raise TypeError("expected a HopfRepresentation or a HopfModule")
    return CoinvariantData(spaces, inclusions)


# ----------------------------------------------------------------------
# decompositions


@dataclass
class Decomposition:
    theta: ModuleMorphism
    xi: ModuleMorphism
    coinv: CoinvariantData
    report: Report = dfield(default_factory=lambda: Report("decomposition"))

    @property
    def passed(self) -> bool:
        return self.report.passed


def decompose_hopf_representation(B: Polybialgebra, HR: HopfRepresentation) -> Decomposition:
    """The comparison with the free Hopf representation on the coinvariants.

    theta_a acts along a on the included coinvariants; xi_a inverts the
    (comultiply then act) map and factors through the inclusion.  Both
    composites are asserted to be identities, exactly.
    """
    D, f = B.D, B.field
    rep = Report("Hopf representation decomposition")
    fus = is_hopf(B)
    rep.record("hypothesis-left-hopf", fus.is_left_hopf,
               "" if fus.is_left_hopf else "HypothesisFailure(side=left)")
    conservative = all(B.dim(m.name) > 0 for m in D.morphisms)
    rep.record("hypothesis-conservative", conservative,
               "" if conservative else "HypothesisFailure(conservativity): some M_a = 0")
    coinv = coinvariants(B, HR)
    W = HR.base
    theta: dict[str, Matrix] = {}
    xi: dict[str, Matrix] = {}
    for m in D.morphisms:
        a, j = m.name, m.src
        e = D.id_of(j)
        da, wj, wa = B.dim(a), W.dim(e), W.dim(a)
        iota = coinv.inclusions[j]
        theta[a] = W.actions[(a, e)] @ kron(B.ident(da), iota)
        phi = kron(B.ident(da), W.actions[(a, e)]) @ kron(B.comult[a], B.ident(wj))
        phi_inv = phi.try_invert()
        if isinstance(phi_inv, NotInvertible):
            rep.fail(f"fusion-on-instance({a})",
                     f"(M_a (x) rho)(Delta (x) W) not invertible, rank {phi_inv.rank}")
            xi[a] = None
            continue
        xi_raw = phi_inv @ HR.coactions[a]
        xi_a = factor_through_injection(kron(B.ident(da), iota), xi_raw)
        if xi_a is None:
            rep.fail(f"xi-factors({a})", "xi does not land in the coinvariants")
            continue
        xi[a] = xi_a
        left = theta[a] @ xi_a == Matrix.identity(f, wa)
        right = xi_a @ theta[a] == Matrix.identity(f, da * coinv.dim(j))
        rep.record(f"theta.xi=id({a})", left)
        rep.record(f"xi.theta=id({a})", right)
    if all(v is not None for v in xi.values()):
        free = free_hopf_representation(B, {i: coinv.dim(i) for i in D.objects})
        # the free spaces are M_a (x) coinv; theta must be a morphism of representations
        mor = ModuleMorphism(theta)
        sub = validate_representation_morphism(B, mor, free.base, W)
        rep.extend(sub, "theta-morphism ")
        for m in D.morphisms:
            a = m.name
            lhs = HR.coactions[a] @ theta[a]
            rhs = kron(B.ident(B.dim(a)), theta[a]) @ free.coactions[a]
            rep.record(f"theta-comodule({a})", lhs == rhs)
    return Decomposition(ModuleMorphism(theta), ModuleMorphism({k: v for k, v in xi.items() if v is not None}),
                         coinv, rep)


def decompose_hopf_module(B: Polybialgebra, HM: HopfModule) -> Decomposition:
    """Classical Hopf-monad decomposition of the wrapped structure.

    Requires a groupoid source (else the wrap is not Hopf and the statement
    is refused).  Weak conservativity and conservative sums hold over a
    field whenever each object emits a nonzero space; recorded, then the
    explicit inverse pair is built per object.
    """
    D, f = B.D, B.field
    gpd, _ = is_groupoid(D)
    if not gpd:
        raise NotGroupoid("source category is not a groupoid; the wrapped monad is not Hopf")
    rep = Report("Hopf module decomposition")
    fus = is_hopf(B)
    rep.record("hypothesis-left-hopf", fus.is_left_hopf,
               "" if fus.is_left_hopf else "HypothesisFailure(side=left)")
    weakly = all(any(B.dim(a) > 0 for a in D.arrows_out_of(i)) for i in D.objects)
    rep.record("hypothesis-weakly-conservative", weakly,
               "" if weakly else "HypothesisFailure(weak conservativity)")
    rep.note("conservative sums: automatic over a field")
    X = HM.base
    coinv = coinvariants(B, HM)
    theta: dict[str, Matrix] = {}
    xi: dict[str, Matrix] = {}
    for i in D.objects:
        into_i = D.arrows_into(i)
        xi_dim = X.dim(i)
        src_dims = [B.dim(a) * X.dim(D.src(a)) for a in into_i]
        tgt_dims = [B.dim(c) * xi_dim for c in into_i]
        phi_blocks = {}
        for t, a in enumerate(into_i):
            phi_blocks[(t, t)] = kron(B.ident(B.dim(a)), X.actions[a]) \
                @ kron(B.comult[a], B.ident(X.dim(D.src(a))))
        phi = assemble_blocks(f, tgt_dims, src_dims, phi_blocks)
        phi_inv = phi.try_invert()
        if isinstance(phi_inv, NotInvertible):
            rep.fail(f"fusion-on-instance@{i}", f"rank {phi_inv.rank}")
            continue
        inj_blocks = {}
        coin_dims = []
        for t, a in enumerate(into_i):
            j = D.src(a)
            coin_dims.append(B.dim(a) * coinv.dim(j))
            inj_blocks[(t, t)] = kron(B.ident(B.dim(a)), coinv.inclusions[j])
        inj = assemble_blocks(f, src_dims, coin_dims, inj_blocks)
        # graded action at i: blocks rho_a side by side
        r_i = assemble_blocks(f, [xi_dim], src_dims,
                              {(0, t): X.actions[a] for t, a in enumerate(into_i)})
        theta[i] = r_i @ inj
        xi_raw = phi_inv @ HM.coactions[i]
        xi_i = factor_through_injection(inj, xi_raw)
        if xi_i is None:
            rep.fail(f"xi-factors@{i}", "xi does not land in the coinvariants")
            continue
        xi[i] = xi_i
        rep.record(f"theta.xi=id@{i}", theta[i] @ xi_i == Matrix.identity(f, xi_dim))
        rep.record(f"xi.theta=id@{i}", xi_i @ theta[i] == Matrix.identity(f, sum(coin_dims)))
    return Decomposition(ModuleMorphism(theta), ModuleMorphism(xi), coinv, rep)
