"""The lift: unit algebras, bimodules, relative tensors, and the strength checks.

Over each object i the space A_i = M_{id_i} is an associative unital
algebra, and each M_a is an A_{tgt}-A_{src} bimodule through the products
with identities.  Tensoring over the middle algebra is a cokernel; the
products descend to the quotients, and for a transitive Hopf structure the
descended products are invertible, the quotient of the unit is a line, and
the descended comonoidal splits are invertible on free modules.  All of it
is exact linear algebra; the free-module probe bound is recorded in the
report.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from typing import Mapping

from .exact import (
    LabeledSpace,
    Matrix,
    NotInvertible,
    factor_through_projection,
    kron,
)
from .fincat import composable_pairs
from .polyalg import Polybialgebra, comonoidal_split, is_hopf, is_transitive
from .report import Report


class MiddleMismatch(ValueError):
    pass


@dataclass(frozen=True)
class FinAlgebra:
    """A finite-dimensional associative unital algebra by structure constants."""

    space: LabeledSpace
    mult: Matrix  # A (x) A -> A
    unit: Matrix  # k -> A

    @property
    def dim(self) -> int:
        return self.space.dim

    def validate(self) -> Report:
        rep = Report("algebra axioms")
        f = self.mult.field
        n = self.dim
        ident = Matrix.identity(f, n)
        lhs = self.mult @ kron(self.mult, ident)
        rhs = self.mult @ kron(ident, self.mult)
        rep.record("assoc", lhs == rhs)
        rep.record("unit-left", self.mult @ kron(self.unit, ident) == ident)
        rep.record("unit-right", self.mult @ kron(ident, self.unit) == ident)
        return rep


@dataclass(frozen=True)
class Bimodule:
    """A left-A right-C bimodule: commuting unital associative actions."""

    left_alg: FinAlgebra
    right_alg: FinAlgebra
    space: LabeledSpace
    left: Matrix   # A (x) M -> M
    right: Matrix  # M (x) C -> M

    @property
    def dim(self) -> int:
        return self.space.dim

    def validate(self) -> Report:
        rep = Report("bimodule axioms")
        f = self.left.field
        n = self.dim
        ident = Matrix.identity(f, n)
        A, C = self.left_alg, self.right_alg
        ia, ic = Matrix.identity(f, A.dim), Matrix.identity(f, C.dim)
        rep.record("left-assoc", self.left @ kron(A.mult, ident) == self.left @ kron(ia, self.left))
        rep.record("left-unital", self.left @ kron(A.unit, ident) == ident)
        rep.record("right-assoc", self.right @ kron(ident, C.mult) == self.right @ kron(self.right, ic))
        rep.record("right-unital", self.right @ kron(ident, C.unit) == ident)
        lhs = self.left @ kron(ia, self.right)
        rhs = self.right @ kron(self.left, ic)
        rep.record("actions-commute", lhs == rhs)
        return rep


def unit_algebras(B: Polybialgebra) -> dict[str, FinAlgebra]:
    out = {}
    for i in B.D.objects:
        e = B.D.id_of(i)
        out[i] = FinAlgebra(B.spaces[e], B.mult[(e, e)], B.units[i])
    return out


def bimodule_of(B: Polybialgebra, a: str) -> Bimodule:
    D = B.D
    i, j = D.tgt(a), D.src(a)
    algs = unit_algebras(B)
    return Bimodule(
        left_alg=algs[i],
        right_alg=algs[j],
        space=B.spaces[a],
        left=B.mult[(D.id_of(i), a)],
        right=B.mult[(a, D.id_of(j))],
    )


@dataclass(frozen=True)
class RelativeTensor:
    """M (x)_B N: the quotient space with its projection and induced actions."""

    dim: int
    projection: Matrix  # M (x) N -> quotient
    bimodule: Bimodule


def relative_tensor(M: Bimodule, N: Bimodule) -> RelativeTensor:
    """Coequalize the two middle actions; induced outer actions must descend."""
    if M.right_alg != N.left_alg:
        raise MiddleMismatch("middle algebras differ")
    f = M.left.field
    im, in_ = Matrix.identity(f, M.dim), Matrix.identity(f, N.dim)
    diff = kron(M.right, in_) - kron(im, N.left)
    proj, qdim = diff.cokernel()
    A, C = M.left_alg, N.right_alg
    ia, ic = Matrix.identity(f, A.dim), Matrix.identity(f, C.dim)
    left_raw = proj @ kron(M.left, in_)
    left = factor_through_projection(kron(ia, proj), left_raw)
    right_raw = proj @ kron(im, N.right)
    right = factor_through_projection(kron(proj, ic), right_raw)
    if left is None or right is None:
        raise ValueError("outer actions do not descend to the quotient (broken bimodules)")
    space = LabeledSpace(qdim, tuple(f"q{k}" for k in range(qdim)))
    return RelativeTensor(qdim, proj, Bimodule(A, C, space, left, right))


def lifted_product(B: Polybialgebra, a: str, b: str) -> tuple[Matrix, RelativeTensor]:
    """The product m_{a,b} descended to M_a (x)_{A_j} M_b (exact well-definedness)."""
    from .polyalg import NotComposable

    if (a, b) not in B.mult:
        raise NotComposable(f"({a},{b})")
    rt = relative_tensor(bimodule_of(B, a), bimodule_of(B, b))
    mu = factor_through_projection(rt.projection, B.mult[(a, b)])
    if mu is None:
        raise ValueError(f"product ({a},{b}) does not descend: middle associativity broken")
    return mu, rt


def lifted_unit(B: Polybialgebra, a: str) -> tuple[Matrix, int, Matrix | None]:
    """M_a (x)_{A_j} k_eps: (projection, dim, descended counit or None)."""
    j = B.D.src(a)
    e = B.D.id_of(j)
    f = B.field
    ia = Matrix.identity(f, B.dim(a))
    diff = B.mult[(a, e)] - kron(ia, B.counit[e])
    proj, qdim = diff.cokernel()
    t0 = factor_through_projection(proj, B.counit[a])
    return proj, qdim, t0


def lifted_split(B: Polybialgebra, a: str, dv: int, dw: int) -> Matrix | None:
    """The comonoidal split descended to free modules A_j (x) V and A_j (x) W.

    Returns the induced map M_a (x)_{A_j}(P (x) Q) -> (M_a (x)_{A_j} P) (x)
    (M_a (x)_{A_j} Q), or None if it fails to descend.
    """
    D, f = B.D, B.field
    j = D.src(a)
    e = D.id_of(j)
    dA = B.dim(e)
    dP, dQ = dA * dv, dA * dw
    ima = Matrix.identity(f, B.dim(a))
    right_a = B.mult[(a, e)]

    lP = kron(B.mult[(e, e)], Matrix.identity(f, dv))
    lQ = kron(B.mult[(e, e)], Matrix.identity(f, dw))
    lPQ = kron(lP, lQ) @ comonoidal_split(B, e, dP, dQ)

    def pi(l_act: Matrix, d: int) -> Matrix:
        diff = kron(right_a, Matrix.identity(f, d)) - kron(ima, l_act)
        proj, _ = diff.cokernel()
        return proj

    pi_P, pi_Q, pi_PQ = pi(lP, dP), pi(lQ, dQ), pi(lPQ, dP * dQ)
    raw = kron(pi_P, pi_Q) @ comonoidal_split(B, a, dP, dQ)
    return factor_through_projection(pi_PQ, raw)


@dataclass
class LiftReport:
    """Per-pair and per-morphism lift data with the merged verdict report."""

    products: dict = dfield(default_factory=dict)   # (a,b) -> {dim, matrix, invertible}
    units: dict = dfield(default_factory=dict)      # a -> {dim, t0, invertible}
    splits: dict = dfield(default_factory=dict)     # (a, dv, dw) -> {invertible}
    report: Report = dfield(default_factory=lambda: Report("lift fundamental check"))

    @property
    def passed(self) -> bool:
        return self.report.passed


def lift_fundamental_check(B: Polybialgebra, max_dim: int = 1) -> LiftReport:
    """Verify the lift is strong comonoidal of action type, exactly.

    (a) every descended product is invertible (the lifted unit maps are
    identities by construction); (b) every M_a (x)_{A_j} k_eps is a line
    with invertible descended counit; (c) every descended comonoidal split
    on free modules with coordinate dims up to max_dim is invertible.
    Hypothesis failures are recorded and the diagnostics still run.
    """
    out = LiftReport()
    rep = out.report
    hopf = is_hopf(B)
    trans = is_transitive(B)
    rep.record("hypothesis-hopf", hopf.is_hopf,
               "fusion operators all invertible" if hopf.is_hopf else "fusion operator singular")
    rep.record("hypothesis-transitive", trans.passed)
    rep.note("lifted units are identities by construction")

    for (a, b) in sorted(composable_pairs(B.D)):
        mu, rt = lifted_product(B, a, b)
        inv = mu.try_invert()
        good = not isinstance(inv, NotInvertible)
        out.products[(a, b)] = {"dim": rt.dim, "matrix": mu, "invertible": good}
        rep.record(f"(a) lifted-product({a},{b})", good,
                   f"quotient dim {rt.dim} -> dim {B.dim(B.D.comp(a, b))}")

    for m in B.D.morphisms:
        a = m.name
        proj, qdim, t0 = lifted_unit(B, a)
        good = qdim == 1 and t0 is not None and not isinstance(t0.try_invert(), NotInvertible)
        out.units[a] = {"dim": qdim, "t0": t0, "invertible": good}
        rep.record(f"(b) lifted-unit({a})", good, f"dim {qdim}")

    dims = [(dv, dw) for dv in range(1, max_dim + 1) for dw in range(1, max_dim + 1)]
    for m in B.D.morphisms:
        a = m.name
        for (dv, dw) in dims:
            t2 = lifted_split(B, a, dv, dw)
            good = t2 is not None and not isinstance(t2.try_invert(), NotInvertible)
            out.splits[(a, dv, dw)] = {"invertible": good}
            rep.record(f"(c) lifted-split({a})@{dv}x{dw}", good)
    rep.note(f"free-module probe dims: up to {max_dim}")
    return out
