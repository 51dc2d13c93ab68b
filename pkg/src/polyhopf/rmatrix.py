"""R-matrices and induced braidings on module categories.

An R-matrix is a family of elements R_i in A_i (x) A_i over the unit
algebras A_i = M_{id_i}, subject to a compatibility axiom along every
morphism of the source.  Acceptance is operational: the axiom holds
exactly with free coordinates, and the induced transposition

    tau_{X,Y} = (sigma_{id} (x) rho_{id}) R_{X,Y},
    R_{X,Y}(x (x) y) = sum R2 (x) y (x) R1 (x) x

is a braiding on modules, checked on free modules up to the probe bound:
it is a module morphism, invertible, natural against free-functor images,
and satisfies both hexagons.  The probe bound is recorded in the report.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dfield
from typing import Mapping

from .exact import Matrix, NotInvertible, ShapeMismatch, kron, kron_all, perm_tensor
from .fincat import FunctorData
from .modrep import (
    ModuleMorphism,
    PolyModule,
    assemble_blocks,
    free_module,
    pullback_module,
    tensor_modules,
    validate_module_morphism,
)
from .polyalg import Polybialgebra, comonoidal_split
from .report import Report


class RMatrixInvalid(ValueError):
    pass


@dataclass(frozen=True)
class RMatrixData:
    """Per object i: a column vector in A_i (x) A_i (A_i the unit algebra at i)."""

    elements: Mapping[str, Matrix]


@dataclass
class BraidingReport:
    report: Report = dfield(default_factory=lambda: Report("R-matrix and braiding"))
    max_dim: int = 0

    @property
    def passed(self) -> bool:
        return self.report.passed


def _check_shapes(B: Polybialgebra, R: RMatrixData) -> None:
    for i in B.D.objects:
        dA = B.dim(B.D.id_of(i))
        r = R.elements.get(i)
        if r is None or (r.rows, r.cols) != (dA * dA, 1):
            raise ShapeMismatch(f"R at {i} must be a {dA * dA}x1 column")
        if r.field != B.field:
            raise ShapeMismatch(f"R at {i} over the wrong field")


def r_transform(B: Polybialgebra, R: RMatrixData, i: str, dx: int, dy: int) -> Matrix:
    """R_{X,Y} : X Y -> A_i Y A_i X on free coordinates (second leg first)."""
    dA = B.dim(B.D.id_of(i))
    f = B.field
    ins = kron_all(R.elements[i], B.ident(dx), B.ident(dy))
    # source legs after insertion: (A1, A2, X, Y) -> target (A2, Y, A1, X)
    perm = perm_tensor(f, (dA, dA, dx, dy), (1, 3, 0, 2))
    return perm @ ins


def compat_sides(B: Polybialgebra, R: RMatrixData, a: str, dx: int, dy: int) -> tuple[Matrix, Matrix]:
    """Both sides of the compatibility axiom along a, with free coordinates."""
    D = B.D
    j, i = D.src(a), D.tgt(a)
    ej, ei = D.id_of(j), D.id_of(i)
    dAj = B.dim(ej)
    da = B.dim(a)
    lhs = kron(kron(B.mult[(a, ej)], B.ident(dy)), kron(B.mult[(a, ej)], B.ident(dx))) \
        @ comonoidal_split(B, a, dAj * dy, dAj * dx) \
        @ kron(B.ident(da), r_transform(B, R, j, dx, dy))
    rhs = kron(kron(B.mult[(ei, a)], B.ident(dy)), kron(B.mult[(ei, a)], B.ident(dx))) \
        @ r_transform(B, R, i, da * dx, da * dy) \
        @ comonoidal_split(B, a, dx, dy)
    return lhs, rhs


def braiding_component(B: Polybialgebra, R: RMatrixData, X: PolyModule, Y: PolyModule, i: str) -> Matrix:
    """tau at object i: act with both legs of R_i after transposing."""
    e = B.D.id_of(i)
    return kron(Y.actions[e], X.actions[e]) @ r_transform(B, R, i, X.dim(i), Y.dim(i))


def induced_braiding(B: Polybialgebra, R: RMatrixData, X: PolyModule, Y: PolyModule) -> ModuleMorphism:
    """The transposition X (x) Y -> Y (x) X; must intertwine the actions."""
    _check_shapes(B, R)
    tau = ModuleMorphism({i: braiding_component(B, R, X, Y, i) for i in B.D.objects})
    chk = validate_module_morphism(B, tau, tensor_modules(B, X, Y), tensor_modules(B, Y, X))
    if not chk.passed:
        raise RMatrixInvalid("induced transposition is not a module morphism:\n" + chk.as_text())
    return tau


def _free_functor_image(B: Polybialgebra, h: Mapping[str, Matrix]) -> dict[str, Matrix]:
    """The free-module functor applied to a componentwise linear map."""
    D, f = B.D, B.field
    out = {}
    for i in D.objects:
        into_i = D.arrows_into(i)
        src_dims = [B.dim(a) * h[D.src(a)].cols for a in into_i]
        tgt_dims = [B.dim(a) * h[D.src(a)].rows for a in into_i]
        blocks = {(t, t): kron(B.ident(B.dim(a)), h[D.src(a)]) for t, a in enumerate(into_i)}
        out[i] = assemble_blocks(f, tgt_dims, src_dims, blocks)
    return out


def validate_rmatrix(B: Polybialgebra, R: RMatrixData, max_dim: int = 2, seed: int = 0,
                     trials: int = 2) -> BraidingReport:
    """Compatibility along every morphism, then braiding probes on free modules."""
    _check_shapes(B, R)
    out = BraidingReport(max_dim=max_dim)
    rep = out.report
    rng = random.Random(seed)
    D, f = B.D, B.field
    for m in D.morphisms:
        a = m.name
        for (dx, dy) in ((1, 1), (2, 1), (1, 2)):
            lhs, rhs = compat_sides(B, R, a, dx, dy)
            rep.record(f"compat({a})@{dx}x{dy}", lhs == rhs,
                       witness=None if lhs == rhs else lhs - rhs)
    frees = {}
    for d in range(1, max_dim + 1):
        frees[d] = free_module(B, {i: d for i in D.objects})
    for dx in range(1, max_dim + 1):
        for dy in range(1, max_dim + 1):
            X, Y = frees[dx], frees[dy]
            try:
                tau = induced_braiding(B, R, X, Y)
            except RMatrixInvalid:
                rep.fail(f"morphism@{dx}x{dy}", "transposition is not a module morphism")
                continue
            rep.ok(f"morphism@{dx}x{dy}")
            inv_ok = tau.is_invertible()
            rep.record(f"invertible@{dx}x{dy}", inv_ok)
            for dz in range(1, max_dim + 1):
                Z = frees[dz]
                hex_ok = True
                hex2_ok = True
                for i in D.objects:
                    xd, yd, zd = X.dim(i), Y.dim(i), Z.dim(i)
                    # tau_{X, Y(x)Z} = (Y (x) tau_{X,Z})(tau_{X,Y} (x) Z)
                    lhs = braiding_component(B, R, X, tensor_modules(B, Y, Z), i)
                    rhs = kron(B.ident(yd), braiding_component(B, R, X, Z, i)) \
                        @ kron(braiding_component(B, R, X, Y, i), B.ident(zd))
                    hex_ok = hex_ok and lhs == rhs
                    # tau_{X(x)Y, Z} = (tau_{X,Z} (x) Y)(X (x) tau_{Y,Z})
                    lhs = braiding_component(B, R, tensor_modules(B, X, Y), Z, i)
                    rhs = kron(braiding_component(B, R, X, Z, i), B.ident(yd)) \
                        @ kron(B.ident(xd), braiding_component(B, R, Y, Z, i))
                    hex2_ok = hex2_ok and lhs == rhs
                rep.record(f"hexagon-1@{dx}x{dy}x{dz}", hex_ok)
                rep.record(f"hexagon-2@{dx}x{dy}x{dz}", hex2_ok)
            for t in range(trials):
                hmap = {i: Matrix.from_rows(f, [[rng.randrange(7) for _ in range(dx)]
                                                for _ in range(dx)]) for i in D.objects}
                # naturality against F(h) (x) id for a random h on the coordinates
                fh = _free_functor_image(B, hmap)
                nat_ok = True
                for i in D.objects:
                    lhs = braiding_component(B, R, frees[dx], Y, i) \
                        @ kron(fh[i], B.ident(Y.dim(i)))
                    rhs = kron(B.ident(Y.dim(i)), fh[i]) \
                        @ braiding_component(B, R, frees[dx], Y, i)
                    nat_ok = nat_ok and lhs == rhs
                rep.record(f"natural@{dx}x{dy}#{t}", nat_ok)
    rep.note(f"free-module probe dims: up to {max_dim}; naturality trials: {trials} (seed {seed})")
    return out


def braided_restriction_check(B: Polybialgebra, R: RMatrixData, fun: FunctorData,
                              max_dim: int = 2) -> Report:
    """Pulling back the braiding equals the braiding of the pulled-back structure."""
    from .modrep import pullback

    rep = Report("braided restriction")
    Bp = pullback(B, fun)
    Rp = RMatrixData({j: R.elements[fun.on_obj(j)] for j in fun.source.objects})
    for d in range(1, max_dim + 1):
        X = free_module(B, {i: d for i in B.D.objects})
        Y = free_module(B, {i: d for i in B.D.objects})
        Xp, Yp = pullback_module(fun, X), pullback_module(fun, Y)
        for j in fun.source.objects:
            lhs = braiding_component(Bp, Rp, Xp, Yp, j)
            rhs = braiding_component(B, R, X, Y, fun.on_obj(j))
            rep.record(f"restrict@{j}@dim{d}", lhs == rhs)
    return rep
