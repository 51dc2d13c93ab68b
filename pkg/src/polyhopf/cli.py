"""Command-line surface.

Exit codes: 0 = every requested check passed; 1 = a mathematical check
failed (the report carries witnesses); 2 = malformed input (parse errors,
shape or field mismatches, unknown fixtures).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .exact import FieldSpec, QQ, ShapeMismatch, FieldMismatch, prime_field
from .fincat import InvalidCategory, NotAFunctor, NotConnected, NotGroupoid
from .fileio import Malformed, parse_functor_file, parse_structure_file, serialize
from .fixtures import FIXTURE_NAMES, UnknownFixture, make_fixture
from .hopfstruct import (
    coinvariants,
    decompose_hopf_module,
    decompose_hopf_representation,
    validate_hopf_module,
    validate_hopf_representation,
)
from .lift import lift_fundamental_check
from .modrep import NotActionType, validate_module, validate_representation
from .polyalg import (
    check_fusion_identities,
    classical_antipode,
    is_hopf,
    is_transitive,
    validate_polybialgebra,
)
from .report import Report
from .rmatrix import RMatrixData, braided_restriction_check, validate_rmatrix
from .wrapup import wrap, wrapped_fusion


def _emit(report: Report, as_json: bool) -> int:
    if as_json:
        print(json.dumps(report.as_dict(), indent=2))
    else:
        print(report.as_text())
    return 0 if report.passed else 1


def _dims_arg(text: str, objects) -> dict[str, int]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        return {i: int(parts[0]) for i in objects}
    if len(parts) != len(objects):
        raise ValueError(f"need {len(objects)} dims (objects {', '.join(objects)}), got {len(parts)}")
    return {i: int(p) for i, p in zip(objects, parts)}


def _default_field() -> FieldSpec:
    env = os.environ.get("POLYHOPF_CHAR", "0")
    p = int(env)
    return QQ if p == 0 else prime_field(p)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polyhopf",
                                 description="exact checks for structure-constant Hopf polyalgebras")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name, **kw):
        p = sub.add_parser(name, **kw)
        p.add_argument("--json", action="store_true", help="machine-readable report")
        return p

    p = add("validate", help="validate the structure file and all attachments")
    p.add_argument("file")

    p = add("check", help="run one property check")
    p.add_argument("file")
    p.add_argument("--property", required=True,
                   choices=["bialgebra", "hopf", "transitive", "fusion-identities"])
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)

    p = add("wrapup", help="wrap into a single graded algebra")
    p.add_argument("file")
    p.add_argument("--out", help="write the total algebra as a structure file")

    p = add("wrapped-fusion", help="blockwise fusion operator of the wrapped monad")
    p.add_argument("file")
    p.add_argument("--dims", required=True, help="per-object dims for the first argument, e.g. 1,1")
    p.add_argument("--ydims", help="per-object dims for the second argument (default: same)")

    p = add("lift-check", help="strong comonoidal action-type check for the lift")
    p.add_argument("file")
    p.add_argument("--max-dim", type=int, default=1)

    p = add("coinv", help="coinvariants of the attached Hopf structure")
    p.add_argument("file")

    p = add("decompose", help="decompose the attached Hopf structure")
    p.add_argument("kind", choices=["rep", "mod"])
    p.add_argument("file")

    p = add("braiding", help="validate an R-matrix and its induced braiding")
    p.add_argument("file")
    p.add_argument("--rmatrix", help="structure file holding the rmatrix lines (default: main file)")
    p.add_argument("--max-dim", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)

    p = add("restrict", help="braided restriction along a functor")
    p.add_argument("file")
    p.add_argument("--functor", required=True)
    p.add_argument("--max-dim", type=int, default=2)

    ex = sub.add_parser("examples", help="fixture library")
    exsub = ex.add_subparsers(dest="excmd", required=True)
    g = exsub.add_parser("generate")
    g.add_argument("name")
    g.add_argument("--char", type=int, help="field characteristic (default: POLYHOPF_CHAR or 0)")
    g.add_argument("--out", help="output path (default: stdout)")
    exsub.add_parser("list")
    return ap


def run_command(argv) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return _dispatch(ns)
    except (Malformed, ShapeMismatch, FieldMismatch, InvalidCategory, NotAFunctor,
            UnknownFixture, FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def _dispatch(ns) -> int:
    if ns.cmd == "examples":
        if ns.excmd == "list":
            for name in FIXTURE_NAMES:
                print(name)
            return 0
        field = _default_field() if ns.char is None else (QQ if ns.char == 0 else prime_field(ns.char))
        fx = make_fixture(ns.name, field)
        text = serialize(fx.structure, rmatrix=fx.rmatrix)
        if ns.out:
            with open(ns.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0

    parsed = parse_structure_file(ns.file)
    B = parsed.structure

    if ns.cmd == "validate":
        rep = validate_polybialgebra(B)
        if parsed.module is not None:
            rep.extend(validate_module(B, parsed.module), "module ")
        if parsed.representation is not None:
            rep.extend(validate_representation(B, parsed.representation), "rep ")
        if parsed.hopf_representation is not None:
            rep.extend(validate_hopf_representation(B, parsed.hopf_representation), "hopfrep ")
        if parsed.hopf_module is not None:
            rep.extend(validate_hopf_module(B, parsed.hopf_module), "hopfmod ")
        if parsed.gradings:
            rep.note("graded total algebra: bialgebra axioms are not expected to hold")
        return _emit(rep, ns.json)

    if ns.cmd == "check":
        if ns.property == "bialgebra":
            rep = validate_polybialgebra(B)
        elif ns.property == "hopf":
            pre = validate_polybialgebra(B)
            if not pre.passed:
                return _emit(pre, ns.json)
            fus = is_hopf(B)
            rep = fus.report
            s = classical_antipode(B)
            if s is not None:
                rep.note(f"classical antipode (one-morphism source): {s!r}")
        elif ns.property == "transitive":
            rep = is_transitive(B)
        else:
            rep = check_fusion_identities(B, trials=ns.trials, seed=ns.seed)
        return _emit(rep, ns.json)

    if ns.cmd == "wrapup":
        That = wrap(B)
        rep = That.validate()
        if ns.out:
            from .polyalg import Polyalgebra, Polybialgebra
            from .fincat import standard_category
            from .exact import Matrix, direct_sum

            D1 = standard_category("terminal")
            f = B.field
            spaces = {"id": That.space}
            mult = {("id", "id"): That.mult}
            units = {"*": That.unit}
            comult = {"id": _total_comult(That)}
            counit = {"id": _total_counit(That)}
            total = Polybialgebra(Polyalgebra(D1, f, spaces, mult, units), comult, counit)
            gradings = That.grading if len(B.D.objects) > 1 else None
            with open(ns.out, "w", encoding="utf-8") as fh:
                fh.write(serialize(total, gradings=gradings))
            rep.note(f"total algebra written to {ns.out} (dim {That.dim})")
        return _emit(rep, ns.json)

    if ns.cmd == "wrapped-fusion":
        xdims = _dims_arg(ns.dims, B.D.objects)
        ydims = _dims_arg(ns.ydims, B.D.objects) if ns.ydims else xdims
        That = wrap(B)
        _, rep = wrapped_fusion(That, xdims, ydims)
        return _emit(rep, ns.json)

    if ns.cmd == "lift-check":
        out = lift_fundamental_check(B, max_dim=ns.max_dim)
        return _emit(out.report, ns.json)

    if ns.cmd == "coinv":
        rep = Report("coinvariants")
        H = parsed.hopf_representation or parsed.hopf_module
        if H is None:
            print("error: no Hopf attachment (hopfrep-coaction / hopfmod-coaction) in the file",
                  file=sys.stderr)
            return 2
        ci = coinvariants(B, H)
        for key in sorted(ci.spaces):
            iota = ci.inclusions[key]
            rep.ok(f"coinv@{key}", f"dim {ci.dim(key)}")
            rep.record(f"inclusion-injective@{key}", iota.rank() == iota.cols)
        return _emit(rep, ns.json)

    if ns.cmd == "decompose":
        try:
            if ns.kind == "rep":
                if parsed.hopf_representation is None:
                    print("error: no Hopf representation attachment in the file", file=sys.stderr)
                    return 2
                dec = decompose_hopf_representation(B, parsed.hopf_representation)
            else:
                if parsed.hopf_module is None:
                    print("error: no Hopf module attachment in the file", file=sys.stderr)
                    return 2
                dec = decompose_hopf_module(B, parsed.hopf_module)
        except (NotGroupoid, NotConnected, NotActionType) as e:
            rep = Report("decomposition")
            rep.fail(type(e).__name__, str(e))
            return _emit(rep, ns.json)
        return _emit(dec.report, ns.json)

    if ns.cmd == "braiding":
        if ns.rmatrix:
            rparsed = parse_structure_file(ns.rmatrix)
            R = rparsed.rmatrix
        else:
            R = parsed.rmatrix
        if R is None:
            print("error: no rmatrix lines found", file=sys.stderr)
            return 2
        out = validate_rmatrix(B, R, max_dim=ns.max_dim, seed=ns.seed)
        return _emit(out.report, ns.json)

    if ns.cmd == "restrict":
        if parsed.rmatrix is None:
            print("error: no rmatrix lines in the structure file", file=sys.stderr)
            return 2
        fun = parse_functor_file(ns.functor, B.D)
        rep = braided_restriction_check(B, parsed.rmatrix, fun, max_dim=ns.max_dim)
        return _emit(rep, ns.json)

    raise AssertionError(f"unhandled command {ns.cmd}")


def _total_comult(That):
    """The direct-sum coalgebra comultiplication as one matrix."""
    from .exact import Matrix

    B = That.B
    S = That.dim
    f = B.field
    zero = f.zero()
    out = [zero] * (S * S * S)
    for a in B.D.morphism_names():
        off = That.offsets[a]
        d = B.comult[a]
        n = B.dim(a)
        for r in range(n * n):
            p, q = divmod(r, n)
            row = (off + p) * S + (off + q)
            for c in range(n):
                v = d.entries[r * n + c]
                if v:
                    out[row * S + off + c] = v
    return Matrix(f, S * S, S, out)


def _total_counit(That):
    from .exact import Matrix

    B = That.B
    S = That.dim
    f = B.field
    out = [f.zero()] * S
    for a in B.D.morphism_names():
        off = That.offsets[a]
        e = B.counit[a]
        for c in range(B.dim(a)):
            out[off + c] = e.entries[c]
    return Matrix(f, 1, S, out)


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
