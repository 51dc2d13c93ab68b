"""Structure files: a strict, line-oriented, hand-editable exchange format.

Grammar (tokens are whitespace separated; # starts a full-line comment):

    file        := "polyhopf v1" field category structure attachment*
    field       := "field" ("rational" | "prime" INT)
    category    := object* morphism* identity* compose*
    object      := "object" NAME
    morphism    := "morphism" NAME ":" NAME "->" NAME          (name src tgt)
    identity    := "identity" NAME NAME                        (object morphism)
    compose     := "compose" NAME "." NAME "=" NAME            (a b ab)
    structure   := space* mult* unit* comult* counit*
    space       := "space" NAME ":" LABEL*                     (zero labels = zero space)
    mult        := "mult" NAME "." NAME ":" LABEL "|" LABEL "->" LABEL "=" SCALAR
    unit        := "unit" NAME ":" LABEL "=" SCALAR
    comult      := "comult" NAME ":" LABEL "->" LABEL "|" LABEL "=" SCALAR
    counit      := "counit" NAME ":" LABEL "=" SCALAR
    attachment  := module | rep | hopfrep | hopfmod | rmatrix | grading
    module      := "module-space" NAME ":" LABEL* | "module-action" NAME ":" LABEL "|" LABEL "->" LABEL "=" SCALAR
    rep         := "rep-space" NAME ":" LABEL* | "rep-action" NAME "." NAME ":" LABEL "|" LABEL "->" LABEL "=" SCALAR
    hopfrep     := "hopfrep-coaction" NAME ":" LABEL "->" LABEL "|" LABEL "=" SCALAR
    hopfmod     := "hopfmod-coaction" NAME ":" LABEL "->" SUMLABEL "|" LABEL "=" SCALAR
    rmatrix     := "rmatrix" NAME ":" LABEL "|" LABEL "=" SCALAR
    grading     := "grading" NAME "=" NAME NAME                (annotation only)

SCALAR is an integer or p/q fraction (a residue in prime fields); SUMLABEL
is morphism:label naming a basis vector of the direct sum over arrows into
an object.  Structure constants omitted are zero; unknown directives are
rejected with the offending line number.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield

from .exact import FieldSpec, LabeledSpace, Matrix, QQ, ShapeMismatch, prime_field
from .fincat import FinCategory, composable_pairs, validate_category, validate_functor, FunctorData
from .hopfstruct import HopfModule, HopfRepresentation, sum_coalgebra
from .modrep import PolyModule, PolyRepresentation
from .polyalg import Polybialgebra, structure_from_tables
from .rmatrix import RMatrixData


class Malformed(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class ParsedStructure:
    structure: Polybialgebra
    module: PolyModule | None = None
    representation: PolyRepresentation | None = None
    hopf_module: HopfModule | None = None
    hopf_representation: HopfRepresentation | None = None
    rmatrix: RMatrixData | None = None
    gradings: dict = dfield(default_factory=dict)


def _tokens(line: str) -> list[str]:
    return line.split()


def _scalar(field: FieldSpec, tok: str, ln: int):
    try:
        return field.coerce(tok)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise Malformed(ln, f"bad scalar {tok!r}: {e}") from None


class _Parser:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.field: FieldSpec | None = None
        self.objects: list[str] = []
        self.morphisms: list[tuple[str, str, str]] = []
        self.identity: dict[str, str] = {}
        self.compose: dict[tuple[str, str], str] = {}
        self.space_labels: dict[str, list[str]] = {}
        self.mult: dict[tuple[str, str], list] = {}
        self.unit: dict[str, list] = {}
        self.comult: dict[str, list] = {}
        self.counit: dict[str, list] = {}
        self.mod_spaces: dict[str, list[str]] = {}
        self.mod_actions: dict[str, list] = {}
        self.rep_spaces: dict[str, list[str]] = {}
        self.rep_actions: dict[tuple[str, str], list] = {}
        self.hopfrep: dict[str, list] = {}
        self.hopfmod: dict[str, list] = {}
        self.rmat: dict[str, list] = {}
        self.gradings: dict[str, tuple[str, str]] = {}
        self.saw_header = False

    def parse(self) -> ParsedStructure:
        for ln, raw in enumerate(self.lines, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            self._line(ln, _tokens(line))
        if not self.saw_header:
            raise Malformed(0, "missing 'polyhopf v1' header")
        if self.field is None:
            raise Malformed(0, "missing field declaration")
        return self._build()

    # -- one directive per line ----------------------------------------

    def _line(self, ln: int, t: list[str]) -> None:
        key = t[0]
        if key == "polyhopf":
            if t != ["polyhopf", "v1"]:
                raise Malformed(ln, "unsupported version")
            self.saw_header = True
            return
        if not self.saw_header:
            raise Malformed(ln, "content before 'polyhopf v1' header")
        if key == "field":
            if t[1:] == ["rational"]:
                self.field = QQ
            elif len(t) == 3 and t[1] == "prime":
                try:
                    self.field = prime_field(int(t[2]))
                except ValueError as e:
                    raise Malformed(ln, str(e)) from None
            else:
                raise Malformed(ln, "field must be 'rational' or 'prime <p>'")
            return
        handlers = {
            "object": self._object, "morphism": self._morphism,
            "identity": self._identity, "compose": self._compose,
            "space": self._space, "mult": self._mult, "unit": self._unit,
            "comult": self._comult, "counit": self._counit,
            "module-space": self._mod_space, "module-action": self._mod_action,
            "rep-space": self._rep_space, "rep-action": self._rep_action,
            "hopfrep-coaction": self._hopfrep, "hopfmod-coaction": self._hopfmod,
            "rmatrix": self._rmatrix, "grading": self._grading,
        }
        h = handlers.get(key)
        if h is None:
            raise Malformed(ln, f"unknown directive {key!r}")
        h(ln, t)

    def _expect(self, ln: int, t: list[str], pattern: list[str | None]) -> list[str]:
        """Match fixed punctuation (non-None) and collect the wildcard tokens."""
        if len(t) != len(pattern):
            raise Malformed(ln, f"expected {len(pattern)} tokens, got {len(t)}")
        out = []
        for tok, pat in zip(t, pattern):
            if pat is None:
                out.append(tok)
            elif tok != pat:
                raise Malformed(ln, f"expected {pat!r}, got {tok!r}")
        return out

    def _object(self, ln, t):
        (name,) = self._expect(ln, t, ["object", None])
        self.objects.append(name)

    def _morphism(self, ln, t):
        name, src, tgt = self._expect(ln, t, ["morphism", None, ":", None, "->", None])
        self.morphisms.append((name, src, tgt))

    def _identity(self, ln, t):
        obj, mor = self._expect(ln, t, ["identity", None, None])
        self.identity[obj] = mor

    def _compose(self, ln, t):
        a, b, ab = self._expect(ln, t, ["compose", None, ".", None, "=", None])
        self.compose[(a, b)] = ab

    def _space(self, ln, t):
        if len(t) < 3 or t[2] != ":":
            raise Malformed(ln, "space <morphism> : <labels...>")
        name = t[1]
        if name in self.space_labels:
            raise Malformed(ln, f"duplicate space for {name}")
        self.space_labels[name] = t[3:]

    def _mult(self, ln, t):
        a, b, xa, xb, out, s = self._expect(
            ln, t, ["mult", None, ".", None, ":", None, "|", None, "->", None, "=", None])
        self.mult.setdefault((a, b), []).append((out, xa, xb, _scalar(self.field, s, ln)))

    def _unit(self, ln, t):
        obj, out, s = self._expect(ln, t, ["unit", None, ":", None, "=", None])
        self.unit.setdefault(obj, []).append((out, _scalar(self.field, s, ln)))

    def _comult(self, ln, t):
        a, inp, o1, o2, s = self._expect(
            ln, t, ["comult", None, ":", None, "->", None, "|", None, "=", None])
        self.comult.setdefault(a, []).append((o1, o2, inp, _scalar(self.field, s, ln)))

    def _counit(self, ln, t):
        a, inp, s = self._expect(ln, t, ["counit", None, ":", None, "=", None])
        self.counit.setdefault(a, []).append((inp, _scalar(self.field, s, ln)))

    def _mod_space(self, ln, t):
        if len(t) < 3 or t[2] != ":":
            raise Malformed(ln, "module-space <object> : <labels...>")
        self.mod_spaces[t[1]] = t[3:]

    def _mod_action(self, ln, t):
        a, x, v, w, s = self._expect(
            ln, t, ["module-action", None, ":", None, "|", None, "->", None, "=", None])
        self.mod_actions.setdefault(a, []).append((x, v, w, _scalar(self.field, s, ln)))

    def _rep_space(self, ln, t):
        if len(t) < 3 or t[2] != ":":
            raise Malformed(ln, "rep-space <morphism> : <labels...>")
        self.rep_spaces[t[1]] = t[3:]

    def _rep_action(self, ln, t):
        a, b, x, v, w, s = self._expect(
            ln, t, ["rep-action", None, ".", None, ":", None, "|", None, "->", None, "=", None])
        self.rep_actions.setdefault((a, b), []).append((x, v, w, _scalar(self.field, s, ln)))

    def _hopfrep(self, ln, t):
        a, inp, x, w, s = self._expect(
            ln, t, ["hopfrep-coaction", None, ":", None, "->", None, "|", None, "=", None])
        self.hopfrep.setdefault(a, []).append((inp, x, w, _scalar(self.field, s, ln)))

    def _hopfmod(self, ln, t):
        i, inp, sx, w, s = self._expect(
            ln, t, ["hopfmod-coaction", None, ":", None, "->", None, "|", None, "=", None])
        self.hopfmod.setdefault(i, []).append((inp, sx, w, _scalar(self.field, s, ln)))

    def _rmatrix(self, ln, t):
        i, x, y, s = self._expect(ln, t, ["rmatrix", None, ":", None, "|", None, "=", None])
        self.rmat.setdefault(i, []).append((x, y, _scalar(self.field, s, ln)))

    def _grading(self, ln, t):
        a, tgt, src = self._expect(ln, t, ["grading", None, "=", None, None])
        self.gradings[a] = (tgt, src)

    # -- assembly --------------------------------------------------------

    def _build(self) -> ParsedStructure:
        from .fincat import InvalidCategory

        try:
            D = validate_category({
                "objects": self.objects,
                "morphisms": self.morphisms,
                "identity": self.identity,
                "compose": self.compose,
            })
        except InvalidCategory as e:
            raise ShapeMismatch("category tables invalid:\n" + e.report.as_text()) from None
        for a in D.morphism_names():
            if a not in self.space_labels:
                raise ShapeMismatch(f"no space declared for morphism {a}")
        B = structure_from_tables(D, self.field, self.space_labels,
                                  self.mult, self.unit, self.comult, self.counit)
        out = ParsedStructure(structure=B, gradings=dict(self.gradings))

        if self.mod_spaces:
            spaces = {i: LabeledSpace.make(self.mod_spaces.get(i, ())) for i in D.objects}
            actions = {}
            for m in D.morphisms:
                a = m.name
                xs, xt = spaces[m.src], spaces[m.tgt]
                mat = Matrix.zero(self.field, xt.dim, B.dim(a) * xs.dim)
                e = list(mat.entries)
                for (x, v, w, s) in self.mod_actions.get(a, ()):
                    e[xt.index(w) * (B.dim(a) * xs.dim) + B.spaces[a].index(x) * xs.dim + xs.index(v)] = s
                actions[a] = Matrix(self.field, xt.dim, B.dim(a) * xs.dim, e)
            out.module = PolyModule(spaces, actions)

        if self.rep_spaces:
            spaces = {a: LabeledSpace.make(self.rep_spaces.get(a, ())) for a in D.morphism_names()}
            actions = {}
            for (a, b) in composable_pairs(D):
                ab = D.comp(a, b)
                ws, wt = spaces[b], spaces[ab]
                mat = Matrix.zero(self.field, wt.dim, B.dim(a) * ws.dim)
                e = list(mat.entries)
                for (x, v, w, s) in self.rep_actions.get((a, b), ()):
                    e[wt.index(w) * (B.dim(a) * ws.dim) + B.spaces[a].index(x) * ws.dim + ws.index(v)] = s
                actions[(a, b)] = Matrix(self.field, wt.dim, B.dim(a) * ws.dim, e)
            W = PolyRepresentation(spaces, actions)
            out.representation = W
            if self.hopfrep:
                coactions = {}
                for a in D.morphism_names():
                    wa = spaces[a].dim
                    e = [self.field.zero()] * (B.dim(a) * wa * wa)
                    for (inp, x, w, s) in self.hopfrep.get(a, ()):
                        row = B.spaces[a].index(x) * wa + spaces[a].index(w)
                        e[row * wa + spaces[a].index(inp)] = s
                    coactions[a] = Matrix(self.field, B.dim(a) * wa, wa, e)
                out.hopf_representation = HopfRepresentation(W, coactions)

        if out.module is not None and self.hopfmod:
            X = out.module
            coactions = {}
            for i in D.objects:
                into_i, dims, _, _ = sum_coalgebra(B, i)
                offs = {a: sum(dims[:t]) for t, a in enumerate(into_i)}
                total = sum(dims)
                xi = X.dim(i)
                e = [self.field.zero()] * (total * xi * xi)
                for (inp, sx, w, s) in self.hopfmod.get(i, ()):
                    if ":" not in sx:
                        raise ShapeMismatch(f"sum label {sx!r} must be morphism:label")
                    a, lbl = sx.split(":", 1)
                    if a not in offs:
                        raise ShapeMismatch(f"{a} is not an arrow into {i}")
                    row = (offs[a] + B.spaces[a].index(lbl)) * xi + X.spaces[i].index(w)
                    e[row * xi + X.spaces[i].index(inp)] = s
                coactions[i] = Matrix(self.field, total * xi, xi, e)
            out.hopf_module = HopfModule(X, coactions)

        if self.rmat:
            elements = {}
            for i in D.objects:
                eid = D.id_of(i)
                dA = B.dim(eid)
                e = [self.field.zero()] * (dA * dA)
                for (x, y, s) in self.rmat.get(i, ()):
                    e[B.spaces[eid].index(x) * dA + B.spaces[eid].index(y)] = s
                elements[i] = Matrix(self.field, dA * dA, 1, e)
            out.rmatrix = RMatrixData(elements)
        return out


def parse_structure(text: str) -> ParsedStructure:
    """Parse and shape-check a structure file; Malformed carries the line."""
    return _Parser(text).parse()


def parse_structure_file(path: str) -> ParsedStructure:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_structure(fh.read())


# ----------------------------------------------------------------------
# serialization (canonical, bit-stable)


def _fmt(field: FieldSpec, x) -> str:
    return str(x)


def serialize(B: Polybialgebra, *, module: PolyModule | None = None,
              representation: PolyRepresentation | None = None,
              hopf_representation: HopfRepresentation | None = None,
              hopf_module: HopfModule | None = None,
              rmatrix: RMatrixData | None = None,
              gradings: dict | None = None) -> str:
    D, f = B.D, B.field
    out = ["polyhopf v1"]
    out.append("field rational" if f.characteristic == 0 else f"field prime {f.characteristic}")
    out.append("")
    for i in D.objects:
        out.append(f"object {i}")
    for m in D.morphisms:
        out.append(f"morphism {m.name} : {m.src} -> {m.tgt}")
    for i in D.objects:
        out.append(f"identity {i} {D.id_of(i)}")
    for (a, b) in composable_pairs(D):
        out.append(f"compose {a} . {b} = {D.comp(a, b)}")
    out.append("")
    for a in D.morphism_names():
        out.append(("space " + a + " : " + " ".join(B.spaces[a].labels)).rstrip())
    for (a, b) in composable_pairs(D):
        m = B.mult[(a, b)]
        la, lb, lab = B.spaces[a].labels, B.spaces[b].labels, B.spaces[D.comp(a, b)].labels
        for r in range(m.rows):
            for c in range(m.cols):
                v = m.entries[r * m.cols + c]
                if v:
                    xa, xb = divmod(c, len(lb))
                    out.append(f"mult {a} . {b} : {la[xa]} | {lb[xb]} -> {lab[r]} = {_fmt(f, v)}")
    for i in D.objects:
        u = B.units[i]
        le = B.spaces[D.id_of(i)].labels
        for r in range(u.rows):
            if u.entries[r]:
                out.append(f"unit {i} : {le[r]} = {_fmt(f, u.entries[r])}")
    for a in D.morphism_names():
        d = B.comult[a]
        la = B.spaces[a].labels
        n = len(la)
        for r in range(d.rows):
            for c in range(d.cols):
                v = d.entries[r * d.cols + c]
                if v:
                    o1, o2 = divmod(r, n)
                    out.append(f"comult {a} : {la[c]} -> {la[o1]} | {la[o2]} = {_fmt(f, v)}")
    for a in D.morphism_names():
        e = B.counit[a]
        la = B.spaces[a].labels
        for c in range(e.cols):
            if e.entries[c]:
                out.append(f"counit {a} : {la[c]} = {_fmt(f, e.entries[c])}")

    if module is not None:
        out.append("")
        for i in D.objects:
            out.append(("module-space " + i + " : " + " ".join(module.spaces[i].labels)).rstrip())
        for m in D.morphisms:
            a = m.name
            rho = module.actions[a]
            la = B.spaces[a].labels
            ls, lt = module.spaces[m.src].labels, module.spaces[m.tgt].labels
            for r in range(rho.rows):
                for c in range(rho.cols):
                    v = rho.entries[r * rho.cols + c]
                    if v:
                        x, vv = divmod(c, max(len(ls), 1))
                        out.append(f"module-action {a} : {la[x]} | {ls[vv]} -> {lt[r]} = {_fmt(f, v)}")
    if representation is not None or hopf_representation is not None:
        W = representation if representation is not None else hopf_representation.base
        out.append("")
        for a in D.morphism_names():
            out.append(("rep-space " + a + " : " + " ".join(W.spaces[a].labels)).rstrip())
        for (a, b) in composable_pairs(D):
            rho = W.actions[(a, b)]
            la = B.spaces[a].labels
            ls, lt = W.spaces[b].labels, W.spaces[D.comp(a, b)].labels
            for r in range(rho.rows):
                for c in range(rho.cols):
                    v = rho.entries[r * rho.cols + c]
                    if v:
                        x, vv = divmod(c, max(len(ls), 1))
                        out.append(f"rep-action {a} . {b} : {la[x]} | {ls[vv]} -> {lt[r]} = {_fmt(f, v)}")
        if hopf_representation is not None:
            for a in D.morphism_names():
                d = hopf_representation.coactions[a]
                la, lw = B.spaces[a].labels, W.spaces[a].labels
                for r in range(d.rows):
                    for c in range(d.cols):
                        v = d.entries[r * d.cols + c]
                        if v:
                            x, w = divmod(r, max(len(lw), 1))
                            out.append(f"hopfrep-coaction {a} : {lw[c]} -> {la[x]} | {lw[w]} = {_fmt(f, v)}")
    if hopf_module is not None:
        X = hopf_module.base
        if module is None:
            out.append("")
            for i in D.objects:
                out.append(("module-space " + i + " : " + " ".join(X.spaces[i].labels)).rstrip())
            for m in D.morphisms:
                a = m.name
                rho = X.actions[a]
                la = B.spaces[a].labels
                ls, lt = X.spaces[m.src].labels, X.spaces[m.tgt].labels
                for r in range(rho.rows):
                    for c in range(rho.cols):
                        v = rho.entries[r * rho.cols + c]
                        if v:
                            x, vv = divmod(c, max(len(ls), 1))
                            out.append(f"module-action {a} : {la[x]} | {ls[vv]} -> {lt[r]} = {_fmt(f, v)}")
        for i in D.objects:
            into_i = B.D.arrows_into(i)
            dims = [B.dim(a) for a in into_i]
            offs = [sum(dims[:t]) for t in range(len(dims))]
            d = hopf_module.coactions[i]
            lx = X.spaces[i].labels
            xi = len(lx)
            for r in range(d.rows):
                for c in range(d.cols):
                    v = d.entries[r * d.cols + c]
                    if v:
                        crow, w = divmod(r, max(xi, 1))
                        t = max(k for k in range(len(offs)) if offs[k] <= crow)
                        a = into_i[t]
                        lbl = B.spaces[a].labels[crow - offs[t]]
                        out.append(f"hopfmod-coaction {i} : {lx[c]} -> {a}:{lbl} | {lx[w]} = {_fmt(f, v)}")
    if rmatrix is not None:
        out.append("")
        for i in D.objects:
            eid = D.id_of(i)
            la = B.spaces[eid].labels
            r = rmatrix.elements[i]
            for k in range(r.rows):
                if r.entries[k]:
                    x, y = divmod(k, max(len(la), 1))
                    out.append(f"rmatrix {i} : {la[x]} | {la[y]} = {_fmt(f, r.entries[k])}")
    if gradings:
        out.append("")
        for a in sorted(gradings):
            tgt, src = gradings[a]
            out.append(f"grading {a} = {tgt} {src}")
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------------
# functor files


def parse_functor_file(path: str, target: FinCategory) -> FunctorData:
    """Functor file: a category block for the source plus map-object/map-morphism lines."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    objects, morphisms, identity, compose = [], [], {}, {}
    omap, mmap = {}, {}
    saw = False
    for ln, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        t = line.split()
        if t[0] == "polyhopf":
            if t != ["polyhopf", "functor", "v1"]:
                raise Malformed(ln, "functor file must start with 'polyhopf functor v1'")
            saw = True
        elif not saw:
            raise Malformed(ln, "content before 'polyhopf functor v1' header")
        elif t[0] == "object" and len(t) == 2:
            objects.append(t[1])
        elif t[0] == "morphism" and len(t) == 6 and t[2] == ":" and t[4] == "->":
            morphisms.append((t[1], t[3], t[5]))
        elif t[0] == "identity" and len(t) == 3:
            identity[t[1]] = t[2]
        elif t[0] == "compose" and len(t) == 6 and t[2] == "." and t[4] == "=":
            compose[(t[1], t[3])] = t[5]
        elif t[0] == "map-object" and len(t) == 4 and t[2] == "=":
            omap[t[1]] = t[3]
        elif t[0] == "map-morphism" and len(t) == 4 and t[2] == "=":
            mmap[t[1]] = t[3]
        else:
            raise Malformed(ln, f"unknown functor directive {t[0]!r}")
    source = validate_category({"objects": objects, "morphisms": morphisms,
                                "identity": identity, "compose": compose})
    return validate_functor({"objects": omap, "morphisms": mmap}, source, target)


def serialize_functor(fun: FunctorData) -> str:
    D = fun.source
    out = ["polyhopf functor v1"]
    for i in D.objects:
        out.append(f"object {i}")
    for m in D.morphisms:
        out.append(f"morphism {m.name} : {m.src} -> {m.tgt}")
    for i in D.objects:
        out.append(f"identity {i} {D.id_of(i)}")
    for (a, b) in composable_pairs(D):
        out.append(f"compose {a} . {b} = {D.comp(a, b)}")
    for i in D.objects:
        out.append(f"map-object {i} = {fun.on_obj(i)}")
    for a in D.morphism_names():
        out.append(f"map-morphism {a} = {fun.on_mor(a)}")
    return "\n".join(out) + "\n"
