"""Exact scalar fields and dense matrices.

Everything downstream computes with these: scalars are either arbitrary
precision rationals (``fractions.Fraction``) or residues in a prime field
(plain ints in ``[0, p)``).  No operation ever rounds; equality of matrices
is literal equality of entries.

Tensor index convention, fixed once for the whole package: in a Kronecker
product the *left* factor owns the coarse (slow) index, i.e.
``kron(A, B)[i*rB + k, j*cB + l] = A[i, j] * B[k, l]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[Fraction, int]


class FieldMismatch(ValueError):
    """Operands live over different scalar fields."""


class ShapeMismatch(ValueError):
    """Matrix shapes do not compose / do not match the declared spaces."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The scalar field: rationals (characteristic 0) or a prime field F_p."""

    characteristic: int = 0

    def __post_init__(self):
        if self.characteristic != 0 and not _is_prime(self.characteristic):
            raise ValueError(f"characteristic must be 0 or prime, got {self.characteristic}")

    @property
    def kind(self) -> str:
        return "rationals" if self.characteristic == 0 else "prime-field"

    def coerce(self, x) -> Scalar:
        """Embed an int / Fraction / scalar string into the field."""
        p = self.characteristic
        if p == 0:
            if isinstance(x, Fraction):
                return x
            if isinstance(x, int):
                return Fraction(x)
            if isinstance(x, str):
                return Fraction(x)
            raise TypeError(f"cannot coerce {x!r} into the rationals")
        if isinstance(x, str):
            if "/" in x:
                num, den = x.split("/", 1)
                return self.coerce(Fraction(int(num), int(den)))
            x = int(x)
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {p}")
            return (x.numerator * pow(x.denominator, -1, p)) % p
        if isinstance(x, int):
            return x % p
        raise TypeError(f"cannot coerce {x!r} into F_{p}")

    def zero(self) -> Scalar:
        return Fraction(0) if self.characteristic == 0 else 0

    def one(self) -> Scalar:
        return Fraction(1) if self.characteristic == 0 else 1

    def add(self, a, b):
        return a + b if self.characteristic == 0 else (a + b) % self.characteristic

    def sub(self, a, b):
        return a - b if self.characteristic == 0 else (a - b) % self.characteristic

    def neg(self, a):
        return -a if self.characteristic == 0 else (-a) % self.characteristic

    def mul(self, a, b):
        return a * b if self.characteristic == 0 else (a * b) % self.characteristic

    def inv(self, a):
        if self.characteristic == 0:
            return Fraction(1) / a
        return pow(a, -1, self.characteristic)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def format(self, a: Scalar) -> str:
        return str(a)


QQ = FieldSpec(0)


def prime_field(p: int) -> FieldSpec:
    return FieldSpec(p)


@dataclass(frozen=True)
class LabeledSpace:
    """A based vector space: a dimension together with distinct basis labels."""

    dim: int
    labels: tuple[str, ...]

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("dim must be >= 0")
        if len(self.labels) != self.dim:
            raise ValueError(f"{len(self.labels)} labels for dim {self.dim}")
        if len(set(self.labels)) != self.dim:
            raise ValueError("basis labels must be distinct")

    @classmethod
    def make(cls, labels: Sequence[str]) -> "LabeledSpace":
        labels = tuple(labels)
        return cls(len(labels), labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def tensor(self, other: "LabeledSpace") -> "LabeledSpace":
        labels = tuple(f"{a}|{b}" for a in self.labels for b in other.labels)
        return LabeledSpace(self.dim * other.dim, labels)


@dataclass(frozen=True)
class NotInvertible:
    """Value returned by ``try_invert`` when a matrix has no two-sided inverse."""

    square: bool
    rank: int

    def __bool__(self):
        return False


class Matrix:
    """Immutable dense matrix over a FieldSpec, entries row-major."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: FieldSpec, rows: int, cols: int, entries: Iterable[Scalar]):
        entries = tuple(entries)
        if rows < 0 or cols < 0 or len(entries) != rows * cols:
            raise ShapeMismatch(f"{len(entries)} entries for a {rows}x{cols} matrix")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.entries = entries

    # -- construction -------------------------------------------------

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence]) -> "Matrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        ent = []
        for row in rows:
            if len(row) != c:
                raise ShapeMismatch("ragged rows")
            ent.extend(field.coerce(x) for x in row)
        return cls(field, r, c, ent)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        one, zero = field.one(), field.zero()
        return cls(field, n, n, (one if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def zero(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        z = field.zero()
        return cls(field, rows, cols, (z,) * (rows * cols))

    @classmethod
    def column(cls, field: FieldSpec, values: Sequence) -> "Matrix":
        vals = [field.coerce(v) for v in values]
        return cls(field, len(vals), 1, vals)

    # -- access --------------------------------------------------------

    def __getitem__(self, ij) -> Scalar:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def rowlists(self) -> list[list[Scalar]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in self.row(i)) for i in range(self.rows))
        return f"Matrix({self.rows}x{self.cols}: {body})"

    def is_zero(self) -> bool:
        return all(not x for x in self.entries)

    # -- arithmetic ----------------------------------------------------

    def _want_same_field(self, other: "Matrix"):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._want_same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatch("add: shapes differ")
        add = self.field.add
        return Matrix(self.field, self.rows, self.cols,
                      (add(a, b) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._want_same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatch("sub: shapes differ")
        sub = self.field.sub
        return Matrix(self.field, self.rows, self.cols,
                      (sub(a, b) for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        neg = self.field.neg
        return Matrix(self.field, self.rows, self.cols, (neg(a) for a in self.entries))

    def scale(self, c) -> "Matrix":
        c = self.field.coerce(c)
        mul = self.field.mul
        return Matrix(self.field, self.rows, self.cols, (mul(c, a) for a in self.entries))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        """Matrix product, skipping zero entries (inputs are usually sparse)."""
        self._want_same_field(other)
        if self.cols != other.rows:
            raise ShapeMismatch(f"matmul: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        p = self.field.characteristic
        n, m, k = self.rows, other.cols, self.cols
        zero = self.field.zero()
        out = []
        oe = other.entries
        for i in range(n):
            acc = [zero] * m
            base = i * k
            for t in range(k):
                a = self.entries[base + t]
                if not a:
                    continue
                ob = t * m
                for j in range(m):
                    b = oe[ob + j]
                    if b:
                        acc[j] = acc[j] + a * b
            if p:
                acc = [x % p for x in acc]
            out.extend(acc)
        return Matrix(self.field, n, m, out)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows,
                      (self.entries[j * self.cols + i] for i in range(self.cols) for j in range(self.rows)))

    # -- elimination ---------------------------------------------------

    def _echelon(self) -> tuple[list[list[Scalar]], list[int]]:
        """Reduced row echelon form; returns (rows, pivot column list)."""
        f = self.field
        rows = self.rowlists()
        m = self.cols
        pivots: list[int] = []
        r = 0
        for j in range(m):
            piv = None
            for i in range(r, len(rows)):
                if rows[i][j]:
                    piv = i
                    break
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = f.inv(rows[r][j])
            if inv != f.one():
                row = rows[r]
                for t in range(j, m):
                    if row[t]:
                        row[t] = f.mul(row[t], inv)
            lead = rows[r]
            for i in range(len(rows)):
                if i == r:
                    continue
                c = rows[i][j]
                if c:
                    row = rows[i]
                    for t in range(j, m):
                        if lead[t]:
                            row[t] = f.sub(row[t], f.mul(c, lead[t]))
            pivots.append(j)
            r += 1
            if r == len(rows):
                break
        return rows, pivots

    def rank(self) -> int:
        return len(self._echelon()[1])

    def try_invert(self):
        """Exact two-sided inverse, or a NotInvertible value."""
        if self.rows != self.cols:
            return NotInvertible(square=False, rank=self.rank())
        n = self.rows
        f = self.field
        aug = Matrix(f, n, 2 * n,
                     (self.entries[i * n + j] if j < n else (f.one() if j - n == i else f.zero())
                      for i in range(n) for j in range(2 * n)))
        rows, pivots = aug._echelon()
        rk = sum(1 for p in pivots if p < n)
        if rk < n:
            return NotInvertible(square=True, rank=rk)
        inv = [rows[i][n:] for i in range(n)]
        return Matrix(f, n, n, (x for row in inv for x in row))

    def kernel_basis(self) -> "Matrix":
        """Columns form an exact basis of the right null space."""
        f = self.field
        rows, pivots = self._echelon()
        m = self.cols
        free = [j for j in range(m) if j not in pivots]
        cols = []
        for j in free:
            v = [f.zero()] * m
            v[j] = f.one()
            for r, pj in enumerate(pivots):
                v[pj] = f.neg(rows[r][j])
            cols.append(v)
        return Matrix(f, m, len(cols), (cols[c][i] for i in range(m) for c in range(len(cols))))

    def cokernel(self) -> tuple["Matrix", int]:
        """Surjection onto coker(A) = target/im(A); returns (projection, dim)."""
        proj = self.transpose().kernel_basis().transpose()
        return proj, proj.rows

    # -- solving -------------------------------------------------------

    def solve_right(self, b: "Matrix"):
        """Some X with self @ X = b, or None if inconsistent."""
        self._want_same_field(b)
        if b.rows != self.rows:
            raise ShapeMismatch("solve_right: row mismatch")
        f = self.field
        n, m, k = self.rows, self.cols, b.cols
        aug = Matrix(f, n, m + k,
                     (self.entries[i * m + j] if j < m else b.entries[i * k + (j - m)]
                      for i in range(n) for j in range(m + k)))
        rows, pivots = aug._echelon()
        for r, pj in enumerate(pivots):
            if pj >= m:
                return None
        x = [[f.zero()] * k for _ in range(m)]
        for r, pj in enumerate(pivots):
            for c in range(k):
                x[pj][c] = rows[r][m + c]
        return Matrix(f, m, k, (x[i][c] for i in range(m) for c in range(k)))

    def right_inverse(self):
        """Some S with self @ S = I (exists iff full row rank)."""
        return self.solve_right(Matrix.identity(self.field, self.rows))


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; the left factor owns the coarse index."""
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    p = a.field.characteristic
    zero = a.field.zero()
    rows, cols = a.rows * b.rows, a.cols * b.cols
    out = [zero] * (rows * cols)
    for i in range(a.rows):
        for j in range(a.cols):
            x = a.entries[i * a.cols + j]
            if not x:
                continue
            for k in range(b.rows):
                base = (i * b.rows + k) * cols + j * b.cols
                brow = k * b.cols
                for l in range(b.cols):
                    y = b.entries[brow + l]
                    if y:
                        v = x * y
                        out[base + l] = v % p if p else v
    return Matrix(a.field, rows, cols, out)


def kron_all(*ms: Matrix) -> Matrix:
    out = ms[0]
    for m in ms[1:]:
        out = kron(out, m)
    return out


def perm_tensor(field: FieldSpec, dims: Sequence[int], perm: Sequence[int]) -> Matrix:
    """Permutation matrix reordering tensor factors.

    ``perm[t]`` is the source position placed at target position ``t``; the
    result maps v_{i_0} x ... x v_{i_{n-1}} to the factors listed in ``perm``
    order.  Total dimension is unchanged.
    """
    n = 1
    for d in dims:
        n *= d
    tdims = [dims[p] for p in perm]
    zero, one = field.zero(), field.one()
    out = [zero] * (n * n)
    strides = []
    acc = 1
    for d in reversed(dims):
        strides.append(acc)
        acc *= d
    strides.reverse()
    tstrides = []
    acc = 1
    for d in reversed(tdims):
        tstrides.append(acc)
        acc *= d
    tstrides.reverse()
    for col in range(n):
        rem = col
        idx = []
        for t, d in enumerate(dims):
            idx.append(rem // strides[t])
            rem %= strides[t]
        row = sum(idx[perm[t]] * tstrides[t] for t in range(len(dims)))
        out[row * n + col] = one
    return Matrix(field, n, n, out)


def tensor_flip(field: FieldSpec, d1: int, d2: int) -> Matrix:
    """The symmetry X (x) Y -> Y (x) X on spaces of dims d1, d2."""
    return perm_tensor(field, (d1, d2), (1, 0))


def direct_sum(ms: Sequence[Matrix], field: FieldSpec | None = None) -> Matrix:
    """Block diagonal sum of matrices (empty sum needs an explicit field)."""
    if not ms:
        if field is None:
            raise ValueError("empty direct sum needs a field")
        return Matrix.zero(field, 0, 0)
    f = ms[0].field
    rows = sum(m.rows for m in ms)
    cols = sum(m.cols for m in ms)
    zero = f.zero()
    out = [zero] * (rows * cols)
    r0 = c0 = 0
    for m in ms:
        for i in range(m.rows):
            base = (r0 + i) * cols + c0
            mrow = i * m.cols
            for j in range(m.cols):
                out[base + j] = m.entries[mrow + j]
        r0 += m.rows
        c0 += m.cols
    return Matrix(f, rows, cols, out)


def hstack(ms: Sequence[Matrix]) -> Matrix:
    f = ms[0].field
    rows = ms[0].rows
    if any(m.rows != rows for m in ms):
        raise ShapeMismatch("hstack: row mismatch")
    cols = sum(m.cols for m in ms)
    out = []
    for i in range(rows):
        for m in ms:
            out.extend(m.row(i))
    return Matrix(f, rows, cols, out)


def vstack(ms: Sequence[Matrix]) -> Matrix:
    f = ms[0].field
    cols = ms[0].cols
    if any(m.cols != cols for m in ms):
        raise ShapeMismatch("vstack: column mismatch")
    rows = sum(m.rows for m in ms)
    out = []
    for m in ms:
        out.extend(m.entries)
    return Matrix(f, rows, cols, out)


def rank(a: Matrix) -> int:
    return a.rank()


def try_invert(a: Matrix):
    return a.try_invert()


def kernel_basis(a: Matrix) -> Matrix:
    return a.kernel_basis()


def cokernel(a: Matrix) -> tuple[Matrix, int]:
    return a.cokernel()


def factor_through_projection(pi: Matrix, f: Matrix) -> Matrix | None:
    """The unique g with g @ pi = f, or None when f does not kill ker(pi).

    pi must be surjective (a cokernel projection).  Existence of g is exactly
    well-definedness of f on the quotient; the candidate is verified exactly.
    """
    section = pi.right_inverse()
    if section is None:
        raise ShapeMismatch("factor_through_projection: pi is not surjective")
    g = f @ section
    if (g @ pi) == f:
        return g
    return None


def factor_through_injection(iota: Matrix, f: Matrix) -> Matrix | None:
    """The unique g with iota @ g = f, or None when im(f) is not inside im(iota)."""
    g = iota.solve_right(f)
    return g
