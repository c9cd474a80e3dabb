"""Exact linear algebra over the rationals.

Everything downstream is built on two values: ``LinearMap``, an immutable
rows x cols matrix of exact rationals acting on column vectors, and
``Subspace``, a subspace of Q^n stored through its reduced column echelon
basis so that equal subspaces compare bitwise equal.  No floating point
appears anywhere; arithmetic uses gmpy2's mpq (arbitrary precision) with a
fractions.Fraction fallback.

Conventions fixed here and relied on everywhere else:

* ``rref`` picks the first nonzero entry in each column as pivot (no
  magnitude pivoting), normalizes pivots to 1 and eliminates above and
  below; the result is the unique reduced row echelon form.
* The canonical basis of a subspace is the reduced column echelon form
  (transpose of the rref of the transpose, zero columns dropped), columns
  ordered by pivot row.
* Sections (right inverses on images) are supported on the rref pivot
  columns, which makes every lift made from them deterministic.
"""

from __future__ import annotations

from typing import Iterable, List, Sequence, Tuple

from .errors import NotInvertible, NotNilpotent, ShapeMismatch

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover - gmpy2 is a hard dependency
    from fractions import Fraction as QQ

Q0 = QQ(0)
Q1 = QQ(1)


def rat(x) -> QQ:
    """Coerce ints, strings like '3/4' and rationals to the scalar type."""
    if isinstance(x, type(Q0)):
        return x
    return QQ(x)


class LinearMap:
    """A matrix with explicit dimensions; source_dim = cols, target_dim = rows.

    Entries are a tuple of row tuples so values are immutable and hashable.
    0 x n and n x 0 maps are legal and behave correctly under composition.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries):
        if rows < 0 or cols < 0:
            raise ShapeMismatch("negative dimensions")
        ents = tuple(tuple(rat(x) for x in row) for row in entries)
        if len(ents) != rows or any(len(r) != cols for r in ents):
            raise ShapeMismatch(
                "entry grid is %sx%s, declared %sx%s"
                % (len(ents), len(ents[0]) if ents else 0, rows, cols)
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", ents)

    def __setattr__(self, name, value):
        raise AttributeError("LinearMap is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def of(entries: Sequence[Sequence]) -> "LinearMap":
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        return LinearMap(rows, cols, entries)

    @staticmethod
    def zero(rows: int, cols: int) -> "LinearMap":
        return LinearMap(rows, cols, [[Q0] * cols for _ in range(rows)])

    @staticmethod
    def identity(n: int) -> "LinearMap":
        return LinearMap(n, n, [[Q1 if i == j else Q0 for j in range(n)] for i in range(n)])

    @staticmethod
    def diagonal(values: Sequence) -> "LinearMap":
        vals = [rat(v) for v in values]
        n = len(vals)
        return LinearMap(n, n, [[vals[i] if i == j else Q0 for j in range(n)] for i in range(n)])

    @staticmethod
    def column(values: Sequence) -> "LinearMap":
        return LinearMap(len(values), 1, [[rat(v)] for v in values])

    # -- basic structure ---------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, LinearMap)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        if self.rows * self.cols == 0:
            return "LinearMap(%d, %d, [])" % (self.rows, self.cols)
        body = "; ".join(" ".join(str(x) for x in row) for row in self.entries)
        return "LinearMap(%dx%d: %s)" % (self.rows, self.cols, body)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def is_identity(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(
            self.entries[i][j] == (1 if i == j else 0)
            for i in range(self.rows)
            for j in range(self.cols)
        )

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "LinearMap") -> "LinearMap":
        if self.rows != other.rows or self.cols != other.cols:
            raise ShapeMismatch("add: %sx%s vs %sx%s" % (self.rows, self.cols, other.rows, other.cols))
        return LinearMap(
            self.rows,
            self.cols,
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ],
        )

    def __neg__(self) -> "LinearMap":
        return LinearMap(self.rows, self.cols, [[-x for x in row] for row in self.entries])

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return self + (-other)

    def scale(self, c) -> "LinearMap":
        c = rat(c)
        return LinearMap(self.rows, self.cols, [[c * x for x in row] for row in self.entries])

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        """Composition self o other (matrix product)."""
        if self.cols != other.rows:
            raise ShapeMismatch(
                "compose: %sx%s after %sx%s" % (self.rows, self.cols, other.rows, other.cols)
            )
        a, b = self.entries, other.entries
        out = []
        for i in range(self.rows):
            arow = a[i]
            orow = [Q0] * other.cols
            for k in range(self.cols):
                aik = arow[k]
                if aik == 0:
                    continue
                brow = b[k]
                for j in range(other.cols):
                    bkj = brow[j]
                    if bkj != 0:
                        orow[j] = orow[j] + aik * bkj
            out.append(orow)
        return LinearMap(self.rows, other.cols, out)

    def transpose(self) -> "LinearMap":
        return LinearMap(
            self.cols,
            self.rows,
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
        )

    def power(self, k: int) -> "LinearMap":
        if self.rows != self.cols:
            raise ShapeMismatch("power of a non-square map")
        acc = LinearMap.identity(self.rows)
        for _ in range(k):
            acc = acc @ self
        return acc

    # -- slicing -----------------------------------------------------------

    def take_rows(self, idx: Sequence[int]) -> "LinearMap":
        return LinearMap(len(idx), self.cols, [self.entries[i] for i in idx])

    def take_cols(self, idx: Sequence[int]) -> "LinearMap":
        return LinearMap(
            self.rows, len(idx), [[row[j] for j in idx] for row in self.entries]
        )

    # -- solved forms --------------------------------------------------

    def rref(self) -> Tuple["LinearMap", Tuple[int, ...]]:
        """Reduced row echelon form and its pivot columns."""
        m = [list(row) for row in self.entries]
        rows, cols = self.rows, self.cols
        pivots: List[int] = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            pr = next((i for i in range(r, rows) if m[i][c] != 0), None)
            if pr is None:
                continue
            m[r], m[pr] = m[pr], m[r]
            pv = m[r][c]
            if pv != 1:
                m[r] = [x / pv for x in m[r]]
            for i in range(rows):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    mi, mr = m[i], m[r]
                    m[i] = [mi[j] - f * mr[j] for j in range(cols)]
            pivots.append(c)
            r += 1
        return LinearMap(rows, cols, m), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def inv(self) -> "LinearMap":
        if self.rows != self.cols:
            raise NotInvertible("non-square map")
        n = self.rows
        aug = LinearMap(
            n,
            2 * n,
            [list(self.entries[i]) + [Q1 if i == j else Q0 for j in range(n)] for i in range(n)],
        )
        red, piv = aug.rref()
        if tuple(piv) != tuple(range(n)):
            raise NotInvertible("rank %d < %d" % (len([p for p in piv if p < n]), n))
        return red.take_cols(range(n, 2 * n))

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows


# -- block constructions ----------------------------------------------------


def hstack(blocks: Sequence[LinearMap]) -> LinearMap:
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise ShapeMismatch("hstack: row counts differ")
    return LinearMap(
        rows,
        sum(b.cols for b in blocks),
        [[x for b in blocks for x in b.entries[i]] for i in range(rows)],
    )


def vstack(blocks: Sequence[LinearMap]) -> LinearMap:
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise ShapeMismatch("vstack: column counts differ")
    return LinearMap(sum(b.rows for b in blocks), cols, [row for b in blocks for row in b.entries])


def block_diag(a: LinearMap, b: LinearMap) -> LinearMap:
    """Biproduct of two maps: block diagonal placement."""
    top = hstack([a, LinearMap.zero(a.rows, b.cols)])
    bot = hstack([LinearMap.zero(b.rows, a.cols), b])
    return vstack([top, bot])


def kron(a: LinearMap, b: LinearMap) -> LinearMap:
    """Kronecker product; the left factor indexes blocks."""
    out = []
    for i in range(a.rows):
        for k in range(b.rows):
            row = []
            for j in range(a.cols):
                aij = a.entries[i][j]
                if aij == 0:
                    row.extend([Q0] * b.cols)
                else:
                    row.extend([aij * x for x in b.entries[k]])
            out.append(row)
    return LinearMap(a.rows * b.rows, a.cols * b.cols, out)


# -- canonical subspaces -----------------------------------------------------


class Subspace:
    """A subspace of Q^n given by its canonical reduced-column-echelon basis.

    Two equal subspaces have bitwise identical stored bases, so subobject
    equality is syntactic equality.
    """

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis: LinearMap):
        if basis.rows != ambient_dim:
            raise ShapeMismatch("basis lives in the wrong ambient space")
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", basis)

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @staticmethod
    def from_columns(m: LinearMap) -> "Subspace":
        return Subspace(m.rows, rcef(m))

    @property
    def dim(self) -> int:
        return self.basis.cols

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return "Subspace(dim %d of Q^%d)" % (self.dim, self.ambient_dim)

    def contains(self, cols: LinearMap) -> bool:
        if cols.rows != self.ambient_dim:
            return False
        if cols.cols == 0:
            return True
        return hstack([self.basis, cols]).rank() == self.dim

    def pivot_rows(self) -> Tuple[int, ...]:
        """Rows carrying the leading 1 of each basis column."""
        out = []
        for j in range(self.basis.cols):
            out.append(next(i for i in range(self.ambient_dim) if self.basis.entries[i][j] != 0))
        return tuple(out)

    def selector(self) -> LinearMap:
        """Canonical left inverse of the basis (picks pivot rows)."""
        piv = self.pivot_rows()
        return LinearMap(
            self.dim,
            self.ambient_dim,
            [[Q1 if j == piv[i] else Q0 for j in range(self.ambient_dim)] for i in range(self.dim)],
        )


def rcef(m: LinearMap) -> LinearMap:
    """Canonical basis (reduced column echelon form) of the column space."""
    red, piv = m.transpose().rref()
    return red.take_rows(range(len(piv))).transpose()


def kernel_basis(m: LinearMap) -> LinearMap:
    """Canonical basis of the null space of m."""
    red, piv = m.rref()
    pivset = set(piv)
    free = [j for j in range(m.cols) if j not in pivset]
    cols = []
    for f in free:
        v = [Q0] * m.cols
        v[f] = Q1
        for r, p in enumerate(piv):
            v[p] = -red.entries[r][f]
        cols.append(v)
    raw = LinearMap(m.cols, len(cols), [[c[i] for c in cols] for i in range(m.cols)])
    return rcef(raw)


def solve_columns(a: LinearMap, b: LinearMap) -> LinearMap:
    """The canonical solution X of a @ X = b (free variables set to zero).

    Raises ShapeMismatch when the system is inconsistent, i.e. some column
    of b is outside the column space of a.
    """
    if a.rows != b.rows:
        raise ShapeMismatch("solve: row counts differ")
    red, piv = hstack([a, b]).rref()
    if any(p >= a.cols for p in piv):
        raise ShapeMismatch("solve: inconsistent system")
    out = [[Q0] * b.cols for _ in range(a.cols)]
    for r, p in enumerate(piv):
        for j in range(b.cols):
            out[p][j] = red.entries[r][a.cols + j]
    return LinearMap(a.cols, b.cols, out)


class EchelonSolve:
    """Kernel, image and a canonical section of a map (see echelon_solve)."""

    __slots__ = ("kernel", "image", "section")

    def __init__(self, kernel: Subspace, image: Subspace, section: LinearMap):
        object.__setattr__(self, "kernel", kernel)
        object.__setattr__(self, "image", image)
        object.__setattr__(self, "section", section)

    def __setattr__(self, name, value):
        raise AttributeError("EchelonSolve is immutable")


def echelon_solve(m: LinearMap) -> EchelonSolve:
    """Kernel and image of m plus a right inverse of m on its image.

    The section s satisfies m @ s = image.basis and is supported on the
    rref pivot columns, so it is canonical given m.
    """
    ker = Subspace(m.cols, kernel_basis(m))
    img = Subspace.from_columns(m)
    _, piv = m.rref()
    mp = m.take_cols(piv)
    x = solve_columns(mp, img.basis)
    rows = [[Q0] * img.dim for _ in range(m.cols)]
    for r, p in enumerate(piv):
        rows[p] = list(x.entries[r])
    sec = LinearMap(m.cols, img.dim, rows)
    return EchelonSolve(ker, img, sec)


def section_of_epi(m: LinearMap) -> LinearMap:
    """Right inverse of a surjective map, from the canonical echelon section."""
    es = echelon_solve(m)
    if es.image.dim != m.rows:
        raise ShapeMismatch("section_of_epi: map is not surjective")
    # image.basis is then the identity in canonical form
    return es.section @ es.image.basis.inv()


# -- Fitting decomposition, nilpotency, spectrum -----------------------------


def fitting_one(t: LinearMap) -> Tuple[Subspace, Subspace]:
    """Split Q^n into ker (1-t)^n and im (1-t)^n for invertible t.

    The first part is the generalized eigenspace of eigenvalue 1 (where
    1 - t is nilpotent), the second its t-stable complement (where 1 - t is
    invertible).
    """
    if not t.is_invertible():
        raise NotInvertible("fitting_one needs an invertible operator")
    n = t.rows
    p = (LinearMap.identity(n) - t).power(n)
    return Subspace(n, kernel_basis(p)), Subspace.from_columns(p)


def nilpotency_index(n: LinearMap) -> int:
    """Smallest N >= 0 with n^N = 0; raises NotNilpotent when n^dim != 0."""
    if n.rows != n.cols:
        raise ShapeMismatch("nilpotency_index of a non-square map")
    acc = LinearMap.identity(n.rows)
    for k in range(n.rows + 1):
        if acc.is_zero():
            return k
        acc = acc @ n
    raise NotNilpotent("operator is not nilpotent")


def char_poly(t: LinearMap) -> List:
    """Coefficients of det(xI - t), ascending degree (Faddeev-LeVerrier)."""
    if t.rows != t.cols:
        raise ShapeMismatch("char_poly of a non-square map")
    n = t.rows
    coeffs = [Q0] * (n + 1)
    coeffs[n] = Q1
    m = LinearMap.zero(n, n)
    ident = LinearMap.identity(n)
    for k in range(1, n + 1):
        m = t @ m + ident.scale(coeffs[n - k + 1])
        tm = t @ m
        coeffs[n - k] = -sum(tm.entries[i][i] for i in range(n)) / QQ(k)
    return coeffs


def poly_derivative(p: Sequence) -> List:
    return [p[i] * i for i in range(1, len(p))]


def poly_eval(p: Sequence, x) -> QQ:
    acc = Q0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_trim(p: List) -> List:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: Sequence, b: Sequence):
    a = list(a)
    b = _poly_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Q0] * max(0, len(a) - len(b) + 1)
    while len(_poly_trim(a)) >= len(b):
        a = _poly_trim(a)
        shift = len(a) - len(b)
        f = a[-1] / b[-1]
        q[shift] = f
        for i in range(len(b)):
            a[shift + i] -= f * b[i]
    return _poly_trim(q), _poly_trim(a)


def poly_gcd(a: Sequence, b: Sequence) -> List:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        a, b = b, _poly_divmod(a, b)[1]
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def squarefree_part(p: Sequence) -> List:
    g = poly_gcd(p, poly_derivative(p))
    if len(g) <= 1:
        return _poly_trim(list(p))
    return _poly_divmod(p, g)[0]


def _divisors(n: int) -> List[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_roots(p: Sequence) -> List:
    """All rational roots of p, via the rational root theorem on the
    primitive integer form of the squarefree part."""
    sq = squarefree_part(p)
    if not sq:
        raise ValueError("zero polynomial")  # pragma: no cover
    from math import gcd, lcm

    den = 1
    for c in sq:
        den = lcm(den, int(c.denominator))
    ints = [int(c * den) for c in sq]
    g = 0
    for c in ints:
        g = gcd(g, c)
    if g > 1:
        ints = [c // g for c in ints]
    roots = []
    if ints[0] == 0:
        roots.append(Q0)
        while ints and ints[0] == 0:
            ints = ints[1:]
    if not ints:
        return roots
    for num in _divisors(ints[0]):
        for den_ in _divisors(ints[-1]):
            for sgn in (1, -1):
                cand = QQ(sgn * num, den_)
                if cand not in roots and poly_eval(sq, cand) == 0:
                    roots.append(cand)
    roots.sort()
    return roots


def rational_spectrum(t: LinearMap):
    """Rational eigenvalues with generalized eigenspaces, plus the residual.

    Returns ``(pairs, residual)`` where pairs is a list of
    ``(eigenvalue, Subspace)`` sorted by eigenvalue and residual is the
    t-stable complement carrying no rational eigenvalue.  Over Q a full
    decomposition is impossible in general, so the residual is reported as
    an undecomposed block rather than factored further.
    """
    if not t.is_invertible():
        raise NotInvertible("rational_spectrum needs an invertible operator")
    n = t.rows
    ident = LinearMap.identity(n)
    pairs = []
    resid_op = ident
    for lam in rational_roots(char_poly(t)):
        p = (ident.scale(lam) - t).power(n)
        pairs.append((lam, Subspace(n, kernel_basis(p))))
        resid_op = resid_op @ p
    residual = Subspace.from_columns(resid_op)
    return pairs, residual


def restrict_to_subspace(op: LinearMap, space: Subspace) -> LinearMap:
    """Matrix of op on an op-stable subspace, in the canonical basis."""
    return solve_columns(space.basis, op @ space.basis)
