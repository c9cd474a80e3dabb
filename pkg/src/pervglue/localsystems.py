"""Local systems on the punctured line as pairs (V, T).

A local system is a finite dimensional rational vector space V with an
invertible operator T, the action of the fixed positive generator t of the
fundamental group of the punctured line.  This module provides:

* the standard objects: the unipotent Jordan system J^a of rank a and the
  rank-one system with monodromy lambda;
* the tensor m (x) L^a in the block coordinate convention "a blocks of
  V-coordinates", where t acts by kron(J^a, T), i.e. sends
  (x_1, ..., x_a) to (T x_1 - T x_2, ..., T x_a);
* the inclusion/projection maps g^{a,r} between consecutive tensors
  (inclusion onto the first a blocks for r >= 0, collapse of the first -r
  blocks for r < 0) together with their algebra;
* the Fitting splitting into unipotent part and complement, duality, and
  rank-one twists.

Two different "1 - t" operators appear on a tensor m (x) L^a and both are
used downstream.  The full monodromy kron(J^a, T) is the honest t-action;
the unipotent part and all nearby-cycles data are computed from it.  The
L-factor action kron(J^a, I) is the endomorphism through which the g-map
factorization identities hold verbatim for arbitrary m:

    g^{a,r} o g^{a+r,-r} = (1 - t_L)^{|r|},
    ker (1 - t_L)^r = ker g^{a,-r},   im (1 - t_L)^r = im g^{a-r,r}.

``ell_action`` exposes that second operator.  For the trivial rank-one m
the two operators coincide and the identities reduce to the classical ones
for the bare L^a.
"""

from __future__ import annotations

from functools import lru_cache
from typing import List, Tuple

from .errors import InvalidMorphism, InvalidParameter, ShapeMismatch
from .linalg import (
    LinearMap,
    Q0,
    Q1,
    Subspace,
    block_diag,
    fitting_one,
    hstack,
    kernel_basis,
    kron,
    nilpotency_index,
    rat,
    restrict_to_subspace,
    solve_columns,
    vstack,
)


class LocalSystem:
    """A pair (V, T) with T invertible; the model of a sheaf on the open part."""

    __slots__ = ("dim", "T", "_fitting")

    def __init__(self, t: LinearMap):
        if t.rows != t.cols:
            raise ShapeMismatch("monodromy must be square")
        if not t.is_invertible():
            raise InvalidParameter("monodromy must be invertible")
        object.__setattr__(self, "dim", t.rows)
        object.__setattr__(self, "T", t)
        object.__setattr__(self, "_fitting", None)

    def __setattr__(self, name, value):
        raise AttributeError("LocalSystem is immutable")

    def __eq__(self, other):
        return isinstance(other, LocalSystem) and self.T == other.T

    def __hash__(self):
        return hash(self.T)

    def __repr__(self):
        return "LocalSystem(dim %d)" % self.dim

    def _fit(self):
        cached = object.__getattribute__(self, "_fitting")
        if cached is None:
            uni, rest = fitting_one(self.T)
            t1 = restrict_to_subspace(self.T, uni)
            n = nilpotency_index(LinearMap.identity(uni.dim) - t1)
            cached = (uni, rest, t1, n)
            object.__setattr__(self, "_fitting", cached)
        return cached

    @property
    def unipotent_space(self) -> Subspace:
        return self._fit()[0]

    @property
    def complement_space(self) -> Subspace:
        return self._fit()[1]

    @property
    def psi_dim(self) -> int:
        return self._fit()[0].dim

    @property
    def psi_action(self) -> LinearMap:
        """Action of t on the unipotent part, in its canonical coordinates."""
        return self._fit()[2]

    @property
    def unipotent_index(self) -> int:
        """Smallest N with (1 - t)^N = 0 on the unipotent part."""
        return self._fit()[3]


def make_standard(kind: str, value) -> LocalSystem:
    """Build a standard system: ``jordan(a)`` or ``rank_one(lambda)``."""
    if kind == "jordan":
        return LocalSystem(jordan_matrix(int(value)))
    if kind == "rank_one":
        lam = rat(value)
        if lam == 0:
            raise InvalidParameter("rank-one monodromy must be nonzero")
        return LocalSystem(LinearMap(1, 1, [[lam]]))
    raise InvalidParameter("unknown standard kind %r" % kind)


def jordan_matrix(a: int) -> LinearMap:
    """J^a: ones on the diagonal, minus ones on the superdiagonal."""
    if a < 0:
        raise InvalidParameter("Jordan size must be >= 0")
    return LinearMap(
        a,
        a,
        [
            [Q1 if i == j else (-Q1 if j == i + 1 else Q0) for j in range(a)]
            for i in range(a)
        ],
    )


def jordan_system(a: int) -> LocalSystem:
    return LocalSystem(jordan_matrix(a))


def rank_one(lam) -> LocalSystem:
    return make_standard("rank_one", lam)


def trivial_system() -> LocalSystem:
    return jordan_system(1)


def biproduct_ls(a: LocalSystem, b: LocalSystem) -> LocalSystem:
    return LocalSystem(block_diag(a.T, b.T))


# -- tensor with the standard unipotent systems ------------------------------


def tensor_L(m: LocalSystem, a: int) -> LocalSystem:
    """m (x) L^a with monodromy kron(J^a, T): block upper bidiagonal with
    T on the diagonal and -T on the superdiagonal."""
    if a < 0:
        raise InvalidParameter("tensor exponent must be >= 0")
    return LocalSystem(kron(jordan_matrix(a), m.T))


def ell_action(m: LocalSystem, a: int) -> LinearMap:
    """The action of t through the L^a factor alone: kron(J^a, I)."""
    return kron(jordan_matrix(a), LinearMap.identity(m.dim))


def g_matrix(m: LocalSystem, a: int, r: int) -> LinearMap:
    """Matrix of g^{a,r}: m (x) L^a -> m (x) L^{a+r}.

    For r >= 0 the block-column inclusion onto the first a blocks, for
    r < 0 the block-row projection collapsing the first -r blocks.
    """
    if a < 0 or a + r < 0:
        raise InvalidParameter("g^{%d,%d} is undefined" % (a, r))
    if r >= 0:
        base = vstack([LinearMap.identity(a), LinearMap.zero(r, a)])
    else:
        base = hstack([LinearMap.zero(a + r, -r), LinearMap.identity(a + r)])
    return kron(base, LinearMap.identity(m.dim))


def dualize(m: LocalSystem) -> LocalSystem:
    """The dual system: same dimension, inverse-transpose monodromy."""
    return LocalSystem(m.T.inv().transpose())


def twist_rank_one(m: LocalSystem, lam) -> LocalSystem:
    """Same space, monodromy scaled by a nonzero rational."""
    lam = rat(lam)
    if lam == 0:
        raise InvalidParameter("twist by zero")
    return LocalSystem(m.T.scale(lam))


# -- unipotent splitting -----------------------------------------------------


class UnipotentSplit:
    """Fitting decomposition of (V, T) at eigenvalue 1.

    ``uni``/``rest`` are the two summands as local systems in their
    canonical coordinates, ``uni_incl``/``rest_incl`` the inclusion
    matrices into V, and ``index`` the nilpotency index of 1 - t on the
    unipotent part.
    """

    __slots__ = ("uni", "uni_incl", "rest", "rest_incl", "index")

    def __init__(self, uni, uni_incl, rest, rest_incl, index):
        object.__setattr__(self, "uni", uni)
        object.__setattr__(self, "uni_incl", uni_incl)
        object.__setattr__(self, "rest", rest)
        object.__setattr__(self, "rest_incl", rest_incl)
        object.__setattr__(self, "index", index)

    def __setattr__(self, name, value):
        raise AttributeError("UnipotentSplit is immutable")


def unipotent_split(m: LocalSystem) -> UnipotentSplit:
    uni = LocalSystem(m.psi_action)
    rest_sp = m.complement_space
    rest = LocalSystem(restrict_to_subspace(m.T, rest_sp))
    return UnipotentSplit(
        uni, m.unipotent_space.basis, rest, rest_sp.basis, m.unipotent_index
    )


def psi_component(src: LocalSystem, dst: LocalSystem, a_u: LinearMap) -> LinearMap:
    """Matrix of a_u restricted to unipotent parts, in canonical coordinates.

    a_u must intertwine the monodromies; it then maps the generalized
    1-eigenspace of src into that of dst and the restriction is returned
    in the two canonical Fitting bases.
    """
    cols = a_u @ src.unipotent_space.basis
    try:
        return solve_columns(dst.unipotent_space.basis, cols)
    except ShapeMismatch as exc:
        raise InvalidMorphism("map does not preserve unipotent parts") from exc


# -- duality pairing on the standard unipotent systems -----------------------


@lru_cache(maxsize=None)
def std_pairing(a: int) -> LinearMap:
    """Invertible intertwiner P with P J^a = (J^a)^{-t} P, identifying L^a
    with its dual.

    Computed by solving the intertwining system with the last column pinned
    to the first coordinate vector.  The pin selects the one solution whose
    family is coherent across a:

        transpose(g^{a,r}) @ std_pairing(a+r) == std_pairing(a) @ g^{a+r,-r}

    holds bitwise for every r >= 0 (the r < 0 companion uses the transposed
    pairing, see ``g_transpose_law``).
    """
    if a == 0:
        return LinearMap.zero(0, 0)
    j = jordan_matrix(a)
    jinvt = j.inv().transpose()
    idx = lambda i, k: k * a + i  # column-major position of P[i,k]
    rows = []
    rhs = []
    for i in range(a):
        for k in range(a):
            row = [Q0] * (a * a)
            # (P J)[i,k] - (J^{-t} P)[i,k] = 0
            for s in range(a):
                if j.entries[s][k] != 0:
                    row[idx(i, s)] += j.entries[s][k]
                if jinvt.entries[i][s] != 0:
                    row[idx(s, k)] -= jinvt.entries[i][s]
            rows.append(row)
            rhs.append(Q0)
    for i in range(a):
        row = [Q0] * (a * a)
        row[idx(i, a - 1)] = Q1
        rows.append(row)
        rhs.append(Q1 if i == 0 else Q0)
    sol = solve_columns(LinearMap.of(rows), LinearMap.column(rhs))
    p = LinearMap(a, a, [[sol.entries[idx(i, k)][0] for k in range(a)] for i in range(a)])
    assert p @ j == jinvt @ p and p.is_invertible()
    return p


def g_transpose_law(m: LocalSystem, a: int, r: int) -> bool:
    """Exact matrix form of the duality of the g maps.

    For r >= 0 this is

        transpose(g^{a,r}_m) @ Phat_{a+r} == Phat_a @ g^{a+r,-r}_{dual m}

    with Phat_c = kron(std_pairing(c), I); for r < 0 the same identity with
    the transposed pairing.  The two slots of one pairing serve the two
    directions: no intertwining pairing satisfies the unsigned identity for
    both signs of r simultaneously (already impossible at a = 1, r = 1
    against a = 2, r = -1).
    """
    if a < 0 or a + r < 0:
        raise InvalidParameter("g^{%d,%d} is undefined" % (a, r))
    dm = dualize(m)
    ident = LinearMap.identity(m.dim)
    if r >= 0:
        pair = lambda c: kron(std_pairing(c), ident)
    else:
        pair = lambda c: kron(std_pairing(c).transpose(), ident)
    lhs = g_matrix(m, a, r).transpose() @ pair(a + r)
    rhs = pair(a) @ g_matrix(dm, a + r, -r)
    return lhs == rhs


# -- Jordan chains for unipotent operators -----------------------------------


def jordan_chains(n: LinearMap) -> List[List[LinearMap]]:
    """Jordan chains of a nilpotent operator, longest first, tops first.

    Chain tops are chosen greedily from echelon complements, so the output
    is deterministic.  n maps each chain vector to the next of its chain.
    """
    dim = n.rows
    idx = nilpotency_index(n)
    kernels = [Subspace(dim, kernel_basis(n.power(k))) for k in range(idx + 1)]
    chains: List[List[LinearMap]] = []
    for k in range(idx, 0, -1):
        nk = n.power(k)
        covered = [kernels[k - 1].basis]
        for ch in chains:
            for v in ch:
                if (nk @ v).is_zero():
                    covered.append(v)
        tops = _complete_basis(hstack(covered), kernels[k].basis)
        for j in range(tops.cols):
            chain = [tops.take_cols([j])]
            for _ in range(k - 1):
                chain.append(n @ chain[-1])
            chains.append(chain)
    return chains


def unipotent_conjugator(t1: LinearMap, t2: LinearMap) -> LinearMap:
    """Deterministic invertible C with C t1 = t2 C, for unipotent t1, t2 of
    equal Jordan type (raises ShapeMismatch otherwise)."""
    n1 = LinearMap.identity(t1.rows) - t1
    n2 = LinearMap.identity(t2.rows) - t2
    ch1 = jordan_chains(n1)
    ch2 = jordan_chains(n2)
    if [len(c) for c in ch1] != [len(c) for c in ch2]:
        raise ShapeMismatch("Jordan types differ")
    cols1 = [v for ch in ch1 for v in ch]
    cols2 = [v for ch in ch2 for v in ch]
    b1 = hstack(cols1) if cols1 else LinearMap.zero(t1.rows, 0)
    b2 = hstack(cols2) if cols2 else LinearMap.zero(t2.rows, 0)
    c = b2 @ b1.inv() if t1.rows else LinearMap.zero(0, 0)
    assert c @ t1 == t2 @ c
    return c


def _complete_basis(have: LinearMap, cand: LinearMap) -> LinearMap:
    """Columns of cand extending span(have), picked greedily left to right."""
    picked = []
    cur = have
    rank = cur.rank()
    for j in range(cand.cols):
        trial = hstack([cur, cand.take_cols([j])])
        if trial.rank() > rank:
            picked.append(j)
            cur = trial
            rank += 1
    return cand.take_cols(picked)


# -- T-stable subsystems and quotients ----------------------------------------


def stable_span(m: LocalSystem, vectors: LinearMap) -> Subspace:
    """Smallest T-stable subspace containing the given columns."""
    cur = Subspace.from_columns(vectors)
    while True:
        grown = Subspace.from_columns(hstack([cur.basis, m.T @ cur.basis]))
        if grown.dim == cur.dim:
            return cur
        cur = grown


class SubQuotient:
    """A T-stable subsystem with its inclusion, and the quotient with its
    canonical projection and standard-vector section."""

    __slots__ = ("sub", "incl", "quot", "proj", "section")

    def __init__(self, sub, incl, quot, proj, section):
        object.__setattr__(self, "sub", sub)
        object.__setattr__(self, "incl", incl)
        object.__setattr__(self, "quot", quot)
        object.__setattr__(self, "proj", proj)
        object.__setattr__(self, "section", section)

    def __setattr__(self, name, value):
        raise AttributeError("SubQuotient is immutable")


def quotient_projection(space: Subspace) -> Tuple[LinearMap, LinearMap]:
    """Canonical projection Q^n -> Q^n/space and its section.

    The section embeds the quotient coordinates as the standard basis
    vectors at the non-pivot rows of the subspace basis.
    """
    n = space.ambient_dim
    piv = set(space.pivot_rows())
    rest = [i for i in range(n) if i not in piv]
    section = LinearMap(
        n, len(rest), [[Q1 if i == rest[j] else Q0 for j in range(len(rest))] for i in range(n)]
    )
    proj_full = hstack([space.basis, section]).inv()
    return proj_full.take_rows(range(space.dim, n)), section


def sub_quotient(m: LocalSystem, space: Subspace) -> SubQuotient:
    """Split m along a T-stable subspace into sub and quotient systems."""
    if not space.contains(m.T @ space.basis):
        raise InvalidParameter("subspace is not T-stable")
    sub = LocalSystem(restrict_to_subspace(m.T, space))
    proj, section = quotient_projection(space)
    quot = LocalSystem(proj @ m.T @ section)
    return SubQuotient(sub, space.basis, quot, proj, section)
