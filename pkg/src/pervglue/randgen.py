"""Seeded random instances of every structure the law suites consume.

All sampling is driven by the splitmix stream in ``prng``, so a given
``GeneratorConfig`` reproduces the identical corpus on any platform.  The
quadruple recipe follows the constraint-preserving construction: build the
unipotent part as 1 minus a Jordan-type nilpotent, adjoin a non-unipotent
block with det(1 - T) != 0, factor 1 - t through its image, pad W on the u
or v side, and conjugate by a change of basis on W.
"""

from __future__ import annotations

from typing import List, Optional, Tuple

from .categories import (
    CatMorphism,
    CatObject,
    biproduct,
    cokernel,
    hom_space,
    image,
    kernel,
)
from .diads import Diad, Triad, reflect_triad, to_triad
from .errors import PervglueError
from .linalg import (
    LinearMap,
    Q0,
    Q1,
    Subspace,
    block_diag,
    hstack,
    kernel_basis,
    rat,
    solve_columns,
    vstack,
)
from .localsystems import (
    LocalSystem,
    jordan_matrix,
    stable_span,
    sub_quotient,
)
from .prng import SplitMix
from .quadruples import GluedSheaf
from .localsystems import SubQuotient


class GeneratorConfig:
    """Seed, dimension cap, entry magnitude and case count for a corpus."""

    __slots__ = ("seed", "max_dim", "entry_bound", "case_count")

    def __init__(self, seed: int, max_dim: int = 6, entry_bound: int = 2, case_count: int = 100):
        object.__setattr__(self, "seed", seed)
        object.__setattr__(self, "max_dim", max_dim)
        object.__setattr__(self, "entry_bound", entry_bound)
        object.__setattr__(self, "case_count", case_count)

    def __setattr__(self, name, value):
        raise AttributeError("GeneratorConfig is immutable")

    def stream(self, index: int) -> SplitMix:
        return SplitMix(self.seed).substream(index)


def random_matrix(rng: SplitMix, rows: int, cols: int, bound: int) -> LinearMap:
    return LinearMap(
        rows, cols, [[rat(rng.integer(-bound, bound)) for _ in range(cols)] for _ in range(rows)]
    )


def random_unimodular(rng: SplitMix, n: int, bound: int) -> LinearMap:
    """Random integer matrix with determinant +-1 (L U with a shuffle)."""
    lower = LinearMap.identity(n)
    upper = LinearMap.identity(n)
    low = [list(r) for r in lower.entries]
    up = [list(r) for r in upper.entries]
    for i in range(n):
        for j in range(i):
            low[i][j] = rat(rng.integer(-bound, bound))
        for j in range(i + 1, n):
            up[i][j] = rat(rng.integer(-bound, bound))
    perm = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    pm = LinearMap(n, n, [[Q1 if perm[i] == j else Q0 for j in range(n)] for i in range(n)])
    return LinearMap(n, n, low) @ LinearMap(n, n, up) @ pm


def _random_partition(rng: SplitMix, total: int) -> List[int]:
    parts = []
    left = total
    while left > 0:
        p = rng.integer(1, left)
        parts.append(p)
        left -= p
    return parts


def _random_nonunipotent_block(rng: SplitMix, dim: int, bound: int) -> LinearMap:
    """Invertible block with det(1 - T) != 0 (no eigenvalue 1)."""
    while True:
        if dim == 2 and rng.below(3) == 0:
            # a rotation-type block without rational eigenvalues
            b = rng.integer(1, max(1, bound))
            cand = LinearMap.of([[0, -b], [b, 0]])
        else:
            diag = []
            for _ in range(dim):
                while True:
                    v = rng.integer(-bound - 1, bound + 1)
                    if v not in (0, 1):
                        break
                diag.append(v)
            cand = LinearMap.diagonal(diag)
            up = [list(r) for r in cand.entries]
            for i in range(dim):
                for j in range(i + 1, dim):
                    up[i][j] = rat(rng.integer(-bound, bound))
            cand = LinearMap(dim, dim, up)
        one = LinearMap.identity(dim)
        if cand.is_invertible() and (one - cand).is_invertible():
            return cand


def random_local_system(rng: SplitMix, max_dim: int, bound: int) -> LocalSystem:
    """Monodromy with a planted mix of unipotent blocks and other spectrum."""
    dim = rng.integer(1, max_dim)
    uni_dim = rng.integer(0, dim)
    blocks = []
    for p in _random_partition(rng, uni_dim):
        blocks.append(jordan_matrix(p))
    rest = dim - uni_dim
    while rest > 0:
        b = rng.integer(1, min(rest, 2))
        blocks.append(_random_nonunipotent_block(rng, b, bound))
        rest -= b
    t = blocks[0]
    for b in blocks[1:]:
        t = block_diag(t, b)
    p = random_unimodular(rng, dim, 1)
    return LocalSystem(p @ t @ p.inv())


def random_glued_sheaf(rng: SplitMix, max_dim: int, bound: int) -> GluedSheaf:
    """Quadruple built by the constraint-preserving recipe."""
    m = random_local_system(rng, max_dim, bound)
    k = m.psi_dim
    one_minus_t = LinearMap.identity(k) - m.psi_action
    img = Subspace.from_columns(one_minus_t)
    v0 = img.basis
    u0 = solve_columns(v0, one_minus_t)
    extra = rng.integer(0, max(1, max_dim // 2))
    if rng.below(2) == 0:
        u = vstack([u0, random_matrix(rng, extra, k, bound)])
        v = hstack([v0, LinearMap.zero(k, extra)])
    else:
        u = vstack([u0, LinearMap.zero(extra, k)])
        v = hstack([v0, random_matrix(rng, k, extra, bound)])
    w = u.rows
    q = random_unimodular(rng, w, 1)
    return GluedSheaf(m, w, q @ u, v @ q.inv())


def random_hom_element(rng: SplitMix, x: CatObject, y: CatObject, bound: int) -> Optional[CatMorphism]:
    basis = hom_space(x, y)
    if not basis:
        return None
    out = None
    for h in basis:
        c = rng.integer(-bound, bound)
        if c == 0:
            continue
        term = h.scale(c)
        out = term if out is None else out + term
    return out if out is not None else CatMorphism.zero(x, y)


def random_ses_U(rng: SplitMix, max_dim: int, bound: int) -> Tuple[LocalSystem, SubQuotient]:
    """A T-stable subsystem and quotient of a random local system."""
    m = random_local_system(rng, max_dim, bound)
    count = rng.integer(0, 2)
    vecs = random_matrix(rng, m.dim, count, bound)
    return m, sub_quotient(m, stable_span(m, vecs))


def random_quadruple_ses(rng: SplitMix, max_dim: int, bound: int):
    """A short exact sequence of quadruples: image and cokernel of a random
    morphism between random quadruples."""
    for _ in range(24):
        x = CatObject.glued(random_glued_sheaf(rng, max_dim, bound))
        y = CatObject.glued(random_glued_sheaf(rng, max_dim, bound))
        f = random_hom_element(rng, x, y, bound)
        if f is None:
            continue
        im_ob, im_mono, _ = image(f)
        cok_ob, cok_epi = cokernel(f)
        return im_mono, cok_epi
    raise PervglueError("could not sample a quadruple morphism")  # pragma: no cover


def random_diad(rng: SplitMix, max_dim: int, bound: int) -> Diad:
    """Assemble a random diad in the quadruple realization.

    a_L is a summand inclusion twisted by a random automorphism, F_R is a
    random quotient of the middle; b_R is solved from the complex condition
    (rejection when the affine system is unsolvable, with the always-valid
    coker(a_L) shape as fallback)."""
    for _ in range(16):
        f_l = CatObject.glued(random_glued_sheaf(rng, max_dim, bound))
        a0 = CatObject.glued(random_glued_sheaf(rng, max_dim, bound))
        b_ob = CatObject.glued(random_glued_sheaf(rng, max_dim, bound))
        bp = biproduct(f_l, a0)
        a_ob = bp.ob
        a_l = bp.inj1
        auto = random_hom_element(rng, a_ob, a_ob, bound)
        if auto is not None and auto.is_iso():
            a_l = auto @ a_l
        b_l = random_hom_element(rng, f_l, b_ob, bound)
        if b_l is None:
            b_l = CatMorphism.zero(f_l, b_ob)
        if rng.below(2) == 0:
            # independent quotient; b_R must solve b_R b_L = -a_R a_L
            z = CatObject.glued(random_glued_sheaf(rng, max_dim, bound))
            zeta = random_hom_element(rng, z, a_ob, bound)
            if zeta is None:
                continue
            _, a_r = cokernel(zeta)
            target = -(a_r @ a_l)
            b_r = _solve_leg(rng, b_ob, a_r.target, b_l, target, bound)
            if b_r is None:
                continue
        else:
            _, a_r = cokernel(a_l)
            b_r = _solve_leg(rng, b_ob, a_r.target, b_l, CatMorphism.zero(f_l, a_r.target), bound)
            if b_r is None:
                continue
        try:
            return Diad(a_l, b_l, a_r, b_r)
        except PervglueError:
            continue
    raise PervglueError("could not sample a diad")  # pragma: no cover


def _solve_leg(rng, b_ob, f_r, b_l, target, bound) -> Optional[CatMorphism]:
    """Random solution x of x o b_l = target in Hom(b_ob, f_r)."""
    basis = hom_space(b_ob, f_r)
    if not basis:
        return target if target.is_zero() else None
    cols = []
    for h in basis:
        composed = h @ b_l
        cols.append([e for comp in composed.components for row in comp.entries for e in row])
    rhs = [e for comp in target.components for row in comp.entries for e in row]
    mat = LinearMap(len(rhs), len(basis), [[cols[j][i] for j in range(len(basis))] for i in range(len(rhs))])
    try:
        part = solve_columns(mat, LinearMap.column(rhs))
    except PervglueError:
        return None
    null = kernel_basis(mat)
    coeffs = [part.entries[i][0] for i in range(len(basis))]
    for j in range(null.cols):
        c = rng.integer(-bound, bound)
        for i in range(len(basis)):
            coeffs[i] += c * null.entries[i][j]
    out = None
    for h, c in zip(basis, coeffs):
        term = h.scale(c)
        out = term if out is None else out + term
    return out


def random_triad(rng: SplitMix, max_dim: int, bound: int) -> Triad:
    s = to_triad(random_diad(rng, max_dim, bound))
    if rng.below(2) == 0:
        s = reflect_triad(s)
    return s
