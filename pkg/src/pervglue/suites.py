"""The proposition suites: every acceptance law as a seeded random corpus.

Each suite draws its cases from independent substreams of one seed, so a
failure is reproducible from (suite, seed, case index) alone.  All checks
are exact; there are no tolerances anywhere.  The same suites back the
command line ``selftest`` and the acceptance test module.
"""

from __future__ import annotations

import concurrent.futures
from typing import Callable, Dict, List, Optional, Tuple

from .categories import (
    CatMorphism,
    CatObject,
    are_isomorphic,
    image,
    is_exact_sequence,
    kernel_basis,
)
from .errors import PervglueError
from .gluing import (
    alpha_cokernel,
    alpha_kernel,
    alpha_nat,
    cokernel_stab_step,
    double_dual_witness,
    dual_shriek_witness,
    effective_psi,
    extend_obj,
    full_nearby,
    gamma_connecting,
    glue_F,
    j_map,
    kernel_stab_step,
    phi_map,
    phi_with_uv,
    pi_duality_witness,
    pi_map,
    psi_beilinson,
    psi_map,
    reflect_gluing_witness,
    stable_pi,
    tensor_system,
    unglue_G,
    xi_duality_exchange,
    xi_with_sequences,
)
from .linalg import LinearMap, Subspace, hstack, kron, section_of_epi, solve_columns, vstack
from .localsystems import (
    LocalSystem,
    dualize,
    ell_action,
    g_matrix,
    g_transpose_law,
    jordan_system,
    psi_component,
    tensor_L,
)
from .prng import SplitMix
from .quadruples import extend, psi_model, skyscraper
from .randgen import (
    random_diad,
    random_glued_sheaf,
    random_hom_element,
    random_local_system,
    random_quadruple_ses,
    random_ses_U,
    random_triad,
)

ENTRY_BOUND = 2


class SuiteResult:
    __slots__ = ("name", "cases", "failures")

    def __init__(self, name: str, cases: int, failures: List[Tuple[int, str]]):
        self.name = name
        self.cases = cases
        self.failures = failures

    @property
    def ok(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        msg = "%s  %-24s %d cases" % (status, self.name, self.cases)
        if self.failures:
            idx, err = self.failures[0]
            msg += "  first failure: case %d: %s" % (idx, err)
        return msg


def _stream(seed: int, index: int) -> SplitMix:
    return SplitMix(seed).substream(index)


# -- individual case bodies ----------------------------------------------------


def _case_psi_agreement(rng: SplitMix, max_dim: int) -> None:
    m = random_local_system(rng, max_dim, ENTRY_BOUND)
    cmp0 = psi_beilinson(m)
    dim, action = psi_model(m)
    if cmp0.space_dim != dim:
        raise PervglueError("dimension mismatch")
    if cmp0.space_dim:
        w = cmp0.witness
        if not w.is_invertible() or w @ action != cmp0.t_action @ w:
            raise PervglueError("witness fails to intertwine")


def _restricted_action(basis: LinearMap, ambient_action: LinearMap) -> LinearMap:
    if basis.cols == 0:
        return LinearMap.zero(0, 0)
    return solve_columns(basis, ambient_action @ basis)


def _case_stabilization(rng: SplitMix, max_dim: int, case_index: int) -> None:
    m = random_local_system(rng, max_dim, ENTRY_BOUND)
    r = case_index % 3
    n_idx = m.unipotent_index
    w = n_idx + r
    # consecutive-step isomorphisms at and above the witness
    for a in (w, w + 1):
        if not kernel_stab_step(m, a, r).is_iso():
            raise PervglueError("kernel not stable at a = %d" % a)
    # (1 - t)^{N+r} annihilates the W-parts of kernels and cokernels
    for a in range(r, n_idx + r + 3):
        _, mono = alpha_kernel(m, a, r)
        t_ker = _restricted_action(mono.components[1], tensor_system(m, a).psi_action)
        if not (LinearMap.identity(t_ker.rows) - t_ker).power(n_idx + r).is_zero():
            raise PervglueError("kernel annihilation fails at a = %d" % a)
        _, epi = alpha_cokernel(m, a, r)
        proj = epi.components[1]
        t_amb = tensor_system(m, a + r).psi_action
        t_cok = proj @ t_amb @ section_of_epi(proj)
        if t_cok @ proj != proj @ t_amb:
            raise PervglueError("cokernel action fails to descend")
        if not (LinearMap.identity(t_cok.rows) - t_cok).power(n_idx + r).is_zero():
            raise PervglueError("cokernel annihilation fails at a = %d" % a)
    # the three factorization identities, bitwise over the grid
    for a in range(0, 7):
        for rr in range(-3, 4):
            if a + rr < 0:
                continue
            one = LinearMap.identity(m.dim * (a + rr))
            lhs = g_matrix(m, a, rr) @ g_matrix(m, a + rr, -rr)
            if lhs != (one - ell_action(m, a + rr)).power(abs(rr)):
                raise PervglueError("factorization (1) fails at (%d,%d)" % (a, rr))
            if rr >= 0 and a + 2 * rr <= 8:
                if g_matrix(m, a, 2 * rr) != g_matrix(m, a + rr, rr) @ g_matrix(m, a, rr):
                    raise PervglueError("factorization (2) fails at (%d,%d)" % (a, rr))
    for a in range(1, 5):
        for rr in range(0, a + 1):
            one = LinearMap.identity(m.dim * a)
            power = (one - ell_action(m, a)).power(rr)
            if Subspace(m.dim * a, kernel_basis(power)) != Subspace(
                m.dim * a, kernel_basis(g_matrix(m, a, -rr))
            ):
                raise PervglueError("factorization (3, kernels) fails")
            if Subspace.from_columns(power) != Subspace.from_columns(g_matrix(m, a - rr, rr)):
                raise PervglueError("factorization (3, images) fails")


def _stabilization_negative_control() -> None:
    """On the Jordan family the kernel chain genuinely moves below N + r."""
    for k in (2, 3):
        m = jordan_system(k)
        r = 1
        moved = any(
            not kernel_stab_step(m, a, r).is_iso() for a in range(r, m.unipotent_index + r)
        )
        if not moved:
            raise PervglueError("stabilization bound is not sharp on jordan(%d)" % k)


def _case_gamma(rng: SplitMix, max_dim: int, case_index: int) -> None:
    m = random_local_system(rng, max_dim, ENTRY_BOUND)
    r = case_index % 3
    pi = stable_pi(m, r)  # gamma witness verified invertible on construction
    w = pi.witness_a
    # both compatibility equations, bitwise
    if gamma_connecting(m, w, w + 1, r) @ kernel_stab_step(m, w, r) != pi.gamma_witness:
        raise PervglueError("kernel-side gamma compatibility fails")
    if cokernel_stab_step(m, w + 1, r) @ gamma_connecting(m, w + 1, w, r) != pi.gamma_witness:
        raise PervglueError("cokernel-side gamma compatibility fails")
    # naturality against a quotient map of local systems
    big, sq = random_ses_U(rng, max_dim, ENTRY_BOUND)
    quot = sq.quot
    a = b = max(big.unipotent_index, quot.unipotent_index) + r
    phi = sq.proj
    ind_b = kron(LinearMap.identity(b), phi)
    ind_ar = kron(LinearMap.identity(a + r), phi)
    _, mono1 = alpha_kernel(big, b, r)
    _, mono2 = alpha_kernel(quot, b, r)
    top = j_map("shriek", tensor_system(big, b), tensor_system(quot, b), ind_b)
    from .categories import descend_along_epi, lift_through_mono

    ind_ker = lift_through_mono(mono2, top @ mono1)
    _, epi1 = alpha_cokernel(big, a, r)
    _, epi2 = alpha_cokernel(quot, a, r)
    bot = j_map("star", tensor_system(big, a + r), tensor_system(quot, a + r), ind_ar)
    ind_cok = descend_along_epi(epi1, epi2 @ bot)
    if gamma_connecting(quot, a, b, r) @ ind_ker != ind_cok @ gamma_connecting(big, a, b, r):
        raise PervglueError("gamma naturality square fails")


def _case_xi(rng: SplitMix, max_dim: int) -> None:
    m = random_local_system(rng, max_dim, ENTRY_BOUND)
    xi_with_sequences(m)  # exactness and both composition laws verified
    xi_duality_exchange(m)  # the two sequences of m and dual(m) exchanged


def _case_vanishing(rng: SplitMix, max_dim: int) -> None:
    f = random_glued_sheaf(rng, max_dim, ENTRY_BOUND)
    data = phi_with_uv(f)  # open part zero, v o u = 1 - t, dim phi = dim W
    if data.phi.payload != f.w_dim:
        raise PervglueError("phi dimension mismatch")
    m = f.m_u
    for mode in ("shriek", "star"):
        if phi_with_uv(extend(m, mode)).phi.payload != m.psi_dim:
            raise PervglueError("phi of the %s extension misses the nearby cycles" % mode)


def _case_phi_exact(rng: SplitMix, max_dim: int) -> None:
    mono, epi = random_quadruple_ses(rng, max_dim, ENTRY_BOUND)
    seq = [
        phi_map(mono.source.payload, mono.target.payload, mono),
        phi_map(epi.source.payload, epi.target.payload, epi),
    ]
    if not is_exact_sequence(seq):
        raise PervglueError("vanishing cycles break a short exact sequence")


def _case_gluing(rng: SplitMix, max_dim: int, case_index: int) -> None:
    f = random_glued_sheaf(rng, max_dim, ENTRY_BOUND)
    if case_index % 2 == 0:
        back = unglue_G(glue_F(f))
        label = "unglue o glue"
    else:
        back = glue_F(unglue_G(f))
        label = "glue o unglue"
    verdict = are_isomorphic(CatObject.glued(f), CatObject.glued(back))
    if verdict.kind != "yes":
        raise PervglueError("%s roundtrip: %s" % (label, verdict.kind))


def _case_diad(rng: SplitMix, max_dim: int, case_index: int) -> None:
    from .diads import from_diad_roundtrip, from_triad_roundtrip, reflect_roundtrip

    if case_index % 2 == 0:
        d = random_diad(rng, max_dim, ENTRY_BOUND)
        from_diad_roundtrip(d)  # T^{-1} T = id witness, verified iso
        reflect_roundtrip(d)  # reflect^2 = id witness, verified iso
    else:
        s = random_triad(rng, max_dim, ENTRY_BOUND)
        from_triad_roundtrip(s)  # T T^{-1} = id witness, verified iso


def _case_reflect_coherence(rng: SplitMix, max_dim: int) -> None:
    f = random_glued_sheaf(rng, max_dim, ENTRY_BOUND)
    reflect_gluing_witness(f)


def _case_duality(rng: SplitMix, max_dim: int, case_index: int) -> None:
    m = random_local_system(rng, max_dim, ENTRY_BOUND)
    f = random_glued_sheaf(rng, max_dim, ENTRY_BOUND)
    double_dual_witness(f)
    dual_shriek_witness(m)
    pi_duality_witness(m, case_index % 3)
    # dual of a tensor against the tensor of the dual, explicit witness
    a = 1 + case_index % 3
    from .gluing import _tensor_dual_iso

    theta = _tensor_dual_iso(m, a)
    CatMorphism(
        CatObject.local_system(tensor_L(dualize(m), a)),
        CatObject.local_system(dualize(tensor_L(m, a))),
        [theta],
    )
    if not theta.is_invertible():
        raise PervglueError("tensor duality witness is singular")


def _duality_g_law_control() -> None:
    ms = [jordan_system(1), jordan_system(2)]
    rng = SplitMix(0xD0A1)
    ms.append(random_local_system(rng, 3, ENTRY_BOUND))
    for m in ms:
        for a in range(0, 7):
            for r in range(-3, 4):
                if a + r < 0:
                    continue
                if not g_transpose_law(m, a, r):
                    raise PervglueError("g transpose law fails at (%d,%d)" % (a, r))


def _case_effective(rng: SplitMix, max_dim: int) -> None:
    m = random_local_system(rng, max_dim, ENTRY_BOUND)
    eff = effective_psi(m)
    if not (eff.space_dim == eff.restriction_dim == eff.corestriction_dim):
        raise PervglueError("effective formula dimensions disagree")


def _case_full_nearby(rng: SplitMix, max_dim: int) -> None:
    m = random_local_system(rng, max_dim, ENTRY_BOUND)
    comps, residual = full_nearby(m)
    from .linalg import rational_spectrum

    pairs, resid2 = rational_spectrum(m.T)
    if len(pairs) != len(comps) or residual != resid2:
        raise PervglueError("components disagree with the spectrum")
    for (lam, space), comp in zip(pairs, comps):
        if comp.eigenvalue != lam or comp.dim != space.dim:
            raise PervglueError("component at %s has wrong dimension" % lam)


def _case_exactness(rng: SplitMix, max_dim: int) -> None:
    m, sq = random_ses_U(rng, max_dim, ENTRY_BOUND)
    # nearby cycles preserve exactness
    psi_i = psi_map(sq.sub, m, sq.incl)
    psi_p = psi_map(m, sq.quot, sq.proj)
    vs = CatObject.vector_space
    seq = [
        CatMorphism(vs(psi_i.cols), vs(psi_i.rows), [psi_i]),
        CatMorphism(vs(psi_p.cols), vs(psi_p.rows), [psi_p]),
    ]
    if not is_exact_sequence(seq):
        raise PervglueError("nearby cycles break a short exact sequence")
    # the maximal extension preserves exactness
    xi_i = pi_map(sq.sub, m, sq.incl, 1)
    xi_p = pi_map(m, sq.quot, sq.proj, 1)
    if not is_exact_sequence([xi_i, xi_p]):
        raise PervglueError("maximal extension breaks a short exact sequence")


def _case_glued_formulas(rng: SplitMix, max_dim: int) -> None:
    m = random_local_system(rng, max_dim, ENTRY_BOUND)
    k = m.psi_dim
    one_minus_t = LinearMap.identity(k) - m.psi_action
    for mode in ("shriek", "star", "minimal"):
        quoted = extend(m, mode)
        produced = glue_F(extend(m, mode))
        verdict = are_isomorphic(CatObject.glued(produced), CatObject.glued(quoted))
        if verdict.kind != "yes":
            raise PervglueError("glue_F of the %s extension: %s" % (mode, verdict.kind))
    # Xi against the quoted quadruple (m, psi (x) L^2, (id, 1-t), pr_2)
    xi = xi_with_sequences(m)
    from .quadruples import GluedSheaf

    ref = GluedSheaf(
        m,
        2 * k,
        vstack([LinearMap.identity(k), one_minus_t]),
        hstack([LinearMap.zero(k, k), LinearMap.identity(k)]),
    )
    verdict = are_isomorphic(xi.xi_obj, CatObject.glued(ref))
    if verdict.kind != "yes":
        raise PervglueError("Xi against the quoted quadruple: %s" % verdict.kind)
    # the image of the natural map is the minimal extension
    im_ob, _, _ = image(alpha_nat(m))
    verdict = are_isomorphic(im_ob, extend_obj(m, "minimal"))
    if verdict.kind != "yes":
        raise PervglueError("image of the natural map: %s" % verdict.kind)


# -- suite table -----------------------------------------------------------------


def _simple(fn: Callable, with_index: bool = False):
    def body(seed: int, cases: int, max_dim: int, indices=None) -> List[Tuple[int, str]]:
        failures = []
        for i in indices if indices is not None else range(cases):
            rng = _stream(seed, i)
            try:
                if with_index:
                    fn(rng, max_dim, i)
                else:
                    fn(rng, max_dim)
            except PervglueError as exc:
                failures.append((i, str(exc)))
            except Exception as exc:  # pragma: no cover - defensive
                failures.append((i, "%s: %s" % (type(exc).__name__, exc)))
        return failures

    return body


def _with_control(body, control: Callable):
    def wrapped(seed: int, cases: int, max_dim: int, indices=None):
        failures = body(seed, cases, max_dim, indices)
        if indices is None or 0 in indices:
            try:
                control()
            except PervglueError as exc:
                failures.append((-1, str(exc)))
        return failures

    return wrapped


class SuiteSpec:
    __slots__ = ("name", "body", "cases", "max_dim")

    def __init__(self, name, body, cases, max_dim):
        self.name = name
        self.body = body
        self.cases = cases
        self.max_dim = max_dim


SUITES: Dict[str, SuiteSpec] = {}


def _register(name, body, cases, max_dim):
    SUITES[name] = SuiteSpec(name, body, cases, max_dim)


_register("psi_agreement", _simple(_case_psi_agreement), 500, 6)
_register(
    "stabilization",
    _with_control(_simple(_case_stabilization, with_index=True), _stabilization_negative_control),
    200,
    3,
)
_register("ker_coker_gamma", _simple(_case_gamma, with_index=True), 200, 3)
_register("xi_sequences", _simple(_case_xi), 200, 4)
_register("vanishing_cycles", _simple(_case_vanishing), 200, 4)
_register("phi_exactness", _simple(_case_phi_exact), 100, 3)
_register("gluing_theorem", _simple(_case_gluing, with_index=True), 400, 4)
_register("diad_triad", _simple(_case_diad, with_index=True), 200, 2)
_register("reflect_coherence", _simple(_case_reflect_coherence), 50, 3)
_register(
    "duality",
    _with_control(_simple(_case_duality, with_index=True), _duality_g_law_control),
    100,
    3,
)
_register("effective_formula", _simple(_case_effective), 200, 4)
_register("full_nearby", _simple(_case_full_nearby), 100, 5)
_register("exactness_psi_xi", _simple(_case_exactness), 100, 3)
_register("glued_formulas", _simple(_case_glued_formulas), 100, 3)


def _run_shard(args):
    name, seed, cases, max_dim, lo, hi = args
    spec = SUITES[name]
    return spec.body(seed, cases, max_dim, indices=range(lo, hi))


def run_suite(
    name: str,
    seed: int,
    cases: Optional[int] = None,
    max_dim: Optional[int] = None,
    threads: int = 1,
) -> SuiteResult:
    spec = SUITES[name]
    n = spec.cases if cases is None else cases
    d = spec.max_dim if max_dim is None else min(max_dim, spec.max_dim)
    if threads <= 1 or n < 8:
        failures = spec.body(seed, n, d)
    else:
        bounds = [(i * n) // threads for i in range(threads + 1)]
        shards = [
            (name, seed, n, d, bounds[i], bounds[i + 1])
            for i in range(threads)
            if bounds[i] < bounds[i + 1]
        ]
        failures = []
        with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(_run_shard, shards):
                failures.extend(part)
        failures.sort()
    return SuiteResult(name, n, failures)


def run_all(
    seed: int,
    cases: Optional[int] = None,
    max_dim: Optional[int] = None,
    threads: int = 1,
    names: Optional[List[str]] = None,
) -> List[SuiteResult]:
    out = []
    for name in names or SUITES:
        out.append(run_suite(name, seed, cases, max_dim, threads))
    return out
