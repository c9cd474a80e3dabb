import pytest

from pervglue.categories import (
    CatMorphism,
    CatObject,
    SESMorphism,
    ThreeTermComplex,
    are_isomorphic,
    biproduct,
    cokernel,
    descend_along_epi,
    hom_space,
    image,
    is_exact_sequence,
    kernel,
    kernel_cokernel_image,
    lift_through_mono,
    middle_cohomology,
    middle_cohomology_map,
    snake,
)
from pervglue.errors import (
    InvalidMorphism,
    InvalidSESMorphism,
    NotAComplex,
    RealizationMismatch,
)
from pervglue.linalg import LinearMap, block_diag, kernel_basis, section_of_epi
from pervglue.localsystems import (
    LocalSystem,
    jordan_matrix,
    jordan_system,
    rank_one,
    trivial_system,
)
from pervglue.quadruples import extend, skyscraper

M = LinearMap.of


def vs(n):
    return CatObject.vector_space(n)


def ls(m):
    return CatObject.local_system(m)


def q(f):
    return CatObject.glued(f)


def test_morphism_validation():
    a = ls(jordan_system(2))
    b = ls(rank_one(2))
    with pytest.raises(InvalidMorphism):
        CatMorphism(a, b, [M([[1, 0]])])
    CatMorphism(a, a, [jordan_matrix(2)])  # the monodromy itself commutes
    with pytest.raises(RealizationMismatch):
        CatMorphism(vs(2), a, [LinearMap.identity(2)])


def test_quadruple_morphism_squares():
    m = jordan_system(2)
    shriek, star = q(extend(m, "shriek")), q(extend(m, "star"))
    one_minus_t = LinearMap.identity(2) - jordan_matrix(2)
    alpha = CatMorphism(shriek, star, [LinearMap.identity(2), one_minus_t])
    assert not alpha.is_zero()
    with pytest.raises(InvalidMorphism):
        CatMorphism(shriek, star, [LinearMap.identity(2), LinearMap.identity(2)])


def test_kernel_cokernel_identity():
    x = ls(jordan_system(2))
    f = CatMorphism.identity(x)
    kci = kernel_cokernel_image(f)
    assert kci.ker.is_zero() and kci.coker.is_zero()
    assert kci.im.dims() == x.dims()


def test_kernel_cokernel_alpha_on_trivial():
    # (id, 0): shriek -> star on the trivial system has skyscraper kernel
    # and cokernel of dimension 1
    m = trivial_system()
    shriek, star = q(extend(m, "shriek")), q(extend(m, "star"))
    alpha = CatMorphism(shriek, star, [LinearMap.identity(1), M([[0]])])
    ker_ob, ker_mono = kernel(alpha)
    cok_ob, cok_epi = cokernel(alpha)
    assert ker_ob.dims() == (0, 1) and cok_ob.dims() == (0, 1)
    assert (alpha @ ker_mono).is_zero()
    assert (cok_epi @ alpha).is_zero()


def test_kernel_cokernel_one_minus_t():
    # 1 - J2 as an endomorphism of (Q^2, J2)
    x = ls(jordan_system(2))
    f = CatMorphism(x, x, [LinearMap.identity(2) - jordan_matrix(2)])
    kci = kernel_cokernel_image(f)
    assert kci.ker.dims() == (1,) and kci.coker.dims() == (1,)
    assert kci.ker.payload.T == M([[1]])
    assert kci.coker.payload.T == M([[1]])
    # universal identities
    assert (f @ kci.ker_mono).is_zero()
    assert (kci.coker_epi @ f).is_zero()
    assert kci.im_mono @ kci.im_epi == f


def test_biproduct():
    x, y = ls(trivial_system()), ls(rank_one(2))
    bp = biproduct(x, y)
    assert bp.ob.payload.T == LinearMap.diagonal([1, 2])
    assert bp.proj1 @ bp.inj1 == CatMorphism.identity(x)
    assert bp.proj2 @ bp.inj2 == CatMorphism.identity(y)
    assert (bp.proj2 @ bp.inj1).is_zero()
    s = bp.inj1 @ bp.proj1 + bp.inj2 @ bp.proj2
    assert s == CatMorphism.identity(bp.ob)


def test_biproduct_quadruples_dims_add():
    f1, f2 = extend(jordan_system(2), "shriek"), skyscraper(3)
    bp = biproduct(q(f1), q(f2))
    assert bp.ob.dims() == (2, 5)
    with pytest.raises(RealizationMismatch):
        biproduct(q(f1), vs(2))


def test_biproduct_with_zero():
    x = ls(jordan_system(2))
    z = ls(LocalSystem(LinearMap.zero(0, 0)))
    bp = biproduct(x, z)
    assert are_isomorphic(bp.ob, x).kind == "yes"


def test_hom_space_dims():
    assert len(hom_space(ls(trivial_system()), ls(trivial_system()))) == 1
    assert len(hom_space(ls(rank_one(2)), ls(rank_one(3)))) == 0
    # jordan(2) endomorphisms: polynomials in J2, dimension 2
    assert len(hom_space(ls(jordan_system(2)), ls(jordan_system(2)))) == 2


def test_hom_space_shriek_to_star():
    m = trivial_system()
    basis = hom_space(q(extend(m, "shriek")), q(extend(m, "star")))
    assert len(basis) == 1
    # spanned by the natural map (id, 1 - t) up to scale
    phi = basis[0]
    u_comp = phi.components[0]
    assert u_comp[0, 0] != 0
    assert phi.components[1] == (LinearMap.identity(1) - M([[1]])).scale(1)


def test_are_isomorphic_reflexive_and_conjugate():
    x = ls(jordan_system(2))
    assert are_isomorphic(x, x).kind == "yes"
    # J2 and its inverse transpose are conjugate
    y = ls(LocalSystem(jordan_matrix(2).inv().transpose()))
    v = are_isomorphic(x, y)
    assert v.kind == "yes" and v.witness.is_iso()
    # J2 vs identity: conclusively distinct
    z = ls(LocalSystem(LinearMap.identity(2)))
    assert are_isomorphic(x, z).kind == "no"
    assert are_isomorphic(x, ls(trivial_system())).kind == "no"


def test_middle_cohomology_exact_complex():
    x = ls(jordan_system(2))
    bp = biproduct(x, x)
    diag = bp.inj1 + bp.inj2
    diff = bp.proj1 - bp.proj2
    c = ThreeTermComplex(diag, diff)
    mc = middle_cohomology(c)
    assert mc.H.is_zero()
    # the subquotient square holds
    pi_iota = mc.coker_epi @ mc.ker_mono
    assert mc.k @ mc.h == pi_iota


def test_middle_cohomology_zero_maps():
    x = ls(jordan_system(2))
    z = ls(LocalSystem(LinearMap.zero(0, 0)))
    c = ThreeTermComplex(CatMorphism.zero(z, x), CatMorphism.zero(x, z))
    mc = middle_cohomology(c)
    assert mc.H.dims() == x.dims()
    assert len(hom_space(mc.H, x)) == 2


def test_middle_cohomology_dimension_formula():
    x = vs(3)
    l = CatMorphism(vs(1), x, [M([[1], [0], [0]])])
    r = CatMorphism(x, vs(1), [M([[0, 0, 1]])])
    mc = middle_cohomology(ThreeTermComplex(l, r))
    k = kernel(r)[0].payload
    assert mc.H.payload == k - 1


def test_not_a_complex():
    x = vs(1)
    f = CatMorphism.identity(x)
    with pytest.raises(NotAComplex):
        ThreeTermComplex(f, f)


def test_middle_cohomology_functorial():
    x = vs(2)
    z = vs(0)
    c = ThreeTermComplex(CatMorphism.zero(z, x), CatMorphism.zero(x, z))
    twist = CatMorphism(x, x, [M([[0, 1], [1, 0]])])
    induced = middle_cohomology_map(c, c, CatMorphism.identity(z), twist, CatMorphism.identity(z))
    assert induced.components[0] == M([[0, 1], [1, 0]])


def make_vs_ses(f_mat, g_mat):
    a, b, c = vs(f_mat.cols), vs(f_mat.rows), vs(g_mat.rows)
    return CatMorphism(a, b, [f_mat]), CatMorphism(b, c, [g_mat])


def test_snake_iso_verticals():
    f, g = make_vs_ses(M([[1], [0]]), M([[0, 1]]))
    verticals = [CatMorphism.identity(x) for x in (f.source, f.target, g.target)]
    d = SESMorphism(f, g, f, g, *verticals)
    res = snake(d)
    assert all(t.is_zero() for t in res.terms)
    assert res.gamma.is_zero()


def test_snake_nonzero_gamma():
    # rows 0 -> Q -> Q^2 -> Q -> 0, middle vertical the nilpotent shift:
    # the kernel of the right vertical (everything) connects isomorphically
    # onto the cokernel of the left vertical (everything)
    f, g = make_vs_ses(M([[1], [0]]), M([[0, 1]]))
    zero_a = CatMorphism.zero(f.source, f.source)
    zero_c = CatMorphism.zero(g.target, g.target)
    shift = CatMorphism(f.target, f.target, [M([[0, 1], [0, 0]])])
    d = SESMorphism(f, g, f, g, zero_a, shift, zero_c)
    res = snake(d)
    gamma = res.gamma
    assert gamma.components[0] == M([[1]])
    assert is_exact_sequence(res.maps)


def test_snake_section_independence():
    f, g = make_vs_ses(M([[1], [0]]), M([[0, 1]]))
    zero_a = CatMorphism.zero(f.source, f.source)
    zero_c = CatMorphism.zero(g.target, g.target)
    shift = CatMorphism(f.target, f.target, [M([[0, 1], [0, 0]])])
    d = SESMorphism(f, g, f, g, zero_a, shift, zero_c)
    base = snake(d)
    # perturb the canonical section by a kernel-valued correction
    s = section_of_epi(g.components[0])
    correction = f.components[0] @ M([[7]])
    perturbed = snake(d, sections=[s + correction])
    assert perturbed.gamma == base.gamma


def test_snake_rejects_bad_rows():
    f, g = make_vs_ses(M([[1], [0]]), M([[1, 0]]))
    with pytest.raises(InvalidSESMorphism):
        SESMorphism(f, g, f, g, *[CatMorphism.identity(x) for x in (f.source, f.target, g.target)])


def test_lift_and_descend():
    x = ls(jordan_system(2))
    f = CatMorphism(x, x, [LinearMap.identity(2) - jordan_matrix(2)])
    im_ob, im_mono, im_epi = image(f)
    assert lift_through_mono(im_mono, f) == im_epi
    cok_ob, cok_epi = cokernel(f)
    with pytest.raises(InvalidMorphism):
        descend_along_epi(cok_epi, CatMorphism.identity(x))
