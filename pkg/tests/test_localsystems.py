import pytest

from pervglue.errors import InvalidParameter, ShapeMismatch
from pervglue.linalg import LinearMap, Subspace, block_diag, kron, nilpotency_index
from pervglue.localsystems import (
    LocalSystem,
    dualize,
    ell_action,
    g_matrix,
    g_transpose_law,
    jordan_matrix,
    jordan_system,
    make_standard,
    psi_component,
    rank_one,
    stable_span,
    std_pairing,
    sub_quotient,
    tensor_L,
    trivial_system,
    twist_rank_one,
    unipotent_conjugator,
    unipotent_split,
)

M = LinearMap.of


def test_make_standard():
    assert make_standard("jordan", 1).T == M([[1]])
    assert make_standard("jordan", 2).T == M([[1, -1], [0, 1]])
    assert make_standard("rank_one", 2).T == M([[2]])
    with pytest.raises(InvalidParameter):
        make_standard("rank_one", 0)


def test_jordan_nilpotency():
    for a in range(1, 6):
        j = jordan_matrix(a)
        assert nilpotency_index(LinearMap.identity(a) - j) == a


def test_tensor_examples():
    assert tensor_L(trivial_system(), 2).T == jordan_matrix(2)
    assert tensor_L(rank_one(2), 2).T == M([[2, -2], [0, 2]])
    assert tensor_L(jordan_system(3), 4).dim == 12
    # a = 1 tensor is bitwise the original system
    m = jordan_system(2)
    assert tensor_L(m, 1) == m


def test_g_map_examples():
    triv = trivial_system()
    assert g_matrix(triv, 1, 1) == M([[1], [0]])
    assert g_matrix(triv, 2, -1) == M([[0, 1]])
    shift = LinearMap.identity(2) - jordan_matrix(2)
    assert g_matrix(triv, 1, 1) @ g_matrix(triv, 2, -1) == shift
    with pytest.raises(InvalidParameter):
        g_matrix(triv, 1, -2)


def test_g_intertwines_monodromy():
    m = LocalSystem(block_diag(jordan_matrix(2), M([[3]])))
    for a in range(0, 4):
        for r in range(-3, 4):
            if a + r < 0:
                continue
            g = g_matrix(m, a, r)
            assert g @ tensor_L(m, a).T == tensor_L(m, a + r).T @ g


def test_g_factorization_laws():
    # the three factorization identities, against the L-factor action
    m = LocalSystem(block_diag(jordan_matrix(2), M([[3]])))
    for a in range(0, 7):
        for r in range(-3, 4):
            if a + r < 0:
                continue
            one = LinearMap.identity(m.dim * (a + r))
            lhs = g_matrix(m, a, r) @ g_matrix(m, a + r, -r)
            assert lhs == (one - ell_action(m, a + r)).power(abs(r))
    # transitivity for same-sign steps
    for a in range(0, 5):
        for r in range(0, 3):
            for s in range(0, 3):
                assert g_matrix(m, a, r + s) == g_matrix(m, a + r, s) @ g_matrix(m, a, r)
    for a in range(4, 6):
        for r in range(-2, 1):
            for s in range(-1, 1):
                if a + r + s < 0:
                    continue
                assert g_matrix(m, a, r + s) == g_matrix(m, a + r, s) @ g_matrix(m, a, r)
    # kernels and images as canonical subspaces
    from pervglue.linalg import Subspace, kernel_basis

    for a in range(1, 5):
        for r in range(0, a + 1):
            one = LinearMap.identity(m.dim * a)
            power = (one - ell_action(m, a)).power(r)
            assert Subspace(m.dim * a, kernel_basis(power)) == Subspace(
                m.dim * a, kernel_basis(g_matrix(m, a, -r))
            )
            assert Subspace.from_columns(power) == Subspace.from_columns(
                g_matrix(m, a - r, r)
            )


def test_unipotent_split_examples():
    s = unipotent_split(jordan_system(3))
    assert s.uni.dim == 3 and s.rest.dim == 0 and s.index == 3
    s = unipotent_split(rank_one(5))
    assert s.uni.dim == 0 and s.rest.dim == 1 and s.index == 0
    s = unipotent_split(LocalSystem(block_diag(jordan_matrix(2), M([[2]]))))
    assert s.uni.dim == 2 and s.index == 2 and s.rest.dim == 1
    # exactness of the splitting
    one = LinearMap.identity(s.uni.dim)
    assert (one - s.uni.T).power(s.index).is_zero()
    assert (LinearMap.identity(s.rest.dim) - s.rest.T).is_invertible()


def test_dualize():
    assert dualize(rank_one(2)).T == M([["1/2"]])
    assert dualize(jordan_system(2)).T == M([[1, 0], [1, 1]])
    m = LocalSystem(block_diag(jordan_matrix(2), M([[3]])))
    assert dualize(dualize(m)) == m


def test_twist():
    m = jordan_system(2)
    assert twist_rank_one(m, 1) == m
    assert twist_rank_one(rank_one(2), "1/2") == trivial_system()
    assert twist_rank_one(m, 3).T == M([[3, -3], [0, 3]])
    with pytest.raises(InvalidParameter):
        twist_rank_one(m, 0)


def test_std_pairing_intertwines():
    for a in range(1, 7):
        p = std_pairing(a)
        j = jordan_matrix(a)
        assert p @ j == j.inv().transpose() @ p
        assert p.is_invertible()


def test_g_transpose_law_all_small():
    for m in [trivial_system(), jordan_system(2), LocalSystem(block_diag(jordan_matrix(2), M([[3]])))]:
        for a in range(0, 7):
            for r in range(-3, 4):
                if a + r < 0:
                    continue
                assert g_transpose_law(m, a, r)


def test_unipotent_conjugator_t_vs_inverse():
    for t in [jordan_matrix(3), kron(jordan_matrix(2), jordan_matrix(2))]:
        c = unipotent_conjugator(t, t.inv())
        assert c @ t == t.inv() @ c and c.is_invertible()


def test_dual_tensor_same_jordan_type():
    # dual of m (x) L^a and (dual m) (x) L^a have equal-rank unipotent powers
    m = LocalSystem(block_diag(jordan_matrix(2), M([[2]])))
    for a in range(0, 4):
        lhs = dualize(tensor_L(m, a))
        rhs = tensor_L(dualize(m), a)
        one = LinearMap.identity(lhs.dim)
        for k in range(1, 4):
            assert (one - lhs.T).power(k).rank() == (one - rhs.T).power(k).rank()


def test_psi_component_functorial():
    m = jordan_system(2)
    big = tensor_L(m, 2)
    g = g_matrix(m, 2, -1)
    ps = psi_component(big, tensor_L(m, 1), g)
    assert ps.rows == tensor_L(m, 1).psi_dim and ps.cols == big.psi_dim
    # composing with the inclusion reproduces the ambient restriction
    assert tensor_L(m, 1).unipotent_space.basis @ ps == g @ big.unipotent_space.basis


def test_stable_span_and_sub_quotient():
    m = jordan_system(2)
    e1 = M([[1], [0]])
    e2 = M([[0], [1]])
    assert stable_span(m, LinearMap.zero(2, 0)).dim == 0
    assert stable_span(m, e1).dim == 1
    assert stable_span(m, e2).dim == 2
    sq = sub_quotient(m, stable_span(m, e1))
    assert sq.sub.dim == 1 and sq.quot.dim == 1
    # projection kills the sub and the section splits it
    assert (sq.proj @ sq.incl).is_zero()
    assert (sq.proj @ sq.section).is_identity()
    with pytest.raises(InvalidParameter):
        sub_quotient(m, Subspace.from_columns(e2))
