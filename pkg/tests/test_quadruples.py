import pytest

from pervglue.errors import ConstraintViolation, InvalidParameter
from pervglue.linalg import LinearMap, block_diag
from pervglue.localsystems import (
    LocalSystem,
    dualize,
    jordan_matrix,
    jordan_system,
    rank_one,
    tensor_L,
    trivial_system,
)
from pervglue.quadruples import (
    GluedSheaf,
    boundary_cohomology,
    dualize_X,
    extend,
    psi_model,
    restrict_U,
    skyscraper,
)

M = LinearMap.of


def test_constructor_rejects_bad_uv():
    m = jordan_system(2)
    with pytest.raises(ConstraintViolation):
        GluedSheaf(m, 2, LinearMap.identity(2), LinearMap.identity(2))


def test_extend_trivial_shriek():
    f = extend(trivial_system(), "shriek")
    assert f.w_dim == 1
    assert f.u == M([[1]]) and f.v == M([[0]])


def test_extend_minimal_jordan2():
    f = extend(jordan_system(2), "minimal")
    assert f.w_dim == 1
    assert f.v @ f.u == LinearMap.identity(2) - jordan_matrix(2)


def test_extend_star_nonunipotent():
    f = extend(rank_one(2), "star")
    assert f.w_dim == 0


def test_extend_bad_mode():
    with pytest.raises(InvalidParameter):
        extend(trivial_system(), "both")


def test_skyscraper():
    assert skyscraper(0).w_dim == 0 and skyscraper(0).m_u.dim == 0
    s = skyscraper(3)
    assert s.w_dim == 3 and restrict_U(s).dim == 0


def test_restrict_U():
    m = jordan_system(2)
    assert restrict_U(extend(m, "shriek")) == m
    assert restrict_U(extend(m, "minimal")) == m


def test_psi_model_examples():
    d, act = psi_model(jordan_system(3))
    assert d == 3 and act == jordan_matrix(3)
    d, _ = psi_model(rank_one(7))
    assert d == 0
    d, _ = psi_model(LocalSystem(block_diag(jordan_matrix(3), M([[2]]))))
    assert d == 3


def test_boundary_cohomology():
    m = jordan_system(2)
    # minimal extension: both degree-zero boundary invariants vanish
    f = extend(m, "minimal")
    assert boundary_cohomology(f, "i_star").h == (1, 0)
    assert boundary_cohomology(f, "i_shriek").h == (0, 1)
    # skyscraper: u is the empty map
    s = skyscraper(4)
    assert boundary_cohomology(s, "i_star").h == (0, 4)
    # shriek on the trivial system: u = id
    f = extend(trivial_system(), "shriek")
    assert boundary_cohomology(f, "i_star").h == (0, 0)
    with pytest.raises(InvalidParameter):
        boundary_cohomology(f, "elsewhere")


def test_dualize_X_constraint_holds():
    for m in [trivial_system(), jordan_system(2), LocalSystem(block_diag(jordan_matrix(2), M([[3]])))]:
        for mode in ["shriek", "star", "minimal"]:
            dualize_X(extend(m, mode))  # constructor re-checks v o u = 1 - t
    dualize_X(skyscraper(2))


def test_dualize_X_double_dual_dims():
    m = LocalSystem(block_diag(jordan_matrix(2), M([[3]])))
    f = extend(m, "minimal")
    dd = dualize_X(dualize_X(f))
    assert dd.m_u.dim == f.m_u.dim and dd.w_dim == f.w_dim
    assert dd.m_u == f.m_u  # inverse-transpose applied twice restores T


def test_dualize_X_exchanges_boundaries():
    m = LocalSystem(block_diag(jordan_matrix(3), M([[2]])))
    f = extend(tensor_L(m, 2), "minimal")
    du = dualize_X(f)
    assert boundary_cohomology(f, "i_star").h == boundary_cohomology(du, "i_shriek").h[::-1]


def test_dual_of_tensor_statement():
    # dual of m (x) L^a has the Jordan type of (dual m) (x) L^a on the
    # unipotent part; compare the model data
    m = jordan_system(2)
    a = 3
    lhs = dualize(tensor_L(m, a))
    rhs = tensor_L(dualize(m), a)
    assert psi_model(lhs)[0] == psi_model(rhs)[0]
