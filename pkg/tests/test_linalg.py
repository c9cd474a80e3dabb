import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pervglue.errors import NotInvertible, NotNilpotent, ShapeMismatch
from pervglue.linalg import (
    LinearMap,
    QQ,
    Subspace,
    block_diag,
    char_poly,
    echelon_solve,
    fitting_one,
    hstack,
    kernel_basis,
    kron,
    nilpotency_index,
    rational_roots,
    rational_spectrum,
    rcef,
    restrict_to_subspace,
    solve_columns,
)

M = LinearMap.of
I2 = LinearMap.identity(2)
J2 = M([[1, -1], [0, 1]])


small_entries = st.integers(min_value=-3, max_value=3)


def random_matrix_strategy(rows, cols):
    return st.lists(
        st.lists(small_entries, min_size=cols, max_size=cols), min_size=rows, max_size=rows
    ).map(lambda rows_: LinearMap.of(rows_) if rows_ else LinearMap.zero(0, cols))


def test_shapes_and_equality():
    a = M([[1, 2], [3, 4]])
    assert a.rows == 2 and a.cols == 2
    assert a == M([["1", 2], [3, 4]])
    assert hash(a) == hash(M([[1, 2], [3, 4]]))
    with pytest.raises(ShapeMismatch):
        LinearMap(2, 2, [[1, 2]])


def test_empty_maps_compose():
    a = LinearMap.zero(0, 3)
    b = LinearMap.zero(3, 0)
    assert (a @ LinearMap.identity(3)).rows == 0
    assert (LinearMap.identity(3) @ b).cols == 0
    assert (b @ a) == LinearMap.zero(3, 3)
    assert (a @ b) == LinearMap.zero(0, 0)


def test_invert_example():
    # multiply back to the identity
    a = M([[1, -1], [0, 1]])
    assert a.inv() == M([[1, 1], [0, 1]])
    assert a @ a.inv() == I2
    with pytest.raises(NotInvertible):
        M([[1, 1], [1, 1]]).inv()


def test_kron_one_by_one():
    assert kron(M([[2]]), J2) == M([[2, -2], [0, 2]])


def test_kron_block_order():
    a = M([[0, 1], [2, 0]])
    b = M([[1, 2], [3, 4]])
    k = kron(a, b)
    assert k.take_rows([0, 1]).take_cols([2, 3]) == b  # block (0,1) = a[0,1]*b
    assert k.take_rows([2, 3]).take_cols([0, 1]) == b.scale(2)


def test_biproduct_block_placement():
    a = M([[1, 2], [3, 4]])
    b = M([[5]])
    d = block_diag(a, b)
    assert d.rows == 3 and d.cols == 3
    assert d[2, 2] == 5 and d[0, 2] == 0 and d[2, 0] == 0


def test_echelon_solve_identity_and_zero():
    es = echelon_solve(I2)
    assert es.kernel.dim == 0 and es.image.dim == 2
    es = echelon_solve(LinearMap.zero(2, 2))
    assert es.kernel.dim == 2 and es.image.dim == 0


def test_echelon_solve_nilpotent():
    # hand row-reduction: [[0,1],[0,0]] has kernel e1 and image e1
    m = M([[0, 1], [0, 0]])
    es = echelon_solve(m)
    e1 = Subspace.from_columns(M([[1], [0]]))
    assert es.kernel == e1
    assert es.image == e1
    assert m @ es.section == es.image.basis


@given(random_matrix_strategy(3, 4))
@settings(max_examples=60, deadline=None)
def test_rank_nullity(m):
    assert m.rank() + kernel_basis(m).cols == m.cols


@given(random_matrix_strategy(3, 3), random_matrix_strategy(3, 2))
@settings(max_examples=40, deadline=None)
def test_subspace_canonical_form(a, b):
    # two differently-presented spanning sets of one span agree bitwise
    cols = hstack([a @ b, b])
    shuffled = hstack([b, a @ b, (a @ b).scale(3)])
    assert Subspace.from_columns(cols) == Subspace.from_columns(shuffled)


@given(
    random_matrix_strategy(2, 2),
    random_matrix_strategy(3, 3),
    random_matrix_strategy(2, 2),
    random_matrix_strategy(3, 3),
)
@settings(max_examples=40, deadline=None)
def test_kron_functorial(a, b, c, d):
    assert kron(a, b) @ kron(c, d) == kron(a @ c, b @ d)


def test_section_is_right_inverse_on_image():
    m = M([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    es = echelon_solve(m)
    assert m @ es.section == es.image.basis


def test_fitting_one_trivial_cases():
    uni, rest = fitting_one(M([[1]]))
    assert uni.dim == 1 and rest.dim == 0
    uni, rest = fitting_one(M([[2]]))
    assert uni.dim == 0 and rest.dim == 1


def test_fitting_one_mixed_block():
    t = block_diag(J2, M([[3]]))
    uni, rest = fitting_one(t)
    assert uni == Subspace.from_columns(M([[1, 0], [0, 1], [0, 0]]))
    assert rest == Subspace.from_columns(M([[0], [0], [1]]))
    # restrictions: 1-t nilpotent on uni, invertible on rest
    r_uni = restrict_to_subspace(t, uni)
    r_rest = restrict_to_subspace(t, rest)
    assert nilpotency_index(LinearMap.identity(2) - r_uni) == 2
    assert (LinearMap.identity(1) - r_rest).is_invertible()


def test_fitting_dimensions_sum():
    t = block_diag(block_diag(J2, M([[2]])), M([[1]]))
    uni, rest = fitting_one(t)
    assert uni.dim + rest.dim == 4


def test_nilpotency_index_conventions():
    assert nilpotency_index(LinearMap.zero(3, 3)) == 1
    assert nilpotency_index(LinearMap.zero(0, 0)) == 0
    assert nilpotency_index(LinearMap.identity(2) - J2) == 2
    j4 = LinearMap.of(
        [[1, -1, 0, 0], [0, 1, -1, 0], [0, 0, 1, -1], [0, 0, 0, 1]]
    )
    assert nilpotency_index(LinearMap.identity(4) - j4) == 4
    with pytest.raises(NotNilpotent):
        nilpotency_index(I2)


def test_char_poly_and_roots():
    t = LinearMap.diagonal([2, 2, 1])
    cp = char_poly(t)
    # (x-2)^2 (x-1) = x^3 - 5x^2 + 8x - 4
    assert cp == [QQ(-4), QQ(8), QQ(-5), QQ(1)]
    assert rational_roots(cp) == [QQ(1), QQ(2)]


def test_rational_spectrum_diagonal():
    t = LinearMap.diagonal([2, 2, 1])
    pairs, residual = rational_spectrum(t)
    dims = {str(lam): sp.dim for lam, sp in pairs}
    assert dims == {"2": 2, "1": 1}
    assert residual.dim == 0


def test_rational_spectrum_rotation():
    rot = M([[0, -1], [1, 0]])
    pairs, residual = rational_spectrum(rot)
    assert pairs == []
    assert residual.dim == 2


def test_rational_spectrum_trivial():
    pairs, residual = rational_spectrum(M([[1]]))
    assert len(pairs) == 1 and pairs[0][0] == 1 and pairs[0][1].dim == 1
    assert residual.dim == 0


def test_spectrum_spaces_are_stable_and_complementary():
    t = block_diag(LinearMap.diagonal([2, 2]), M([[0, -1], [1, 0]]))
    pairs, residual = rational_spectrum(t)
    total = sum(sp.dim for _, sp in pairs) + residual.dim
    assert total == 4
    for _, sp in pairs:
        assert sp.contains(t @ sp.basis)
    assert residual.contains(t @ residual.basis)


def test_solve_columns_inconsistent():
    with pytest.raises(ShapeMismatch):
        solve_columns(M([[1], [1]]), M([[1], [2]]))


def test_rcef_p_over_q_entries():
    m = M([["1/2", 1], [1, 2]])
    basis = rcef(m)
    assert basis.cols == 1
    assert basis[0, 0] == 1
