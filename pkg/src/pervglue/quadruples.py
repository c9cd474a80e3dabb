"""Quadruples (V, T, W, u, v): the model of sheaves on the whole line.

A glued sheaf is a local system (V, T) on the open part together with a
space W over the origin and maps u: V_1 -> W, v: W -> V_1 satisfying
v o u = 1 - t, where V_1 is the unipotent part of (V, T) taken in its
canonical Fitting coordinates.  The same shape serves as gluing data
(F_U, F_Z, u, v); the two types are distinguished only by intent.

The functors over the origin are all explicit here:

* ``extend`` builds the three standard extensions of a local system m:
  shriek    -> (m, V_1, id, 1 - t)
  star      -> (m, V_1, 1 - t, id)
  minimal   -> (m, im(1 - t), 1 - t corestricted, inclusion)
* ``skyscraper`` builds (0, W, 0, 0);
* ``boundary_cohomology`` reads off the two boundary invariants:
  restriction     -> (h^-1 = ker u, h^0 = coker u)
  corestriction   -> (h^0 = ker v, h^1 = coker v)
* ``dualize_X`` is the duality involution.  Its (u, v) convention,

      u_D = transpose(v) o iota,   v_D = -iota^{-1} o T_1^{-t} o transpose(u),

  with iota the canonical pairing between the unipotent part of the dual
  and the dual of the unipotent part (the annihilator identification), is
  the unique twist making the gluing constraint hold on the dual together
  with D o D ~ id (witness (-T^{-1}, id)) and D o shriek ~ star o D
  (witness (id, -T_1^{-t})).
"""

from __future__ import annotations

from typing import Tuple

from .errors import ConstraintViolation, InvalidParameter, ShapeMismatch
from .linalg import LinearMap, Subspace, solve_columns
from .localsystems import LocalSystem, dualize, psi_component


class GluedSheaf:
    """The quadruple (V, T, W, u, v) with v o u = 1 - t on the unipotent part.

    u and v are stored against the canonical Fitting coordinates of V_1, so
    the constraint is a literal matrix identity, checked on construction.
    """

    __slots__ = ("m_u", "w_dim", "u", "v")

    def __init__(self, m_u: LocalSystem, w_dim: int, u: LinearMap, v: LinearMap):
        k = m_u.psi_dim
        if u.rows != w_dim or u.cols != k:
            raise ShapeMismatch("u must map the unipotent part into W")
        if v.rows != k or v.cols != w_dim:
            raise ShapeMismatch("v must map W into the unipotent part")
        if v @ u != LinearMap.identity(k) - m_u.psi_action:
            raise ConstraintViolation("v o u differs from 1 - t on the unipotent part")
        object.__setattr__(self, "m_u", m_u)
        object.__setattr__(self, "w_dim", w_dim)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    def __setattr__(self, name, value):
        raise AttributeError("GluedSheaf is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, GluedSheaf)
            and self.m_u == other.m_u
            and self.w_dim == other.w_dim
            and self.u == other.u
            and self.v == other.v
        )

    def __hash__(self):
        return hash((self.m_u, self.w_dim, self.u, self.v))

    def __repr__(self):
        return "GluedSheaf(V dim %d, W dim %d)" % (self.m_u.dim, self.w_dim)

    @property
    def u_dim(self) -> int:
        return self.m_u.dim


# Gluing data carries the same fields and constraint as a glued sheaf; the
# category of gluing data is exactly where the inverse gluing functor lives.
GluingData = GluedSheaf


def extend(m: LocalSystem, mode: str) -> GluedSheaf:
    """The three standard extensions of a local system across the origin."""
    k = m.psi_dim
    one_minus_t = LinearMap.identity(k) - m.psi_action
    if mode == "shriek":
        return GluedSheaf(m, k, LinearMap.identity(k), one_minus_t)
    if mode == "star":
        return GluedSheaf(m, k, one_minus_t, LinearMap.identity(k))
    if mode == "minimal":
        image = Subspace.from_columns(one_minus_t)
        u = solve_columns(image.basis, one_minus_t)
        return GluedSheaf(m, image.dim, u, image.basis)
    raise InvalidParameter("unknown extension mode %r" % mode)


def skyscraper(w_dim: int) -> GluedSheaf:
    """The sheaf supported at the origin with fiber Q^w."""
    if w_dim < 0:
        raise InvalidParameter("negative dimension")
    zero_ls = LocalSystem(LinearMap.zero(0, 0))
    return GluedSheaf(zero_ls, w_dim, LinearMap.zero(w_dim, 0), LinearMap.zero(0, w_dim))


def restrict_U(f: GluedSheaf) -> LocalSystem:
    """Restriction to the open part (drops W, u, v)."""
    return f.m_u


def psi_model(m: LocalSystem) -> Tuple[int, LinearMap]:
    """The model-level unipotent nearby cycles: the generalized 1-eigenspace
    with its induced t-action, in canonical Fitting coordinates.

    This is the oracle all nearby-cycles constructions are tested against.
    """
    return m.psi_dim, m.psi_action


class BoundaryCohomology:
    """Kernel/cokernel data of u (restriction) or v (corestriction).

    ``maps`` holds (kernel inclusion, cokernel projection) witnessing the
    two dimensions.
    """

    __slots__ = ("which", "h", "maps")

    def __init__(self, which: str, h: Tuple[int, int], maps):
        object.__setattr__(self, "which", which)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "maps", maps)

    def __setattr__(self, name, value):
        raise AttributeError("BoundaryCohomology is immutable")


def boundary_cohomology(f: GluedSheaf, which: str) -> BoundaryCohomology:
    """Boundary invariants over the origin.

    ``i_star``  -> (h^-1, h^0) = (ker u, coker u)
    ``i_shriek`` -> (h^0, h^1) = (ker v, coker v)

    A minimal extension is characterized by coker u = 0 and ker v = 0 (both
    degree-zero invariants vanish); the outer ones ker u and coker v carry
    the nearby cycles of the effective formula.
    """
    from .linalg import echelon_solve

    if which == "i_star":
        es = echelon_solve(f.u)
        return BoundaryCohomology(
            which, (es.kernel.dim, f.w_dim - es.image.dim), (es.kernel.basis, es.image)
        )
    if which == "i_shriek":
        es = echelon_solve(f.v)
        k = f.m_u.psi_dim
        return BoundaryCohomology(
            which, (es.kernel.dim, k - es.image.dim), (es.kernel.basis, es.image)
        )
    raise InvalidParameter("which must be i_star or i_shriek")


# -- duality ------------------------------------------------------------------


def psi_duality_pairing(m: LocalSystem) -> LinearMap:
    """Canonical identification of the unipotent part of the dual system
    with the dual of the unipotent part.

    Concretely: the unipotent part of dual(m) is the annihilator of the
    non-unipotent summand of m, and the standard pairing of V* with V
    restricts to a perfect pairing with the unipotent part of m.  The
    returned matrix iota sends the Fitting coordinates of dual(m)'s
    unipotent part to coordinates of (unipotent part of m)*, i.e.
    iota = transpose(B_1) @ B_1_dual.
    """
    dm = dualize(m)
    iota = m.unipotent_space.basis.transpose() @ dm.unipotent_space.basis
    if not iota.is_invertible():
        raise ShapeMismatch("unipotent pairing degenerated")  # pragma: no cover
    return iota


def dualize_X(f: GluedSheaf) -> GluedSheaf:
    """Verdier duality on quadruples.

    (V, T, W, u, v) -> (V*, T^{-t}, W*, v^t o iota, -iota^{-1} T_1^{-t} u^t)
    where iota identifies the unipotent part of the dual with the dual of
    the unipotent part.  The constraint on the dual holds identically:
    v_D u_D = iota^{-1} (1 - T_1^{-t}) iota = 1 - (T_1 of the dual).
    """
    dm = dualize(f.m_u)
    iota = psi_duality_pairing(f.m_u)
    t1 = f.m_u.psi_action
    u_d = f.v.transpose() @ iota
    v_d = -(iota.inv() @ t1.inv().transpose() @ f.u.transpose())
    return GluedSheaf(dm, f.w_dim, u_d, v_d)
