"""Stage-order residuals, classical order, weak stage order, and the
residual/left Krylov subspaces.

The weak stage order (WSO) of a scheme is the largest q such that
b^T A^j tau^(k) = 0 for all 0 <= j <= s-1 and 1 <= k <= q, where
tau^(k) = A c^(k-1) - c^k / k.  Residual generation saturates at
m* = 2 n_c (no zero abscissa) or m* = 2 n_c - 1 (zero abscissa); if the
conditions still hold at m*, the WSO is infinite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .linalg import Eliminator, matvec, transpose, vdot, vec_pow
from .scalars import DEFAULT_TOL
from .trees import density, elementary_weight, trees_of_order

INF = math.inf


@dataclass(frozen=True)
class ResidualSet:
    kmax: int
    residuals: tuple  # residuals[k-1] = tau^(k)


def tau(t, k):
    """Stage order residual tau^(k) = A c^(k-1) - c^k / k."""
    ck1 = vec_pow(t.c, k - 1)
    ck = vec_pow(t.c, k)
    inv_k = Fraction(1, k) if t.exact else 1.0 / k
    return [a - inv_k * b for a, b in zip(matvec(t.A, ck1), ck)]


def residuals(t, kmax):
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    return ResidualSet(kmax, tuple(tuple(tau(t, k)) for k in range(1, kmax + 1)))


def saturation_index(t, tol=DEFAULT_TOL):
    """Smallest m beyond which K_m cannot grow (2 n_c, or 2 n_c - 1 when
    some abscissa vanishes)."""
    from .tableau import distinct_abscissas, has_zero_abscissa

    n_c = len(distinct_abscissas(t, tol))
    return 2 * n_c - (1 if has_zero_abscissa(t, tol) else 0)


def _tau_scale(t, vectors):
    return max([1.0] + [abs(float(x)) for v in vectors for x in v])


def _is_zero_scalar(t, x, scale, tol):
    if t.exact:
        return x == 0
    return abs(x) <= tol.zero * max(1.0, scale)


def check_B(t, xi, tol=DEFAULT_TOL):
    """Quadrature conditions b^T c^(k-1) = 1/k for k = 1..xi."""
    for k in range(1, xi + 1):
        target = Fraction(1, k) if t.exact else 1.0 / k
        val = vdot(t.b, vec_pow(t.c, k - 1))
        if not _is_zero_scalar(t, val - target, abs(float(val)) + 1.0, tol):
            return False
    return True


def check_C(t, xi, tol=DEFAULT_TOL):
    """Stage quadrature conditions tau^(k) = 0 for k = 1..xi."""
    for k in range(1, xi + 1):
        v = tau(t, k)
        scale = _tau_scale(t, [v])
        if not all(_is_zero_scalar(t, x, scale, tol) for x in v):
            return False
    return True


def stage_order_components(t, tol=DEFAULT_TOL):
    """Largest q1 with B(q1) and q2 with C(q2); q2 may be INF.

    B(2s+1) is impossible for an s-stage rule (quadrature exactness caps at
    degree 2s-1), so the B loop stops there.  The C loop stops at the
    saturation index: if all residuals through m* vanish, they all do.
    """
    q1 = 0
    for k in range(1, 2 * t.s + 2):
        if _b_single(t, k, tol):
            q1 = k
        else:
            break
    mstar = saturation_index(t, tol)
    q2 = 0
    for k in range(1, mstar + 1):
        v = tau(t, k)
        scale = _tau_scale(t, [v])
        if all(_is_zero_scalar(t, x, scale, tol) for x in v):
            q2 = k
        else:
            break
    if q2 == mstar:
        q2 = INF
    return q1, q2


def _b_single(t, k, tol):
    target = Fraction(1, k) if t.exact else 1.0 / k
    val = vdot(t.b, vec_pow(t.c, k - 1))
    return _is_zero_scalar(t, val - target, abs(float(val)) + 1.0, tol)


def stage_order(t, tol=DEFAULT_TOL):
    q1, q2 = stage_order_components(t, tol)
    return min(q1, q2)


def classical_order(t, pmax=6, tol=DEFAULT_TOL):
    """Largest p <= pmax with all rooted-tree conditions of order <= p."""
    if pmax > 6:
        raise ValueError("classical order checks are enumerated up to 6")
    p = 0
    for order in range(1, pmax + 1):
        for tree in trees_of_order(order):
            weight = elementary_weight(tree, t.A, t.b, t.ones)
            target = (
                Fraction(1, density(tree)) if t.exact else 1.0 / density(tree)
            )
            if not _is_zero_scalar(t, weight - target, abs(float(weight)) + 1.0, tol):
                return p
        p = order
    return p


def _wso_condition_holds(t, tau_k, b_krylov, scale, tol):
    """b^T A^j tau^(k) = 0 for all j, expressed via the precomputed left
    Krylov rows b^T A^j."""
    return all(
        _is_zero_scalar(t, vdot(row, tau_k), scale, tol) for row in b_krylov
    )


def _left_krylov_rows(t, count=None):
    rows = [list(t.b)]
    for _ in range((count or t.s) - 1):
        rows.append(matvec(transpose(t.A), rows[-1]))
    return rows


def wso(t, kcap=None, tol=DEFAULT_TOL):
    """Weak stage order by the algebraic definition; INF when the conditions
    survive through the saturation index."""
    mstar = saturation_index(t, tol)
    cap = mstar if kcap is None else min(kcap, mstar)
    b_rows = _left_krylov_rows(t)
    q = 0
    for k in range(1, cap + 1):
        tk = tau(t, k)
        scale = _tau_scale(t, [tk]) * max(
            1.0, max(abs(float(x)) for row in b_rows for x in row)
        )
        if _wso_condition_holds(t, tk, b_rows, scale, tol):
            q = k
        else:
            return q
    if kcap is not None and cap < mstar:
        return q  # truncated by the caller's cap; q is a lower bound
    return INF if q == mstar else q


@dataclass(frozen=True)
class SubspaceBasis:
    """Rank-revealed basis of K_m (kind "K") or Y (kind "Y")."""

    kind: str
    m: int | None
    basis: tuple  # tuple of vectors (tuples)
    dim: int
    exact: bool

    def eliminator(self, tol=DEFAULT_TOL):
        elim = Eliminator(self.exact, tol)
        for v in self.basis:
            elim.add(v)
        return elim

    def contains(self, v, tol=DEFAULT_TOL):
        return self.eliminator(tol).contains(v)

    def same_span(self, other, tol=DEFAULT_TOL):
        if self.dim != other.dim:
            return False
        mine = self.eliminator(tol)
        theirs = other.eliminator(tol)
        return all(mine.contains(v) for v in other.basis) and all(
            theirs.contains(v) for v in self.basis
        )


def space_K(t, m, tol=DEFAULT_TOL):
    """Invariant subspace spanned by A^j tau^(k), 0 <= j < s, 1 <= k <= m."""
    if m < 1:
        raise ValueError("m must be >= 1")
    elim = Eliminator(t.exact, tol)
    basis = []
    for k in range(1, m + 1):
        v = tau(t, k)
        for _ in range(t.s):
            if elim.add(v):
                basis.append(tuple(v))
            v = matvec(t.A, v)
    return SubspaceBasis("K", m, tuple(basis), elim.rank, t.exact)


def space_Y(t, tol=DEFAULT_TOL):
    """Left Krylov subspace spanned by (A^T)^j b, 0 <= j < s."""
    elim = Eliminator(t.exact, tol)
    basis = []
    v = list(t.b)
    At = transpose(t.A)
    for _ in range(t.s):
        if elim.add(v):
            basis.append(tuple(v))
        v = matvec(At, v)
    return SubspaceBasis("Y", None, tuple(basis), elim.rank, t.exact)


def wso_via_subspaces(t, kcap=None, tol=DEFAULT_TOL):
    """WSO as the largest q with Y orthogonal to K_q (INF at saturation)."""
    mstar = saturation_index(t, tol)
    cap = mstar if kcap is None else min(kcap, mstar)
    Y = space_Y(t, tol)
    q = 0
    for m in range(1, cap + 1):
        K = space_K(t, m, tol)
        scale = _tau_scale(t, list(Y.basis) + list(K.basis)) ** 2
        ortho = all(
            _is_zero_scalar(t, vdot(y, k), scale, tol)
            for y in Y.basis
            for k in K.basis
        )
        if ortho:
            q = m
        else:
            return q
    return INF if q == mstar else q


@dataclass(frozen=True)
class WsoOrthogonalityReport:
    q_algebraic: int | float
    q_subspace: int | float
    dim_Y: int
    dim_K: int
    dim_sum_ok: bool
    consistent: bool


def verify_wso_orthogonality(t, kcap=None, tol=DEFAULT_TOL):
    """Cross-checks the algebraic WSO against the subspace route and the
    dimension bound dim Y + dim K_q <= s."""
    q_alg = wso(t, kcap=kcap, tol=tol)
    q_sub = wso_via_subspaces(t, kcap=kcap, tol=tol)
    mstar = saturation_index(t, tol)
    m_for_dim = mstar if math.isinf(q_alg) else max(1, min(int(q_alg), mstar))
    dim_Y = space_Y(t, tol).dim
    dim_K = space_K(t, m_for_dim, tol).dim if q_alg >= 1 else 0
    dim_ok = dim_Y + dim_K <= t.s
    return WsoOrthogonalityReport(
        q_algebraic=q_alg,
        q_subspace=q_sub,
        dim_Y=dim_Y,
        dim_K=dim_K,
        dim_sum_ok=dim_ok,
        consistent=(q_alg == q_sub) and dim_ok,
    )


def check_albrecht(t, p=None, tol=DEFAULT_TOL):
    """Self-check: order p forces b^T A^j tau^(k) = 0 for 1 <= j+k <= p-1.

    Returns (ok, violations) with violations a list of (j, k) pairs.
    """
    if p is None:
        p = classical_order(t, tol=tol)
    b_rows = _left_krylov_rows(t, count=max(t.s, p - 1))
    violations = []
    for k in range(1, max(0, p - 1) + 1):
        tk = tau(t, k)
        for j in range(0, p - 1 - k + 1):
            scale = _tau_scale(t, [tk]) * max(
                1.0, max(abs(float(x)) for x in b_rows[j])
            )
            if not _is_zero_scalar(t, vdot(b_rows[j], tk), scale, tol):
                violations.append((j, k))
    return (not violations), violations
