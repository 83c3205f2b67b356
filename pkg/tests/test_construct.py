"""Scheme constructors: the closed-form two-stage family, the Newton-solved
three-stage family, and the generic target search."""

import math

import numpy as np
import pytest

from rkwso.construct import (
    ConstructionError,
    ConstructionSpec,
    build_wso3_p2_s2,
    build_wso3_p3_s3,
    eigenvalue_sign_note,
    feasibility_barriers,
    generic_search,
    solve_branches,
)
from rkwso.barriers import NAME_DIRK_WSO_ORDER_BUDGET
from rkwso.orders import classical_order, tau, wso
from rkwso.poly import Polynomial, RationalFunction
from rkwso.stability import order_vs_exp, stability_function
from rkwso.tableau import s_reducibility

SQRT2 = math.sqrt(2.0)


class TestTwoStageFamily:
    def test_minus_sign_entries(self):
        t = build_wso3_p2_s2("minus")
        # a11 = 1 - sqrt(2)/2 (binary64; the subtraction is exact by Sterbenz)
        assert float(t.a(0, 0)) == 1.0 - SQRT2 / 2.0
        assert abs(float(t.a(0, 0)) - 0.2928932188134524755) <= 1e-15
        assert float(t.a(1, 0)) == 0.5 + SQRT2 / 2.0
        assert float(t.b[0]) == 0.5 + SQRT2 / 4.0

    def test_left_eigenvector_relation(self):
        # b^T A = (1/2) b^T for either sign
        for sign in ("plus", "minus"):
            t = build_wso3_p2_s2(sign)
            bA = np.array([float(x) for x in t.b]) @ np.array(
                [[float(x) for x in row] for row in t.A]
            )
            assert np.allclose(bA, 0.5 * np.array([float(x) for x in t.b]), atol=1e-15)

    def test_orders_both_signs(self):
        for sign in ("plus", "minus"):
            t = build_wso3_p2_s2(sign)
            assert wso(t) == 3
            assert classical_order(t) == 2

    def test_bad_sign_rejected(self):
        with pytest.raises(ConstructionError):
            build_wso3_p2_s2("both")


class TestThreeStageFamily:
    @pytest.mark.parametrize("a", [0.25, 0.5, 2.0])
    @pytest.mark.parametrize("sign", ["plus", "minus"])
    def test_three_branches_exactly_one_irreducible(self, a, sign):
        _, result = solve_branches(a, sign)
        assert len(result.branches) == 3
        assert len(result.reducible_indices) == 2
        assert result.irreducible_index >= 0

    @pytest.mark.parametrize("a", [0.25, 0.5, 2.0])
    def test_rejected_branches_match_reducible_structures(self, a):
        data, result = solve_branches(a, "minus")
        a11, a21, a22, a33 = (
            data["a11"],
            data["a21"],
            data["a22"],
            data["a33"],
        )
        patterns = {
            "first-column": (a11 - a33, 0.0),
            "row-copy": (a21, a22 - a33),
        }
        seen = set()
        for idx in result.reducible_indices:
            a31, a32 = result.branches[idx]
            for label, (p1, p2) in patterns.items():
                if abs(a31 - p1) <= 1e-7 and abs(a32 - p2) <= 1e-7:
                    seen.add(label)
        assert seen == {"first-column", "row-copy"}

    @pytest.mark.parametrize("a", [0.25, 0.5, 2.0])
    @pytest.mark.parametrize("sign", ["plus", "minus"])
    def test_constructed_scheme_properties(self, a, sign):
        t = build_wso3_p3_s3(a, sign)
        assert s_reducibility(t) is None
        assert wso(t) == 3
        assert classical_order(t) == 3
        assert order_vs_exp(stability_function(t)) == 3
        # last diagonal entry exactly as typed
        assert float(t.a(2, 2)) == (3 * a - 2) / (6 * (a - 1))
        # residual vectors tau2 and tau3 are parallel
        t2 = np.array([float(x) for x in tau(t, 2)])
        t3 = np.array([float(x) for x in tau(t, 3)])
        sine = np.linalg.norm(np.cross(t2, t3)) / (
            np.linalg.norm(t2) * np.linalg.norm(t3)
        )
        assert sine <= 1e-10
        # quadrature condition that the construction implies
        b = np.array([float(x) for x in t.b])
        c = np.array([float(x) for x in t.c])
        assert abs(b @ c ** 2 - 1.0 / 3.0) <= 1e-12

    def test_leading_block_is_scaled_two_stage_matrix(self):
        # 20 parameter samples across (0, 2/3) and (1, 3), alternating signs
        lows = [0.05 + 0.06 * i for i in range(10)]
        highs = [1.1 + 0.2 * i for i in range(10)]
        for idx, a in enumerate(lows + highs):
            sign = "minus" if idx % 2 == 0 else "plus"
            t3 = build_wso3_p3_s3(a, sign)
            t2 = build_wso3_p2_s2(sign)
            for i in range(2):
                for j in range(2):
                    assert float(t3.a(i, j)) == pytest.approx(
                        a * float(t2.a(i, j)), abs=1e-14, rel=1e-14
                    )
            assert float(t3.a(2, 2)) == (3 * a - 2) / (6 * (a - 1))
            assert eigenvalue_sign_note(a)

    def test_stability_matches_alpha_formula(self):
        from fractions import Fraction as F

        from rkwso.stability import ortho_basis

        for a in (0.25, 0.5, 2.0):
            t = build_wso3_p3_s3(a, "minus")
            basis = ortho_basis(2)
            q1, q2 = basis.polys[1], basis.polys[2]
            alpha1 = -float(q2.evaluate(a / 2)) / float(q1.evaluate(a / 2))
            num = Polynomial([12.0, 6 + 12 * alpha1, 1 + 6 * alpha1], False)
            den = Polynomial([12.0, 12 * alpha1 - 6, 1 - 6 * alpha1], False)
            target = RationalFunction(num, den)
            assert stability_function(t).equals(target)

    def test_invalid_parameters_rejected(self):
        for bad in (0.0, 1.0, 2.0 / 3.0):
            with pytest.raises(ConstructionError):
                build_wso3_p3_s3(bad, "minus")


class TestGenericSearch:
    def test_infeasible_targets_cite_the_barrier(self):
        outcome = generic_search(
            ConstructionSpec(family="generic", targets=(2, 3, 3))
        )
        assert outcome.tableau is None
        assert not outcome.feasible
        assert NAME_DIRK_WSO_ORDER_BUDGET in outcome.diagnostic

    def test_feasibility_helper(self):
        ok, _ = feasibility_barriers(2, 2, 3)
        assert ok
        bad, diag = feasibility_barriers(2, 3, 3)
        assert not bad and NAME_DIRK_WSO_ORDER_BUDGET in diag

    def test_recovers_two_stage_family(self):
        outcome = generic_search(
            ConstructionSpec(family="generic", targets=(2, 2, 3)), n_starts=30
        )
        assert outcome.tableau is not None
        t = outcome.tableau
        assert wso(t) == 3
        assert order_vs_exp(stability_function(t)) == 2
        # the family is unique up to the sign branch: a22 = 1/2 and
        # a11 = 1 -/+ sqrt(2)/2
        assert float(t.a(1, 1)) == pytest.approx(0.5, abs=1e-8)
        assert min(
            abs(float(t.a(0, 0)) - (1 - SQRT2 / 2)),
            abs(float(t.a(0, 0)) - (1 + SQRT2 / 2)),
        ) <= 1e-8

    def test_finds_three_stage_family_member(self):
        outcome = generic_search(
            ConstructionSpec(family="generic", targets=(3, 3, 3)), n_starts=40
        )
        assert outcome.tableau is not None
        t = outcome.tableau
        assert wso(t) == 3
        assert order_vs_exp(stability_function(t)) == 3
        # member of the parameterized family: a = 2 a22, a33 determined
        a = 2 * float(t.a(1, 1))
        expected_a33 = (3 * a - 2) / (6 * (a - 1))
        assert float(t.a(2, 2)) == pytest.approx(expected_a33, abs=1e-6)
        assert float(t.a(0, 0)) == pytest.approx(
            a * (1 - SQRT2 / 2), abs=1e-6
        ) or float(t.a(0, 0)) == pytest.approx(a * (1 + SQRT2 / 2), abs=1e-6)


def test_generic_search_honors_diagonal_seed():
    a11 = 1 - SQRT2 / 2
    outcome = generic_search(
        ConstructionSpec(family="generic", targets=(2, 2, 3), diagonal_seed=(a11,)),
        n_starts=30,
    )
    assert outcome.tableau is not None
    t = outcome.tableau
    assert float(t.a(0, 0)) == pytest.approx(a11, abs=0.0)  # fixed, not solved
    assert wso(t) == 3
