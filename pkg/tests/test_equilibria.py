import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lvfte import (
    EquilibriumKind,
    InvalidParameter,
    KineticParams,
    NullclineSide,
    SingularLinearization,
    Species,
    Stability,
    State2,
    all_equilibria,
    boundary_equilibria,
    classify_stability,
    interior_equilibria,
    jacobian,
    nullcline_value,
    rhs,
)

# Root positions frozen from an independent scipy.optimize.brentq pass over
# the same nullcline reductions (xtol 1e-14).
MIXED_SADDLE_SINK = KineticParams(a1=1.8, b1=1, c1=0.5, a2=3, b2=1, c2=1.8, p=1.0, q=0.3)
MIXED_ROOTS = ((0.578811655203, 2.442376689593), (1.132312105631, 1.335375788738))

FRACTIONAL_P_SADDLE = KineticParams(a1=1.8, b1=1, c1=0.5, a2=3, b2=1, c2=1.8, p=0.4, q=1.0)
FRACTIONAL_P_ROOT = (0.679287681886, 1.777282172605)

WEAK = KineticParams(a1=1, b1=1, c1=0.3, a2=2, b2=1, c2=1.8)
STRONG_SYMMETRIC = KineticParams(a1=1, b1=1, c1=2, a2=1, b2=1, c2=2)


class TestNullclines:
    def test_linear_branches(self):
        k = WEAK
        g = NullclineSide(Species.V, "u")
        assert nullcline_value(k, g, 0.0) == pytest.approx(2.0)  # a2/b2
        assert nullcline_value(k, g, 1.0) == pytest.approx((2 - 1.8) / 1)
        f1 = NullclineSide(Species.U, "v")
        assert nullcline_value(k, f1, 0.0) == pytest.approx(1.0)  # a1/b1

    def test_power_branch_at_zero(self):
        # u^(1-p) -> 1 when p = 1, -> 0 when p < 1
        f = NullclineSide(Species.U, "u")
        assert nullcline_value(MIXED_SADDLE_SINK, f, 0.0) == pytest.approx(3.6)
        assert nullcline_value(FRACTIONAL_P_SADDLE, f, 0.0) == 0.0

    def test_power_branch_value(self):
        f = NullclineSide(Species.U, "u")
        k = FRACTIONAL_P_SADDLE
        u = 0.5
        assert nullcline_value(k, f, u) == pytest.approx(
            u**0.6 * (1.8 - u) / 0.5, rel=1e-14
        )

    def test_rejects_negative_coordinate(self):
        with pytest.raises(InvalidParameter):
            nullcline_value(WEAK, NullclineSide(Species.U, "u"), -0.1)

    def test_rejects_bad_parameterization(self):
        with pytest.raises(InvalidParameter):
            NullclineSide(Species.U, "x")


class TestJacobian:
    def test_matches_finite_differences(self):
        k = FRACTIONAL_P_SADDLE
        at = State2(0.7, 1.3)
        J = jacobian(k, at)
        eps = 1e-7
        for col, (du, dv) in enumerate([(eps, 0.0), (0.0, eps)]):
            plus = rhs(k, State2(at.u + du, at.v + dv))
            minus = rhs(k, State2(at.u - du, at.v - dv))
            fd = (np.array(plus) - np.array(minus)) / (2 * eps)
            assert J[:, col] == pytest.approx(fd, rel=1e-6, abs=1e-6)

    def test_singular_at_axis_with_fractional_power(self):
        with pytest.raises(SingularLinearization):
            jacobian(FRACTIONAL_P_SADDLE, State2(0.0, 3.0))
        with pytest.raises(SingularLinearization):
            jacobian(MIXED_SADDLE_SINK, State2(1.8, 0.0))

    def test_defined_at_axis_with_unit_power(self):
        J = jacobian(MIXED_SADDLE_SINK, State2(0.0, 3.0))
        assert J[0, 0] == pytest.approx(1.8 - 0.5 * 3)
        assert J[0, 1] == 0.0

    def test_rejects_negative_state(self):
        with pytest.raises(InvalidParameter):
            jacobian(WEAK, State2(-0.1, 1.0))


class TestClassifyStability:
    @pytest.mark.parametrize(
        "matrix,expected",
        [
            ([[1, 0], [0, 2]], Stability.SOURCE),
            ([[-1, 0], [0, -2]], Stability.SINK),
            ([[1, 0], [0, -1]], Stability.SADDLE),
            ([[0, 1], [-1, 0]], Stability.CENTER),
            ([[-1, 1], [-1, -1]], Stability.SPIRAL_SINK),
            ([[1, 1], [-1, 1]], Stability.SPIRAL_SOURCE),
            ([[0, 0], [0, 1]], Stability.NON_HYPERBOLIC),
        ],
    )
    def test_synthetic_matrices(self, matrix, expected):
        assert classify_stability(np.array(matrix, dtype=float)) is expected


class TestBoundaryEquilibria:
    def test_smooth_case_kinds_and_stability(self):
        k = KineticParams(a1=1.8, b1=1, c1=0.5, a2=3, b2=1, c2=1.8)
        eqs = boundary_equilibria(k)
        by_kind = {eq.kind: eq for eq in eqs}
        assert set(by_kind) == {
            EquilibriumKind.ORIGIN,
            EquilibriumKind.U_AXIS,
            EquilibriumKind.V_AXIS,
        }
        assert by_kind[EquilibriumKind.ORIGIN].stability is Stability.SOURCE
        u_axis = by_kind[EquilibriumKind.U_AXIS]
        assert u_axis.point == pytest.approx((1.8, 0.0))
        assert u_axis.stability is Stability.SINK
        v_axis = by_kind[EquilibriumKind.V_AXIS]
        assert v_axis.point == pytest.approx((0.0, 3.0))
        assert v_axis.stability is Stability.SADDLE

    def test_fractional_q_leaves_axis_unclassifiable(self):
        eqs = boundary_equilibria(MIXED_SADDLE_SINK)
        by_kind = {eq.kind: eq for eq in eqs}
        for kind in (EquilibriumKind.ORIGIN, EquilibriumKind.U_AXIS):
            assert by_kind[kind].stability is Stability.UNCLASSIFIABLE
            assert by_kind[kind].jacobian is None
        # v-axis has v = 3 > 0 and p = 1, so its linearization exists
        assert by_kind[EquilibriumKind.V_AXIS].stability is Stability.SADDLE


class TestInteriorEquilibria:
    def test_mixed_exponent_pair_matches_frozen_roots(self):
        eqs = interior_equilibria(MIXED_SADDLE_SINK)
        assert len(eqs) == 2
        for eq, (u_ref, v_ref) in zip(eqs, MIXED_ROOTS):
            assert eq.point.u == pytest.approx(u_ref, abs=1e-9)
            assert eq.point.v == pytest.approx(v_ref, abs=1e-9)
        assert eqs[0].stability is Stability.SINK
        assert eqs[1].stability is Stability.SADDLE

    def test_fractional_p_single_saddle(self):
        eqs = interior_equilibria(FRACTIONAL_P_SADDLE)
        assert len(eqs) == 1
        assert eqs[0].point.u == pytest.approx(FRACTIONAL_P_ROOT[0], abs=1e-9)
        assert eqs[0].point.v == pytest.approx(FRACTIONAL_P_ROOT[1], abs=1e-9)
        assert eqs[0].stability is Stability.SADDLE

    def test_weak_regime_closed_form(self):
        eqs = interior_equilibria(WEAK)
        assert len(eqs) == 1
        den = 1 * 1 - 0.3 * 1.8
        assert eqs[0].point.u == pytest.approx((1 * 1 - 0.3 * 2) / den, rel=1e-10)
        assert eqs[0].point.v == pytest.approx((2 * 1 - 1.8 * 1) / den, rel=1e-10)
        assert eqs[0].stability is Stability.SINK

    def test_strong_symmetric_saddle(self):
        eqs = interior_equilibria(STRONG_SYMMETRIC)
        assert len(eqs) == 1
        assert eqs[0].point == pytest.approx((1 / 3, 1 / 3), rel=1e-10)
        assert eqs[0].stability is Stability.SADDLE

    def test_exclusion_regime_has_no_interior(self):
        k = KineticParams(a1=1.8, b1=1, c1=0.5, a2=3, b2=1, c2=1.8)
        assert interior_equilibria(k) == []

    def test_residuals_vanish_at_reported_points(self):
        for k in (MIXED_SADDLE_SINK, FRACTIONAL_P_SADDLE, WEAK, STRONG_SYMMETRIC):
            for eq in interior_equilibria(k):
                du, dv = rhs(k, eq.point)
                assert abs(du) < 1e-9 and abs(dv) < 1e-9

    @given(
        a1=st.floats(0.5, 3.0),
        a2=st.floats(0.5, 3.0),
        b1=st.floats(0.5, 3.0),
        b2=st.floats(0.5, 3.0),
        f1=st.floats(0.05, 0.9),
        f2=st.floats(0.05, 0.9),
    )
    @settings(max_examples=40, deadline=None)
    def test_weak_regime_always_single_interior_at_closed_form(
        self, a1, a2, b1, b2, f1, f2
    ):
        # c1, c2 scaled inside the weak wedge by construction
        c1 = f1 * b2 * a1 / a2
        c2 = f2 * b1 * a2 / a1
        k = KineticParams(a1=a1, b1=b1, c1=c1, a2=a2, b2=b2, c2=c2)
        den = b1 * b2 - c1 * c2
        u_star = (a1 * b2 - c1 * a2) / den
        v_star = (a2 * b1 - c2 * a1) / den
        eqs = interior_equilibria(k)
        assert len(eqs) == 1
        assert eqs[0].point.u == pytest.approx(u_star, rel=1e-6)
        assert eqs[0].point.v == pytest.approx(v_star, rel=1e-6)


class TestAllEquilibria:
    def test_order_boundary_first_then_interior_by_u(self):
        eqs = all_equilibria(MIXED_SADDLE_SINK)
        kinds = [eq.kind for eq in eqs]
        assert kinds[:3] == [
            EquilibriumKind.ORIGIN,
            EquilibriumKind.U_AXIS,
            EquilibriumKind.V_AXIS,
        ]
        interior = eqs[3:]
        assert [eq.kind for eq in interior] == [EquilibriumKind.INTERIOR] * 2
        assert interior[0].point.u < interior[1].point.u
