import pytest

from lvfte import (
    KineticParams,
    NotASaddle,
    Stability,
    State2,
    classify_basin,
    interior_equilibria,
    trace_separatrix,
)

STRONG_SYMMETRIC = KineticParams(a1=1, b1=1, c1=2, a2=1, b2=1, c2=2)
STRONG_LOPSIDED = KineticParams(a1=1.1, b1=1, c1=1.2, a2=1, b2=1, c2=2)


def saddle_of(params):
    saddles = [e for e in interior_equilibria(params) if e.stability is Stability.SADDLE]
    assert len(saddles) == 1
    return saddles[0]


def interpolate_v(polyline, u_query):
    pts = sorted(polyline, key=lambda s: s.u)
    for a, b in zip(pts, pts[1:]):
        if a.u <= u_query <= b.u and b.u > a.u:
            w = (u_query - a.u) / (b.u - a.u)
            return a.v + w * (b.v - a.v)
    raise AssertionError(f"u={u_query} outside the traced range")


class TestTraceSeparatrix:
    def test_symmetric_case_is_the_diagonal(self):
        sep = trace_separatrix(STRONG_SYMMETRIC, saddle_of(STRONG_SYMMETRIC))
        assert len(sep.polyline) > 50
        for pt in sep.polyline:
            assert abs(pt.u - pt.v) < 1e-9

    def test_passes_through_the_saddle(self):
        saddle = saddle_of(STRONG_LOPSIDED)
        sep = trace_separatrix(STRONG_LOPSIDED, saddle)
        closest = min(
            abs(pt.u - saddle.point.u) + abs(pt.v - saddle.point.v)
            for pt in sep.polyline
        )
        assert closest < 1e-8

    def test_stays_in_the_closed_quadrant(self):
        sep = trace_separatrix(STRONG_LOPSIDED, saddle_of(STRONG_LOPSIDED))
        for pt in sep.polyline:
            assert pt.u >= -1e-12 and pt.v >= -1e-12

    def test_curve_is_a_graph_over_u_near_the_saddle(self):
        # the stable manifold enters the saddle transversally to both axes
        sep = trace_separatrix(STRONG_LOPSIDED, saddle_of(STRONG_LOPSIDED))
        us = [pt.u for pt in sep.polyline]
        assert min(us) < 0.02
        assert max(us) > 0.09

    def test_rejects_non_saddle_start(self):
        weak = KineticParams(a1=1, b1=1, c1=0.3, a2=2, b2=1, c2=1.8)
        sink = interior_equilibria(weak)[0]
        assert sink.stability is Stability.SINK
        with pytest.raises(NotASaddle):
            trace_separatrix(weak, sink)


class TestSeparatrixSplitsBasins:
    def test_forward_dynamics_agrees_with_the_traced_boundary(self):
        # probe points just above and below the curve at a few abscissae
        params = STRONG_LOPSIDED
        sep = trace_separatrix(params, saddle_of(params))
        for u_query in (0.02, 0.05, 0.071):
            v_sep = interpolate_v(sep.polyline, u_query)
            above = classify_basin(params, State2(u_query, v_sep * 1.05), 600.0)
            below = classify_basin(params, State2(u_query, v_sep * 0.95), 600.0)
            assert above.name == "v-axis", (u_query, v_sep, above)
            assert below.name == "u-axis", (u_query, v_sep, below)
