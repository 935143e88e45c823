"""Time integration of the non-Lipschitz competition ODEs.

Provides an adaptive embedded Runge-Kutta (Dormand-Prince 4/5) integrator
with extinction-event detection and clamping, sufficient-condition
predicates for finite-time extinction, stable-manifold (separatrix)
tracing by backward integration, basin classification, and the closed-form
solution of the scalar comparison equation

    dg/dt = -C4 * exp(-C6*t) * g**alpha,   0 < alpha < 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .equilibria import Equilibrium, EquilibriumKind, Stability, all_equilibria
from .exceptions import (
    InvalidParameter,
    NonFiniteState,
    NotASaddle,
    StepSizeUnderflow,
)
from .kinetics import (
    AnyParams,
    HarvestParams,
    KineticParams,
    Species,
    State2,
    harvest_rhs,
    rhs,
)

# ---------------------------------------------------------------------------
# Dormand-Prince 5(4) coefficients
# ---------------------------------------------------------------------------

_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = (
    9017 / 3168,
    -355 / 33,
    46732 / 5247,
    49 / 176,
    -5103 / 18656,
)
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# Difference between the 5th- and 4th-order weights (error estimator).
_E1 = 35 / 384 - 5179 / 57600
_E3 = 500 / 1113 - 7571 / 16695
_E4 = 125 / 192 - 393 / 640
_E5 = -2187 / 6784 + 92097 / 339200
_E6 = 11 / 84 - 187 / 2100
_E7 = -1 / 40

Rhs2 = Callable[[float, float], Tuple[float, float]]


def _dp45(f: Rhs2, u: float, v: float, h: float):
    """One Dormand-Prince step of size h; returns (u5, v5, err_u, err_v)."""
    k1u, k1v = f(u, v)
    k2u, k2v = f(u + h * (_A21 * k1u), v + h * (_A21 * k1v))
    k3u, k3v = f(u + h * (_A31 * k1u + _A32 * k2u), v + h * (_A31 * k1v + _A32 * k2v))
    k4u, k4v = f(
        u + h * (_A41 * k1u + _A42 * k2u + _A43 * k3u),
        v + h * (_A41 * k1v + _A42 * k2v + _A43 * k3v),
    )
    k5u, k5v = f(
        u + h * (_A51 * k1u + _A52 * k2u + _A53 * k3u + _A54 * k4u),
        v + h * (_A51 * k1v + _A52 * k2v + _A53 * k3v + _A54 * k4v),
    )
    k6u, k6v = f(
        u + h * (_A61 * k1u + _A62 * k2u + _A63 * k3u + _A64 * k4u + _A65 * k5u),
        v + h * (_A61 * k1v + _A62 * k2v + _A63 * k3v + _A64 * k4v + _A65 * k5v),
    )
    u5 = u + h * (_B1 * k1u + _B3 * k3u + _B4 * k4u + _B5 * k5u + _B6 * k6u)
    v5 = v + h * (_B1 * k1v + _B3 * k3v + _B4 * k4v + _B5 * k5v + _B6 * k6v)
    k7u, k7v = f(u5, v5)
    err_u = h * (_E1 * k1u + _E3 * k3u + _E4 * k4u + _E5 * k5u + _E6 * k6u + _E7 * k7u)
    err_v = h * (_E1 * k1v + _E3 * k3v + _E4 * k4v + _E5 * k5v + _E6 * k6v + _E7 * k7v)
    return u5, v5, err_u, err_v


# ---------------------------------------------------------------------------
# Trajectory containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FteEvent:
    """A species reaching exactly zero at finite time t_star."""

    species: Species
    t_star: float


@dataclass(frozen=True)
class Attractor:
    """Terminal label of a trajectory: a named point it locked onto."""

    name: str  # origin | u-axis | v-axis | interior | steady | undecided
    point: State2


MAX_TIME_REACHED = "max-time-reached"


@dataclass
class Trajectory:
    """Time-stamped state samples with extinction events and a terminal label.

    terminal is None when integration stopped at t_end without locking onto
    an equilibrium (max time reached).
    """

    samples: List[Tuple[float, State2]] = field(default_factory=list)
    events: List[FteEvent] = field(default_factory=list)
    terminal: Optional[Attractor] = None

    @property
    def times(self) -> List[float]:
        return [t for t, _ in self.samples]

    @property
    def states(self) -> List[State2]:
        return [s for _, s in self.samples]

    @property
    def final_state(self) -> State2:
        return self.samples[-1][1]


@dataclass
class IntegrateOptions:
    rtol: float = 1e-9
    atol: float = 1e-12
    eps_ext: float = 1e-10  # extinction clamp threshold
    event_time_tol: float = 1e-10  # bisection tolerance on the event time
    lock_radius: float = 1e-6  # distance for terminal lock-on
    lock_speed: float = 1e-8  # speed for terminal lock-on
    t_eval: Optional[Sequence[float]] = None  # record only at these times
    known_equilibria: Optional[Sequence[Equilibrium]] = None
    detect_steady: Optional[bool] = None  # default: only for harvest params
    h0: Optional[float] = None
    max_steps: int = 10_000_000


_REPELLING = (Stability.SOURCE, Stability.SPIRAL_SOURCE, Stability.SADDLE)

_KIND_NAMES = {
    EquilibriumKind.ORIGIN: "origin",
    EquilibriumKind.U_AXIS: "u-axis",
    EquilibriumKind.V_AXIS: "v-axis",
    EquilibriumKind.INTERIOR: "interior",
}


def _base_rhs(params: AnyParams) -> Rhs2:
    if isinstance(params, HarvestParams):
        def f(u: float, v: float) -> Tuple[float, float]:
            return harvest_rhs(params, State2(u, v))
    else:
        def f(u: float, v: float) -> Tuple[float, float]:
            return rhs(params, State2(u, v))
    return f


def _clampable(params: AnyParams) -> Tuple[bool, bool]:
    """Which species carry an active non-smooth term that can force them to 0."""
    if isinstance(params, HarvestParams):
        return False, params.e > 0.0 and params.base.q < 1.0
    return params.p < 1.0, params.q < 1.0


def integrate(
    params: AnyParams,
    ic: State2,
    t_end: float,
    opts: Optional[IntegrateOptions] = None,
) -> Trajectory:
    """Integrate from ic over [0, t_end] with extinction clamping.

    Whenever a species with an active fractional-exponent term drops below
    eps_ext with a non-positive derivative, the crossing time of the eps_ext
    level is bracketed by bisection on the step, the species is set to
    exactly 0 from then on, and an FteEvent is recorded.  The trajectory
    terminates early with an Attractor label when the state comes within
    lock_radius of a known non-repelling equilibrium at speed below
    lock_speed (repelling equilibria only lock when hit exactly).
    """
    opts = opts or IntegrateOptions()
    if not (ic.u >= 0.0 and ic.v >= 0.0):
        raise InvalidParameter(f"initial condition must be componentwise >= 0, got {ic}")
    if not (t_end > 0.0 and math.isfinite(t_end)):
        raise InvalidParameter(f"t_end must be positive and finite, got {t_end}")

    base = _base_rhs(params)
    clamp_u, clamp_v = _clampable(params)
    locked = [False, False]

    def f(u: float, v: float) -> Tuple[float, float]:
        du, dv = base(u, v)
        if locked[0]:
            du = 0.0
        if locked[1]:
            dv = 0.0
        return du, dv

    if opts.known_equilibria is not None:
        known = list(opts.known_equilibria)
    elif isinstance(params, KineticParams):
        known = all_equilibria(params)
    else:
        known = []
    detect_steady = opts.detect_steady
    if detect_steady is None:
        detect_steady = isinstance(params, HarvestParams)

    traj = Trajectory()
    eval_times: Optional[List[float]] = None
    if opts.t_eval is not None:
        eval_times = sorted(t for t in opts.t_eval if 0.0 <= t <= t_end)

    def record(t: float, u: float, v: float, forced: bool = False) -> None:
        if eval_times is None or forced:
            traj.samples.append((t, State2(u, v)))

    def terminal_at(u: float, v: float) -> Optional[Attractor]:
        du, dv = f(u, v)
        speed = math.hypot(du, dv)
        for eq in known:
            r = math.hypot(u - eq.point.u, v - eq.point.v)
            if r < 1e-12 and speed < 1e-12:
                return Attractor(_KIND_NAMES[eq.kind], eq.point)
            if (
                r < opts.lock_radius
                and speed < opts.lock_speed
                and eq.stability not in _REPELLING
            ):
                return Attractor(_KIND_NAMES[eq.kind], eq.point)
        if detect_steady and speed < opts.lock_speed:
            return Attractor("steady", State2(u, v))
        return None

    t = 0.0
    u, v = float(ic.u), float(ic.v)
    # An initial value already at/below the clamp level with non-increasing
    # derivative counts as extinct at t = 0.
    for idx, (clampable, val) in enumerate(((clamp_u, u), (clamp_v, v))):
        if clampable and val < opts.eps_ext:
            d = f(u, v)[idx]
            if d <= 0.0:
                if idx == 0:
                    u, locked[0] = 0.0, True
                else:
                    v, locked[1] = 0.0, True
                traj.events.append(FteEvent(Species.U if idx == 0 else Species.V, 0.0))

    if eval_times is not None and eval_times and eval_times[0] == 0.0:
        record(t, u, v, forced=True)
        eval_times.pop(0)
    elif eval_times is None:
        record(t, u, v)

    term = terminal_at(u, v)
    if term is not None:
        traj.terminal = term
        if not traj.samples:
            record(t, u, v, forced=True)
        return traj

    h = opts.h0 or min(1e-3, t_end / 100.0)
    steps = 0
    while t < t_end:
        if steps >= opts.max_steps:
            break
        steps += 1
        h = min(h, t_end - t)
        if eval_times:
            h = min(h, max(eval_times[0] - t, 1e-14))
        u5, v5, eu, ev = _dp45(f, u, v, h)
        if not (math.isfinite(u5) and math.isfinite(v5)):
            h *= 0.25
            if h < 1e-14 * max(1.0, abs(t)):
                raise NonFiniteState(
                    f"state became non-finite near t={t:.6g}",
                )
            continue
        su = opts.atol + opts.rtol * max(abs(u), abs(u5))
        sv = opts.atol + opts.rtol * max(abs(v), abs(v5))
        err = math.sqrt(0.5 * ((eu / su) ** 2 + (ev / sv) ** 2))
        if err > 1.0:
            h *= max(0.2, 0.9 * err ** -0.2)
            if h < 1e-14 * max(1.0, abs(t)):
                raise StepSizeUnderflow(
                    f"step size underflow near t={t:.6g}", trajectory=traj
                )
            continue

        t_new = t + h
        # Extinction clamp: bracket the eps_ext crossing inside this step.
        event_species = None
        if clamp_u and not locked[0] and u5 < opts.eps_ext:
            if f(u5, max(v5, 0.0))[0] <= 0.0:
                event_species = 0
        if (
            event_species is None
            and clamp_v
            and not locked[1]
            and v5 < opts.eps_ext
        ):
            if f(max(u5, 0.0), v5)[1] <= 0.0:
                event_species = 1
        if event_species is not None:
            lo, hi = 0.0, h
            start_val = (u, v)[event_species]
            if start_val < opts.eps_ext:
                hi = 0.0  # already at the level when the step began
            while hi - lo > opts.event_time_tol:
                mid = 0.5 * (lo + hi)
                um, vm = _dp45(f, u, v, mid)[:2]
                val = um if event_species == 0 else vm
                if val < opts.eps_ext:
                    hi = mid
                else:
                    lo = mid
            t_star = t + hi
            if hi > 0.0:
                um, vm = _dp45(f, u, v, hi)[:2]
            else:
                um, vm = u, v
            if event_species == 0:
                u, v = 0.0, max(vm, 0.0)
                locked[0] = True
                traj.events.append(FteEvent(Species.U, t_star))
            else:
                u, v = max(um, 0.0), 0.0
                locked[1] = True
                traj.events.append(FteEvent(Species.V, t_star))
            t = t_star
            record(t, u, v, forced=eval_times is None)
            term = terminal_at(u, v)
            if term is not None:
                traj.terminal = term
                break
            h = max(h, 1e-8)
            continue

        # Accept the step; floor tiny sub-zero excursions of smooth species.
        u, v, t = max(u5, 0.0), max(v5, 0.0), t_new
        if eval_times and abs(t - eval_times[0]) <= 1e-12 * max(1.0, t):
            record(t, u, v, forced=True)
            eval_times.pop(0)
        else:
            record(t, u, v)
        term = terminal_at(u, v)
        if term is not None:
            traj.terminal = term
            break
        h *= min(5.0, max(0.2, 0.9 * err ** -0.2 if err > 0.0 else 5.0))

    if eval_times is None and (not traj.samples or traj.samples[-1][0] != t):
        record(t, u, v)
    return traj


def classify_basin(
    params: AnyParams,
    ic: State2,
    t_max: float,
    opts: Optional[IntegrateOptions] = None,
) -> Attractor:
    """Integrate from a strictly positive ic and report the terminal label.

    Returns an Attractor named "undecided" (carrying the final state) when
    t_max elapses without lock-on.
    """
    if not (ic.u > 0.0 and ic.v > 0.0):
        raise InvalidParameter(f"basin classification needs ic > 0, got {ic}")
    traj = integrate(params, ic, t_max, opts)
    if traj.terminal is not None:
        return traj.terminal
    return Attractor("undecided", traj.final_state)


# ---------------------------------------------------------------------------
# Finite-time-extinction threshold (sufficient condition)
# ---------------------------------------------------------------------------


def fte_threshold(params: KineticParams, u0: float) -> float:
    """Threshold curve value f(u0) above which v(0) certifies u-extinction.

        f(u0) = ((a1*c2 + (1-p)*a1*b1) / ((1-p)*c1*b1)) * u0^(1-p)

    Defined for 0 < p < 1 with q = 1 and u0 > 0.
    """
    if not 0.0 < params.p < 1.0:
        raise InvalidParameter(
            f"threshold requires 0 < p < 1, got p={params.p}"
        )
    if params.q != 1.0:
        raise InvalidParameter(f"threshold requires q = 1, got q={params.q}")
    if not (math.isfinite(u0) and u0 > 0.0):
        raise InvalidParameter(f"u0 must be positive, got {u0!r}")
    one_m_p = 1.0 - params.p
    coef = (params.a1 * params.c2 + one_m_p * params.a1 * params.b1) / (
        one_m_p * params.c1 * params.b1
    )
    return coef * math.pow(u0, one_m_p)


def predict_fte(params: KineticParams, ic: State2) -> bool:
    """True iff v(0) > f(u(0)), a sufficient certificate for finite-time
    extinction of u.  False means "not certified", not "no extinction".

    Requires 0 < p < 1, q = 1, and u(0) in (0, a1/b1].
    """
    if not 0.0 < ic.u <= params.a1 / params.b1:
        raise InvalidParameter(
            f"certificate requires 0 < u(0) <= a1/b1={params.a1 / params.b1}, got {ic.u}"
        )
    return ic.v > fte_threshold(params, ic.u)


# ---------------------------------------------------------------------------
# Separatrix (stable manifold of an interior saddle)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Separatrix:
    """Polyline through the saddle tracing its stable manifold."""

    polyline: List[State2]
    saddle: Equilibrium


def _clip_to_box(inside: State2, outside: State2, box) -> State2:
    """Intersection of segment inside->outside with the box boundary."""
    (ulo, uhi), (vlo, vhi) = box
    s = 1.0
    du = outside.u - inside.u
    dv = outside.v - inside.v
    for val, d, lo, hi in ((inside.u, du, ulo, uhi), (inside.v, dv, vlo, vhi)):
        if d > 0.0 and val + d > hi:
            s = min(s, (hi - val) / d)
        elif d < 0.0 and val + d < lo:
            s = min(s, (lo - val) / d)
    return State2(inside.u + s * du, inside.v + s * dv)


def trace_separatrix(
    params: KineticParams,
    saddle: Equilibrium,
    delta: float = 1e-6,
    box=None,
    max_backward_time: float = 200.0,
    rtol: float = 1e-9,
    atol: float = 1e-12,
) -> Separatrix:
    """Trace the stable manifold of an interior saddle by backward-time
    integration from saddle +/- delta * v_s along the stable eigenvector.

    Branches stop on leaving the box [0, 2*a1/b1] x [0, 2*a2/b2] (the exit
    point is clipped onto the boundary), on backward speed dropping below
    1e-10, on approaching another equilibrium, or at max_backward_time.
    Backward deviations off the manifold decay, so the tracing is
    self-correcting.
    """
    if saddle.stability is not Stability.SADDLE or saddle.jacobian is None:
        raise NotASaddle(f"separatrix tracing needs a saddle, got {saddle}")
    eigvals, eigvecs = np.linalg.eig(saddle.jacobian)
    eigvals = np.real(eigvals)
    stable_idx = int(np.argmin(eigvals))
    if not (eigvals[stable_idx] < 0.0 < eigvals[1 - stable_idx]):
        raise NotASaddle(
            f"eigenvalues {eigvals} do not straddle zero; not a saddle"
        )
    vs = np.real(eigvecs[:, stable_idx])
    vs = vs / np.linalg.norm(vs)
    if vs[0] < 0.0 or (vs[0] == 0.0 and vs[1] < 0.0):
        vs = -vs

    if box is None:
        box = (
            (0.0, 2.0 * params.a1 / params.b1),
            (0.0, 2.0 * params.a2 / params.b2),
        )
    base = _base_rhs(params)

    def backward(u: float, v: float) -> Tuple[float, float]:
        du, dv = base(u, v)
        return -du, -dv

    others = [
        eq
        for eq in all_equilibria(params)
        if math.hypot(eq.point.u - saddle.point.u, eq.point.v - saddle.point.v) > 1e-9
    ]

    def trace_branch(sign: float) -> List[State2]:
        u = saddle.point.u + sign * delta * float(vs[0])
        v = saddle.point.v + sign * delta * float(vs[1])
        pts: List[State2] = [State2(u, v)]
        t, h = 0.0, 1e-4
        (ulo, uhi), (vlo, vhi) = box
        for _ in range(200_000):
            if t >= max_backward_time:
                break
            du, dv = backward(u, v)
            if math.hypot(du, dv) < 1e-10:
                break
            if any(
                math.hypot(u - eq.point.u, v - eq.point.v) < 1e-6 for eq in others
            ):
                break
            h = min(h, max_backward_time - t)
            u5, v5, eu, ev = _dp45(backward, u, v, h)
            if not (math.isfinite(u5) and math.isfinite(v5)):
                h *= 0.25
                if h < 1e-14:
                    break
                continue
            su = atol + rtol * max(abs(u), abs(u5))
            sv = atol + rtol * max(abs(v), abs(v5))
            err = math.sqrt(0.5 * ((eu / su) ** 2 + (ev / sv) ** 2))
            if err > 1.0:
                h *= max(0.2, 0.9 * err ** -0.2)
                if h < 1e-14:
                    break
                continue
            t += h
            if not (ulo <= u5 <= uhi and vlo <= v5 <= vhi):
                pts.append(_clip_to_box(State2(u, v), State2(u5, v5), box))
                break
            u, v = u5, v5
            pts.append(State2(u, v))
            h *= min(5.0, max(0.2, 0.9 * err ** -0.2 if err > 0.0 else 5.0))
        return pts

    plus = trace_branch(+1.0)
    minus = trace_branch(-1.0)
    polyline = list(reversed(minus)) + [saddle.point] + plus
    return Separatrix(polyline=polyline, saddle=saddle)


# ---------------------------------------------------------------------------
# Comparison ODE closed form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComparisonOde:
    """Constants of dg/dt = -C4*exp(-C6*t)*g**alpha with C6 = C2 + (1-alpha)*C5.

    C6 is the rate produced by removing an exponential weight e^(C5*t) from
    the comparison variable (substitution y = g*e^(C5*t)); it is derived, not
    stored.
    """

    C4: float
    C5: float
    C2: float
    alpha: float
    g0: float

    def __post_init__(self):
        for name in ("C4", "C5", "C2"):
            value = float(getattr(self, name))
            object.__setattr__(self, name, value)
            if not (math.isfinite(value) and value > 0.0):
                raise InvalidParameter(f"{name} must be positive, got {value!r}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "g0", float(self.g0))
        if not 0.0 < self.alpha < 1.0:
            raise InvalidParameter(f"alpha must lie in (0, 1), got {self.alpha}")
        if not (math.isfinite(self.g0) and self.g0 >= 0.0):
            raise InvalidParameter(f"g0 must be >= 0, got {self.g0!r}")

    @property
    def C6(self) -> float:
        return self.C2 + (1.0 - self.alpha) * self.C5


def comparison_solution(c: ComparisonOde, t: float) -> float:
    """Closed-form solution, truncated at 0 once the base goes non-positive:

        g(t) = ((1-alpha)*C4*exp(-C6*t)/C6 + K) ^ (1/(1-alpha)),
        K    = g0^(1-alpha) - (1-alpha)*C4/C6.
    """
    amplitude = (1.0 - c.alpha) * c.C4 / c.C6
    K = math.pow(c.g0, 1.0 - c.alpha) - amplitude if c.g0 > 0.0 else -amplitude
    base = amplitude * math.exp(-c.C6 * t) + K
    if base <= 0.0:
        return 0.0
    return math.pow(base, 1.0 / (1.0 - c.alpha))


def comparison_extinction_time(c: ComparisonOde) -> Optional[float]:
    """Finite extinction time T*, or None when the solution stays positive.

    Extinction happens iff g0^(1-alpha) < (1-alpha)*C4/C6, at

        T* = -(1/C6) * ln(-K*C6 / ((1-alpha)*C4)).
    """
    if c.g0 == 0.0:
        return 0.0
    amplitude = (1.0 - c.alpha) * c.C4 / c.C6
    K = math.pow(c.g0, 1.0 - c.alpha) - amplitude
    if K >= 0.0:
        return None
    return -(1.0 / c.C6) * math.log(-K / amplitude)
