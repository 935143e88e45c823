"""Reaction-diffusion twin of the kinetics on a 1-D interval.

The model couples two diffusing densities through the same competition
kinetics used by the ODE layer, with zero-flux (reflecting) boundaries.
Two reaction flavours are supported:

* constant coefficients taken from a :class:`~lvfte.kinetics.KineticParams`,
* a spatially varying resource ``m(x)`` with unit logistic self-limitation,
  competition strengths ``b`` (on u, with exponent ``p``) and ``c`` (on v).

Space is discretised on cell centres, ``x_i = x0 + (i + 1/2) dx``, so the
zero-flux closure is a one-sided difference at each end.  Time stepping is
symmetric operator splitting: an implicit diffusion half step, one explicit
RK4 reaction step, then a second implicit diffusion half step.  The implicit
half steps make the scheme robust for stiff diffusion (fine grids, large d)
while keeping a banded solve of trivial cost.

Sub-threshold clamping mirrors the ODE layer: a species whose kinetics lose
Lipschitz continuity at zero (exponent < 1) is set to exactly zero at grid
points that fall below ``eps_ext`` while its local reaction is non-positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded

from .exceptions import (
    CflViolation,
    InvalidParameter,
    NonConvergence,
    NonFiniteField,
)
from .kinetics import KineticParams, Regime, classify_regime

__all__ = [
    "Grid1D",
    "ResourceField",
    "PdeParams",
    "PdeState",
    "PdeOptions",
    "PdeOutcome",
    "RecoveryReport",
    "U_WINS",
    "V_WINS",
    "COEXIST",
    "UNDECIDED",
    "laplacian_neumann",
    "safe_pow_arr",
    "simulate_pde",
    "single_species_steady_state",
    "check_recovery_conditions",
]

# Outcome labels reported by simulate_pde / scans.
U_WINS = "UWins"
V_WINS = "VWins"
COEXIST = "Coexist"
UNDECIDED = "Undecided"


@dataclass(frozen=True)
class Grid1D:
    """Uniform cell-centred grid on [x0, x1] with n_x cells."""

    x0: float
    x1: float
    n_x: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "x0", float(self.x0))
        object.__setattr__(self, "x1", float(self.x1))
        object.__setattr__(self, "n_x", int(self.n_x))
        if not (math.isfinite(self.x0) and math.isfinite(self.x1)):
            raise InvalidParameter("grid endpoints must be finite")
        if not self.x1 > self.x0:
            raise InvalidParameter("grid requires x1 > x0")
        if self.n_x < 8:
            raise InvalidParameter("grid requires n_x >= 8")

    @property
    def dx(self) -> float:
        return (self.x1 - self.x0) / self.n_x

    @property
    def length(self) -> float:
        return self.x1 - self.x0

    def centers(self) -> np.ndarray:
        """Cell-centre coordinates, shape (n_x,)."""
        dx = self.dx
        return self.x0 + dx * (np.arange(self.n_x) + 0.5)


def _as_field(grid: Grid1D, values: object, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.shape != (grid.n_x,):
        raise InvalidParameter(
            f"{name} must have shape ({grid.n_x},), got {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise InvalidParameter(f"{name} must be finite everywhere")
    if np.any(arr < 0.0):
        raise InvalidParameter(f"{name} must be non-negative everywhere")
    out = arr.copy()
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class ResourceField:
    """Non-negative resource profile m(x) sampled at cell centres."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_field(self.grid, self.values, "resource"))


@dataclass(frozen=True, eq=False)
class PdeParams:
    """Diffusivities plus one of the two reaction flavours.

    Constant kinetics: pass ``kinetics`` and leave b/c/p/m unset.
    Resource-driven kinetics: leave ``kinetics`` unset and pass ``b``, ``c``,
    ``p`` and the resource field ``m`` (v's cross term is linear in u).
    """

    d1: float
    d2: float
    kinetics: Optional[KineticParams] = None
    b: Optional[float] = None
    c: Optional[float] = None
    p: Optional[float] = None
    m: Optional[ResourceField] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "d1", float(self.d1))
        object.__setattr__(self, "d2", float(self.d2))
        for nm in ("d1", "d2"):
            val = getattr(self, nm)
            if not (math.isfinite(val) and val > 0.0):
                raise InvalidParameter(f"{nm} must be positive and finite")
        resource_keys = (self.b, self.c, self.p, self.m)
        if self.kinetics is not None:
            if any(k is not None for k in resource_keys):
                raise InvalidParameter(
                    "constant-kinetics mode takes no b/c/p/m arguments"
                )
        else:
            if any(k is None for k in resource_keys):
                raise InvalidParameter(
                    "resource mode requires b, c, p and m together"
                )
            object.__setattr__(self, "b", float(self.b))
            object.__setattr__(self, "c", float(self.c))
            object.__setattr__(self, "p", float(self.p))
            for nm in ("b", "c"):
                val = getattr(self, nm)
                if not (math.isfinite(val) and val > 0.0):
                    raise InvalidParameter(f"{nm} must be positive and finite")
            if not (0.0 < self.p <= 1.0):
                raise InvalidParameter("exponent p must lie in (0, 1]")

    @property
    def resource_model(self) -> bool:
        return self.kinetics is None

    @property
    def grid(self) -> Optional[Grid1D]:
        return self.m.grid if self.m is not None else None


@dataclass(frozen=True, eq=False)
class PdeState:
    """Pair of non-negative density fields on a grid."""

    grid: Grid1D
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "u", _as_field(self.grid, self.u, "u field"))
        object.__setattr__(self, "v", _as_field(self.grid, self.v, "v field"))


@dataclass(frozen=True)
class PdeOutcome:
    """Verdict of a long-run integration.

    ``label`` is one of U_WINS / V_WINS / COEXIST / UNDECIDED.  ``fte_u`` /
    ``fte_v`` report whether the corresponding field hit exactly zero
    everywhere at some finite time (only possible for a clampable species),
    with the first such time in ``fte_u_time`` / ``fte_v_time``.  ``note``
    carries a human-readable reason when the run ends Undecided.
    """

    label: str
    t_reached: float
    fte_u: bool = False
    fte_v: bool = False
    fte_u_time: Optional[float] = None
    fte_v_time: Optional[float] = None
    note: str = ""


@dataclass
class PdeOptions:
    """Tuning knobs for simulate_pde.

    dt=None picks a conservative reaction-limited step.  Classification is
    attempted every ``check_interval`` time units; with ``early_stop`` the
    run returns as soon as a verdict is reached.  ``u_reference`` /
    ``v_reference`` override the single-survivor profiles used by the
    exclusion tests (defaults: constant carrying capacity for constant
    kinetics, the single-species steady state for resource kinetics).
    """

    dt: Optional[float] = None
    snapshot_times: Sequence[float] = ()
    check_interval: float = 5.0
    tol_out: float = 1e-4
    tol_pos: float = 1e-4
    tol_steady: float = 1e-7
    eps_ext: float = 1e-10
    dt_min: float = 1e-12
    tail_threshold: float = 1e-6
    max_steps: int = 20_000_000
    early_stop: bool = True
    u_reference: Optional[np.ndarray] = None
    v_reference: Optional[np.ndarray] = None


def safe_pow_arr(x: np.ndarray, e: float) -> np.ndarray:
    """Elementwise x**e treating negatives as 0; identity when e == 1."""
    if e == 1.0:
        return x
    return np.power(np.maximum(x, 0.0), e)


def laplacian_neumann(f: np.ndarray, dx: float) -> np.ndarray:
    """Second difference with zero-flux closure on a cell-centred grid.

    End cells use the one-sided form (f[1]-f[0])/dx^2, which is the exact
    divergence of face fluxes when the boundary flux vanishes; the row sums
    of the underlying matrix are zero, so total mass is conserved.
    """
    f = np.asarray(f, dtype=float)
    if f.ndim != 1 or f.size < 3:
        raise InvalidParameter("laplacian_neumann needs a 1-D field of length >= 3")
    if not (math.isfinite(dx) and dx > 0.0):
        raise InvalidParameter("dx must be positive and finite")
    inv = 1.0 / (dx * dx)
    lap = np.empty_like(f)
    lap[1:-1] = (f[:-2] - 2.0 * f[1:-1] + f[2:]) * inv
    lap[0] = (f[1] - f[0]) * inv
    lap[-1] = (f[-2] - f[-1]) * inv
    return lap


class _ImplicitDiffusion:
    """Backward-Euler diffusion step: solves (I - h d L) w_new = w.

    The matrix is symmetric positive definite (diagonally dominant), so a
    banded Cholesky factorisation is computed once and reused.
    """

    def __init__(self, n: int, dx: float, d: float, h: float) -> None:
        r = d * h / (dx * dx)
        ab = np.zeros((2, n))
        ab[1, :] = 1.0 + 2.0 * r
        ab[1, 0] = 1.0 + r
        ab[1, -1] = 1.0 + r
        ab[0, 1:] = -r
        self._cb = cholesky_banded(ab)

    def apply(self, w: np.ndarray) -> np.ndarray:
        return cho_solve_banded((self._cb, False), w)


Reaction = Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]


def _make_reaction(params: PdeParams) -> Reaction:
    """Vectorised reaction term (du, dv) for either flavour."""
    if params.kinetics is not None:
        k = params.kinetics

        def react(u: np.ndarray, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
            du = u * (k.a1 - k.b1 * u) - k.c1 * safe_pow_arr(u, k.p) * v
            dv = v * (k.a2 - k.b2 * v) - k.c2 * u * safe_pow_arr(v, k.q)
            return du, dv

        return react

    b, c, p = params.b, params.c, params.p
    m = params.m.values

    def react(u: np.ndarray, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        du = u * (m - u) - b * safe_pow_arr(u, p) * v
        dv = v * (m - v) - c * u * v
        return du, dv

    return react


def _pde_clampable(params: PdeParams) -> Tuple[bool, bool]:
    """Which species may be hard-zeroed below eps_ext (exponent < 1)."""
    if params.kinetics is not None:
        return params.kinetics.p < 1.0, params.kinetics.q < 1.0
    return params.p < 1.0, False


def _rk4_reaction(
    react: Reaction, u: np.ndarray, v: np.ndarray, h: float
) -> Tuple[np.ndarray, np.ndarray]:
    k1u, k1v = react(u, v)
    k2u, k2v = react(u + 0.5 * h * k1u, v + 0.5 * h * k1v)
    k3u, k3v = react(u + 0.5 * h * k2u, v + 0.5 * h * k2v)
    k4u, k4v = react(u + h * k3u, v + h * k3v)
    sixth = h / 6.0
    return (
        u + sixth * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
        v + sixth * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    )


def single_species_steady_state(
    d: float,
    m: ResourceField,
    *,
    tol: float = 1e-9,
    t_max: float = 1e5,
) -> np.ndarray:
    """Positive steady profile of w_t = d w_xx + w (m - w), zero-flux ends.

    Marches the scalar equation with implicit diffusion and explicit
    reaction; a fixed point of that update solves the discrete steady
    problem exactly, so the stopping rule sup|Δw|/dt < tol bounds the
    discrete residual directly.  Requires max(m) > 0 (otherwise the only
    non-negative steady state is zero).
    """
    if not (math.isfinite(d) and d > 0.0):
        raise InvalidParameter("diffusivity must be positive and finite")
    vals = m.values
    if vals.max() <= 0.0:
        raise InvalidParameter("resource must be positive somewhere")
    grid = m.grid
    n, dx = grid.n_x, grid.dx

    dt_cap = min(1.0, 1.0 / float(vals.max()))
    dt = dt_cap / 4.0
    w = np.full(n, float(vals.mean()) + 0.1)
    solver = _ImplicitDiffusion(n, dx, d, dt)
    t = 0.0
    step = 0
    while t < t_max:
        w_new = solver.apply(w + dt * (vals * w - w * w))
        rate = float(np.max(np.abs(w_new - w))) / dt
        w = np.maximum(w_new, 0.0)
        t += dt
        step += 1
        if not math.isfinite(float(w.sum())):
            raise NonConvergence("steady-state march produced non-finite values")
        if rate < tol:
            return w
        if step % 64 == 0 and dt < dt_cap:
            dt = min(dt_cap, dt * 1.5)
            solver = _ImplicitDiffusion(n, dx, d, dt)
    raise NonConvergence(
        f"single-species steady state not reached by t={t_max:g} (rate {rate:.3e})"
    )


class _ReferenceCache:
    """Lazy single-survivor reference profiles for exclusion verdicts."""

    def __init__(self, params: PdeParams, grid: Grid1D, opts: PdeOptions) -> None:
        self._params = params
        self._grid = grid
        self._opts = opts
        self._u: Optional[np.ndarray] = opts.u_reference
        self._v: Optional[np.ndarray] = opts.v_reference
        self._u_failed = False
        self._v_failed = False
        self.note = ""

    def _single(self, dcoef: float) -> Optional[np.ndarray]:
        try:
            return single_species_steady_state(dcoef, self._params.m)
        except (NonConvergence, InvalidParameter) as exc:
            self.note = f"reference profile unavailable: {exc}"
            return None

    def u_ref(self) -> Optional[np.ndarray]:
        if self._u is None and not self._u_failed:
            if self._params.kinetics is not None:
                k = self._params.kinetics
                self._u = np.full(self._grid.n_x, k.a1 / k.b1)
            else:
                self._u = self._single(self._params.d1)
                self._u_failed = self._u is None
        return self._u

    def v_ref(self) -> Optional[np.ndarray]:
        if self._v is None and not self._v_failed:
            if self._params.kinetics is not None:
                k = self._params.kinetics
                self._v = np.full(self._grid.n_x, k.a2 / k.b2)
            else:
                self._v = self._single(self._params.d2)
                self._v_failed = self._v is None
        return self._v


def _default_dt(params: PdeParams) -> float:
    if params.kinetics is not None:
        k = params.kinetics
        rate = max(k.a1, k.a2, k.c1, k.c2)
    else:
        rate = max(float(params.m.values.max()), params.b, params.c, 1e-6)
    return 0.05 / rate


def simulate_pde(
    params: PdeParams,
    init: PdeState,
    t_end: float,
    opts: Optional[PdeOptions] = None,
) -> Tuple[List[Tuple[float, PdeState]], PdeOutcome]:
    """Integrate the two-species system to t_end or an early verdict.

    Returns (snapshots, outcome).  Snapshots always include the initial and
    final states plus any requested interior times.  The verdict logic runs
    every ``check_interval``:

    * UWins  -- sup v < tol_out and sup|u - u_ref| < tol_out,
    * VWins  -- mirror image,
    * Coexist -- both fields exceed tol_pos everywhere and the discrete
      time derivative of the computed solution, sup|w(t+dt) - w(t)| / dt
      over both fields, is below tol_steady (the computed solution has
      stopped changing),
    * Undecided -- none of the above by t_end (or when the step budget is
      exhausted), with a note.

    Stepping is symmetric splitting (implicit diffusion half steps around
    an RK4 reaction step) while both species are active.  Once either
    field's sup norm falls below ``tail_threshold`` the stepper switches to
    an implicit-diffusion / explicit-reaction step whose fixed points solve
    the discrete steady equations exactly, so a lone survivor relaxes onto
    the same profile the steady reference uses, free of splitting bias.

    A non-finite step is retried with half the time step; below ``dt_min``
    this raises CflViolation.  Non-finite initial data raises
    NonFiniteField.
    """
    if opts is None:
        opts = PdeOptions()
    if not (math.isfinite(t_end) and t_end > 0.0):
        raise InvalidParameter("t_end must be positive and finite")
    grid = init.grid
    if params.resource_model and params.m.grid != grid:
        raise InvalidParameter("resource field and initial state use different grids")

    u = init.u.copy()
    v = init.v.copy()
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise NonFiniteField("initial fields must be finite")

    n, dx = grid.n_x, grid.dx
    react = _make_reaction(params)
    clamp_u, clamp_v = _pde_clampable(params)
    refs = _ReferenceCache(params, grid, opts)

    dt = opts.dt if opts.dt is not None else _default_dt(params)
    if not (math.isfinite(dt) and dt > 0.0):
        raise InvalidParameter("dt must be positive and finite")

    solvers: Dict[Tuple[float, float], _ImplicitDiffusion] = {}

    def get_solver(dcoef: float, h_eff: float) -> _ImplicitDiffusion:
        key = (dcoef, h_eff)
        solver = solvers.get(key)
        if solver is None:
            solver = _ImplicitDiffusion(n, dx, dcoef, h_eff)
            solvers[key] = solver
        return solver

    # Event times: user snapshots, periodic checks, final time.
    snap_times = sorted(
        {float(s) for s in opts.snapshot_times if 0.0 < float(s) <= t_end}
    )
    events: Dict[float, bool] = {t: True for t in snap_times}
    if opts.check_interval > 0.0:
        k = 1
        while k * opts.check_interval < t_end:
            events.setdefault(k * opts.check_interval, False)
            k += 1
    events.setdefault(t_end, False)
    targets = sorted(events)

    snapshots: List[Tuple[float, PdeState]] = [(0.0, PdeState(grid, u, v))]
    fte_u_time: Optional[float] = None
    fte_v_time: Optional[float] = None
    label: Optional[str] = None
    note = ""
    t = 0.0
    steps = 0

    def apply_clamp(t_now: float) -> None:
        nonlocal u, v, fte_u_time, fte_v_time
        np.maximum(u, 0.0, out=u)
        np.maximum(v, 0.0, out=v)
        if clamp_u or clamp_v:
            low_u = u < opts.eps_ext
            low_v = v < opts.eps_ext
            if (clamp_u and low_u.any()) or (clamp_v and low_v.any()):
                du, dv = react(u, v)
                if clamp_u:
                    u[low_u & (du <= 0.0)] = 0.0
                if clamp_v:
                    v[low_v & (dv <= 0.0)] = 0.0
        if clamp_u and fte_u_time is None and not u.any():
            fte_u_time = t_now
        if clamp_v and fte_v_time is None and not v.any():
            fte_v_time = t_now

    def classify_now(rate: float) -> Optional[str]:
        sup_u = float(u.max())
        sup_v = float(v.max())
        if sup_v < opts.tol_out:
            ref = refs.u_ref()
            if ref is not None and float(np.max(np.abs(u - ref))) < opts.tol_out:
                return U_WINS
        if sup_u < opts.tol_out:
            ref = refs.v_ref()
            if ref is not None and float(np.max(np.abs(v - ref))) < opts.tol_out:
                return V_WINS
        if (
            float(u.min()) > opts.tol_pos
            and float(v.min()) > opts.tol_pos
            and rate < opts.tol_steady
        ):
            return COEXIST
        return None

    apply_clamp(0.0)
    last_rate = math.inf
    budget_hit = False
    imex_tail = False
    for target in targets:
        while target - t > 1e-12 * max(1.0, target):
            if steps >= opts.max_steps:
                budget_hit = True
                break
            h = min(dt, target - t)
            u_prev, v_prev = u, v
            low = min(float(u.max()), float(v.max()))
            if not imex_tail and low < opts.tail_threshold:
                imex_tail = True
            elif imex_tail and low > 10.0 * opts.tail_threshold:
                imex_tail = False
            if imex_tail:
                fu, fv = react(u, v)
                u = get_solver(params.d1, h).apply(u + h * fu)
                v = get_solver(params.d2, h).apply(v + h * fv)
            else:
                su = get_solver(params.d1, 0.5 * h)
                sv = get_solver(params.d2, 0.5 * h)
                u1 = su.apply(u)
                v1 = sv.apply(v)
                u2, v2 = _rk4_reaction(react, u1, v1, h)
                u = su.apply(u2)
                v = sv.apply(v2)
            steps += 1
            if not math.isfinite(float(u.sum()) + float(v.sum())):
                u, v = u_prev, v_prev
                dt *= 0.5
                if dt < opts.dt_min:
                    raise CflViolation(
                        f"time step underflow at t={t:g} (dt={dt:.3e})"
                    )
                continue
            t += h
            apply_clamp(t)
            last_rate = (
                max(
                    float(np.max(np.abs(u - u_prev))),
                    float(np.max(np.abs(v - v_prev))),
                )
                / h
            )
        if budget_hit:
            note = f"step budget ({opts.max_steps}) exhausted at t={t:g}"
            break
        if events[target]:
            snapshots.append((t, PdeState(grid, u, v)))
        verdict = classify_now(last_rate)
        if verdict is not None:
            label = verdict
            if opts.early_stop:
                break

    if label is None:
        label = UNDECIDED
        if not note:
            note = f"no verdict by t={t:g}"
            if refs.note:
                note += f"; {refs.note}"
    if snapshots[-1][0] != t:
        snapshots.append((t, PdeState(grid, u, v)))

    outcome = PdeOutcome(
        label=label,
        t_reached=t,
        fte_u=fte_u_time is not None,
        fte_v=fte_v_time is not None,
        fte_u_time=fte_u_time,
        fte_v_time=fte_v_time,
        note=note,
    )
    return snapshots, outcome


@dataclass(frozen=True)
class RecoveryReport:
    """Pointwise certificate that v excludes u from given initial fields.

    For strong competition with 0 < p < 1 and q = 1 the certificate needs,
    at every point x:

    * cond1   -- lower(u0(x)) <= v0(x) <= upper(u0(x)), where lower is the
      finite-time extinction threshold in u and upper is the ray through
      the origin and the interior saddle (slope v*/u*),
    * cond12  -- u0(x) <= u*,
    * cond123 -- a single parameter inequality making lower <= upper on the
      whole admissible strip 0 < u0 <= u*.

    ``all_hold`` is True when every sampled point passes and the parameter
    inequality holds.
    """

    u_star: float
    v_star: float
    lower: np.ndarray
    upper: np.ndarray
    cond1: np.ndarray
    cond12: np.ndarray
    cond123: bool

    @property
    def all_hold(self) -> bool:
        return bool(self.cond1.all() and self.cond12.all() and self.cond123)


def check_recovery_conditions(
    params: KineticParams, u0: object, v0: object
) -> RecoveryReport:
    """Evaluate the extinction certificate on sampled initial data.

    pre: strong competition regime, 0 < p < 1, q = 1; u0, v0 non-negative
    arrays (or scalars) of matching shape.
    """
    if classify_regime(params) is not Regime.STRONG_COMPETITION:
        raise InvalidParameter("certificate requires the strong competition regime")
    if not (0.0 < params.p < 1.0):
        raise InvalidParameter("certificate requires 0 < p < 1")
    if params.q != 1.0:
        raise InvalidParameter("certificate requires q = 1")
    u_arr = np.atleast_1d(np.asarray(u0, dtype=float))
    v_arr = np.atleast_1d(np.asarray(v0, dtype=float))
    if u_arr.shape != v_arr.shape:
        raise InvalidParameter("u0 and v0 must have matching shapes")
    if np.any(u_arr < 0.0) or np.any(v_arr < 0.0):
        raise InvalidParameter("initial data must be non-negative")

    a1, a2 = params.a1, params.a2
    b1, b2 = params.b1, params.b2
    c1, c2 = params.c1, params.c2
    p = params.p
    denom = c1 * c2 - b1 * b2
    u_star = (c1 * a2 - a1 * b2) / denom
    v_star = (c2 * a1 - b1 * a2) / denom
    slope = v_star / u_star

    coef = (a1 * c2 + (1.0 - p) * a1 * b1) / ((1.0 - p) * c1 * b1)
    lower = coef * safe_pow_arr(u_arr, 1.0 - p)
    upper = slope * u_arr
    cond1 = (lower <= v_arr) & (v_arr <= upper)
    cond12 = u_arr <= u_star
    cond123 = bool(coef <= slope * u_star ** p)
    return RecoveryReport(
        u_star=u_star,
        v_star=v_star,
        lower=lower,
        upper=upper,
        cond1=cond1,
        cond12=cond12,
        cond123=cond123,
    )
