"""The singular kernel, its decay bound, and the five-regime Poisson estimate.

For a normalized singularity with eigenvalue ``a + ib`` and ``gamma`` the
half-plane power, the kernel is

    ``K_s(y) = (1/b) int_{min(t,v) >= s} e^{2s - 2 min(t,v)}
               V / (V^2 + (y - U)^2) dt dv``

with ``U + iV = ((t - a v)/b + i v)^gamma``; the factor ``1/b`` is the
Jacobian of ``(u, v) -> (t, v)``, ``t = b u + a v``.  The certified decay
envelope is

    ``(1 + |y|)^{1/gamma - 1} min(1, ((1 + |y|)^{1/gamma} / s)^{gamma - 1})``

and ``bound ratio = K / envelope`` is the empirical constant of the estimate.

The regime machinery quantifies the Poisson density ``V/(V^2 + (y-U)^2)``
against elementary comparators on five hypothesis sets parametrized by
thresholds ``c2 < c3``; part 1 is threshold-free, parts 2-5 partition (up to
boundaries) configurations by how ``max(v, t)`` compares with the scale
``(1 + |y|)^{1/gamma}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .geometry import Singularity, power_polar
from .quadrature import DecayDescriptor, QuadResult, Tolerance, integrate_1d, integrate_2d

__all__ = [
    "RegimeThresholds",
    "RegimeBand",
    "KernelCell",
    "KernelReport",
    "EmptyRegimeError",
    "NoRootError",
    "REGIMES",
    "scale_factor",
    "bound_envelope",
    "poisson_density",
    "kernel_K",
    "kernel_uv_form",
    "kernel_report",
    "classify_regime",
    "regime_comparator",
    "regime_constant_sampler",
    "rho_solver",
    "power_real_residual",
    "exp_moment_oracle",
    "case_decay_slope",
]

REGIMES = (
    "part1-radius",
    "part1-height",
    "far",
    "near-origin",
    "diagonal",
    "boundary-strip",
)

_REGIME_BY_PART = {2: "far", 3: "near-origin", 4: "diagonal", 5: "boundary-strip"}


class EmptyRegimeError(ValueError):
    """The hypothesis set of a regime is empty for the given thresholds."""


class NoRootError(RuntimeError):
    """The level equation Re((u+iv)^gamma) = y has no root on the ray."""


@dataclass(frozen=True)
class RegimeThresholds:
    """Comparability thresholds ``1 < c2 < c3`` of the regime hypotheses."""

    c2: float = 4.0
    c3: float = 16.0

    def __post_init__(self) -> None:
        if not (self.c2 > 1.0 and self.c3 > self.c2):
            raise ValueError("thresholds must satisfy 1 < c2 < c3")

    def doubled(self) -> "RegimeThresholds":
        return RegimeThresholds(c2=2.0 * self.c2, c3=2.0 * self.c3)


def scale_factor(sing: Singularity, y) -> np.ndarray:
    """Comparability scale ``(1 + |y|)^{1/gamma}``."""
    return (1.0 + np.abs(np.asarray(y, dtype=float))) ** (1.0 / sing.gamma)


def bound_envelope(sing: Singularity, s: float, y: float) -> float:
    """Certified decay envelope of ``K_s(y)`` (finite, positive)."""
    Y = float(scale_factor(sing, y))
    head = (1.0 + abs(y)) ** (1.0 / sing.gamma - 1.0)
    return head * min(1.0, (Y / s) ** (sing.gamma - 1.0))


def poisson_density(sing: Singularity, v, t, y):
    """Poisson value ``V / (V^2 + (y - U)^2)`` at the sector point with
    coordinates ``(v, t)`` (vectorized)."""
    v = np.asarray(v, dtype=float)
    t = np.asarray(t, dtype=float)
    u = (t - sing.a * v) / sing.b
    U, V = power_polar(u + 1j * v, sing.gamma)
    return V / (V * V + (np.asarray(y, dtype=float) - U) ** 2)


_KERNEL_MAX_EVALS = 6_000_000


def kernel_K(sing: Singularity, s: float, y: float, tol: Tolerance | None = None) -> QuadResult:
    """Certified value of the singular kernel ``K_s(y)``.

    Integrates in ``(t, v)`` coordinates over ``min(t, v) >= s`` with the
    adaptive panel engine.  When no tolerance is given, a cheap probe pass
    (absolute tolerance scaled to the decay envelope) estimates the
    magnitude, and the final pass certifies one part in 1e6 of it; this keeps
    the accuracy relative even where the envelope overshoots the kernel.
    """
    if not s > 0.0:
        raise ValueError("s must be positive")
    a, b, gamma = sing.a, sing.b, sing.gamma

    def integrand(t, v):
        u = (t - a * v) / b
        U, V = power_polar(u + 1j * v, gamma)
        m = np.minimum(t, v)
        return np.exp(2.0 * s - 2.0 * m) * V / (V * V + (y - U) ** 2) / b

    decay = DecayDescriptor(exp_rate=1.5, alg_rate=gamma + 1.0)
    if tol is None:
        env = bound_envelope(sing, s, y)
        probe = integrate_2d(
            integrand, s, decay, Tolerance(rel_tol=1e-3, abs_tol=max(1e-3 * env, 1e-300), max_evals=_KERNEL_MAX_EVALS)
        )
        tol = Tolerance(
            rel_tol=1e-6,
            abs_tol=max(1e-6 * abs(probe.value), 1e-300),
            max_evals=_KERNEL_MAX_EVALS,
        )
    return integrate_2d(integrand, s, decay, tol)


def kernel_uv_form(sing: Singularity, s: float, y: float, tol: Tolerance | None = None) -> float:
    """Independent route: nested 1D quadrature in the original ``(u, v)``.

    The domain is ``{v >= s, b u + a v >= s}`` and the integrand carries no
    Jacobian.  Used as a cross-check of :func:`kernel_K`; slower but entirely
    disjoint in code path (different library integrator, different variables).
    """
    if not s > 0.0:
        raise ValueError("s must be positive")
    a, b, gamma = sing.a, sing.b, sing.gamma
    inner_tol = Tolerance(rel_tol=1e-10, abs_tol=1e-13 if tol is None else tol.abs_tol / 100.0, max_evals=400_000)
    outer_tol = Tolerance(rel_tol=1e-9, abs_tol=1e-12 if tol is None else tol.abs_tol, max_evals=2_000_000)

    def u_ridge(v: float) -> float | None:
        """Root of Re((u+iv)^gamma) = y on the increasing ray (y > 0 only).

        Only the sharp case matters: for v well above the comparability
        scale the Poisson density is uniformly flat on the level line, so the
        crossing needs no break point (and its location suffers catastrophic
        cancellation anyway)."""
        if y <= 0.0 or v > 10.0 * (1.0 + y) ** (1.0 / gamma):
            return None
        u0 = max(v / math.tan(math.pi / (2.0 * gamma)), 1e-12)

        def g(u: float) -> float:
            U, _ = power_polar(complex(u, v), gamma)
            return float(U) - y

        hi = max(2.0 * u0, 2.0 * (1.0 + y) ** (1.0 / gamma), 2.0)
        for _ in range(200):
            if g(hi) > 0.0:
                break
            hi *= 2.0
        else:
            return None
        try:
            return brentq(g, u0, hi, xtol=1e-10, maxiter=200)
        except ValueError:
            return None

    def inner(v: float) -> float:
        u_lo = (s - a * v) / b
        # the t-branch weight is exp(-2 b (u - u_lo)): dead past this point
        u_death = u_lo + 346.0 / b
        if u_death <= u_lo or abs(u_lo) > 1e60:
            # window narrower than one ulp of u_lo: the Poisson factor is far
            # below underflow at such v, so the row contributes nothing
            return 0.0

        def f(u: float) -> float:
            t = b * u + a * v
            w = 2.0 * s - 2.0 * min(t, v)
            if w < -690.0 or math.hypot(u, v) > 1e60:
                # exp factor underflows, or Poisson <= |zeta|^{-gamma} <= 1e-60
                return 0.0
            U, V = power_polar(complex(u, v), gamma)
            return math.exp(w) * float(V) / (float(V) ** 2 + (y - float(U)) ** 2)

        # split where min(t, v) switches branch (t = v along u = v(1-a)/b),
        # at the Poisson ridge U = y where the density peaks, and on the
        # exponential decay scale of the t-branch weight: for large v all the
        # mass hugs u_lo in a window invisible to samples of the full interval
        switch = v * (1.0 - a) / b
        ridge = u_ridge(v)
        window = [u_lo + 2.0 / b, u_lo + 20.0 / b, u_lo + 200.0 / b, switch, ridge]
        breaks = [p for p in window if p is not None and u_lo < p < u_death]
        total = integrate_1d(f, u_lo, u_death, tol=inner_tol, break_points=breaks).value
        if 2.0 * s - 2.0 * v >= -690.0:
            # the flat min = v branch is still alive beyond the window (the
            # switch point then always lies inside it; only the ridge can fall
            # this far out)
            tail_breaks = [p for p in (switch, ridge) if p is not None and p > u_death]
            total += integrate_1d(f, u_death, math.inf, tol=inner_tol, break_points=tail_breaks).value
        return total

    # outer integration in x = log v turns the algebraic tail (inner decays
    # like v^{-gamma-1}) into an exponential one; break near the ridge scale
    def outer(x: float) -> float:
        if x > 700.0:
            return 0.0
        v = math.exp(x)
        return inner(v) * v

    Y = float(scale_factor(sing, y))
    # third break: past v = s + 352 the min = v branch underflows entirely and
    # the inner integral turns into a pure algebraic tail
    x_breaks = [
        x
        for x in (math.log(max(Y / 4.0, s)), math.log(max(4.0 * Y, s)), math.log(s + 352.0))
        if x > math.log(s)
    ]
    return integrate_1d(outer, math.log(s), math.inf, tol=outer_tol, break_points=x_breaks).value


def exp_moment_oracle(s0: float, tol: Tolerance | None = None) -> float:
    """Quadrature of ``int_{s0}^inf s e^{2 s0 - 2 s} ds`` (equals s0/2 + 1/4)."""
    if s0 < 1.0:
        raise ValueError("s0 must be at least 1")
    tol = tol or Tolerance(rel_tol=1e-10, abs_tol=1e-12, max_evals=500_000)
    return integrate_1d(lambda x: x * math.exp(2.0 * s0 - 2.0 * x), s0, math.inf, tol=tol).value


# ---------------------------------------------------------------------------
# Regime classification and empirical bands
# ---------------------------------------------------------------------------


def classify_regime(
    sing: Singularity,
    v: float,
    t: float,
    y: float,
    thresholds: RegimeThresholds | None = None,
) -> str:
    """Name of the regime hypothesis satisfied at ``(v, t, y)``.

    Requires ``min(v, t) >= 1``.  Hypotheses are checked in the estimate's
    order (far, near-origin, diagonal, boundary-strip); configurations
    matching none are ``"unclassified"`` - the parts are hypotheses, not a
    partition of the quadrant.
    """
    thresholds = thresholds or RegimeThresholds()
    mn, mx = (v, t) if v <= t else (t, v)
    if mn < 1.0:
        raise ValueError("classification requires min(v, t) >= 1")
    Y = float(scale_factor(sing, y))
    c2, c3 = thresholds.c2, thresholds.c3
    if mx >= c2 * Y:
        return "far"
    if mx <= Y / c2:
        return "near-origin"
    if mn >= Y / c2 and mx <= c2 * Y:
        return "diagonal"
    if mn <= Y / c3 and Y / c2 <= mx <= c2 * Y:
        return "boundary-strip"
    return "unclassified"


def regime_comparator(
    sing: Singularity,
    regime: str,
    v: float,
    t: float,
    y: float,
    thresholds: RegimeThresholds | None = None,
) -> float:
    """Elementary comparator the Poisson value is squeezed against."""
    thresholds = thresholds or RegimeThresholds()
    mn, mx = (v, t) if v <= t else (t, v)
    if regime == "far":
        return mn / mx ** (sing.gamma + 1.0)
    if regime == "near-origin":
        u = (t - sing.a * v) / sing.b
        _, V = power_polar(complex(u, v), sing.gamma)
        return float(V) / (1.0 + abs(y)) ** 2
    if regime == "diagonal":
        return 1.0 / (1.0 + abs(y))
    if regime == "boundary-strip":
        rho = rho_solver(sing, y, mn, thresholds=thresholds)
        head = (1.0 + abs(y)) ** (1.0 / sing.gamma - 1.0)
        return head * mn / (mn * mn + (mx - rho) ** 2)
    raise ValueError(f"no comparator for regime {regime!r}")


@dataclass(frozen=True)
class RegimeBand:
    """Extreme ratios of Poisson value to comparator over a seeded sample."""

    regime: str
    sup_ratio: float
    inf_ratio: float
    sample_count: int
    thresholds: RegimeThresholds


def _sample_y(rng: np.random.Generator, n: int, y_min: float, y_max: float) -> np.ndarray:
    """Magnitudes log-uniform in [y_min, y_max], random sign."""
    mag = np.exp(rng.uniform(math.log(y_min), math.log(y_max), n))
    sign = rng.choice((-1.0, 1.0), n)
    return mag * sign


def regime_constant_sampler(
    sing: Singularity,
    regime: str,
    sample_count: int = 10_000,
    seed: int = 0,
    thresholds: RegimeThresholds | None = None,
    y_max: float = 1e4,
) -> RegimeBand:
    """Empirical two-sided band for one regime of the Poisson estimate.

    Draws ``(v, t, y)`` uniformly (log scales) from the regime's hypothesis
    set intersected with ``min(v, t) >= 1`` and ``|y| <= y_max``, and returns
    the extreme ratios of the exact Poisson value to the comparator.  For the
    two threshold-free part-1 identities the "ratio" is the identity's middle
    expression itself.
    """
    if sample_count < 100:
        raise ValueError("sample_count must be at least 100")
    thresholds = thresholds or RegimeThresholds()
    c2, c3 = thresholds.c2, thresholds.c3
    gamma = sing.gamma
    rng = np.random.default_rng(seed)

    ratios = np.empty(sample_count)
    if regime in ("part1-radius", "part1-height"):
        v = np.exp(rng.uniform(0.0, math.log(1e3), sample_count))
        t = np.exp(rng.uniform(0.0, math.log(1e3), sample_count))
        u = (t - sing.a * v) / sing.b
        U, V = power_polar(u + 1j * v, gamma)
        mn, mx = np.minimum(v, t), np.maximum(v, t)
        if regime == "part1-radius":
            ratios = mx**gamma / np.hypot(U, V)
        else:
            ratios = mx ** (gamma - 1.0) * mn / V
    else:
        got = 0
        guard = 0
        while got < sample_count:
            guard += 1
            if guard > 200 * sample_count:
                raise EmptyRegimeError(
                    f"could not draw samples for regime {regime!r} with "
                    f"thresholds c2={c2}, c3={c3} and y_max={y_max}"
                )
            if regime == "far":
                y = float(_sample_y(rng, 1, 1.0, y_max)[0])
                Y = float(scale_factor(sing, y))
                lo = max(1.0, c2 * Y)
                mx = lo * math.exp(rng.uniform(0.0, math.log(10.0)))
                mn = math.exp(rng.uniform(0.0, math.log(mx)))
            elif regime == "near-origin":
                # max <= Y/c2 with max >= 1 requires Y >= c2
                y_lo = max(1.0, c2**gamma)
                if y_lo >= y_max:
                    raise EmptyRegimeError(
                        f"near-origin regime empty: needs |y| >= {y_lo:g} > y_max={y_max:g}"
                    )
                y = float(_sample_y(rng, 1, y_lo, y_max)[0])
                Y = float(scale_factor(sing, y))
                mx = math.exp(rng.uniform(0.0, math.log(Y / c2)))
                mn = math.exp(rng.uniform(0.0, math.log(mx))) if mx > 1.0 else 1.0
            elif regime == "diagonal":
                y = float(_sample_y(rng, 1, 1.0, y_max)[0])
                Y = float(scale_factor(sing, y))
                lo = max(1.0, Y / c2)
                hi = c2 * Y
                if hi <= lo:
                    continue
                mn = math.exp(rng.uniform(math.log(lo), math.log(hi)))
                mx = math.exp(rng.uniform(math.log(mn), math.log(hi)))
            elif regime == "boundary-strip":
                # min <= Y/c3 with min >= 1 requires Y >= c3; the comparator's
                # rho is defined on the v <= t branch with y > 0 (the level
                # equation has its root there); the reflection swapping the
                # sector's boundary rays flips the sign of U and exchanges the
                # branches, so positive y on this branch covers both cases
                y_lo = max(1.0, c3**gamma)
                if y_lo >= y_max:
                    raise EmptyRegimeError(
                        f"boundary-strip regime empty: needs |y| >= {y_lo:g} > y_max={y_max:g}"
                    )
                y = math.exp(rng.uniform(math.log(y_lo), math.log(y_max)))
                Y = float(scale_factor(sing, y))
                mn = math.exp(rng.uniform(0.0, math.log(Y / c3)))
                lo = max(Y / c2, mn)
                hi = c2 * Y
                mx = math.exp(rng.uniform(math.log(lo), math.log(hi)))
                ratios[got] = float(poisson_density(sing, mn, mx, y)) / regime_comparator(
                    sing, regime, mn, mx, y, thresholds
                )
                got += 1
                continue
            else:
                raise ValueError(f"unknown regime {regime!r}")
            v, t = (mn, mx) if rng.random() < 0.5 else (mx, mn)
            dens = float(poisson_density(sing, v, t, y))
            comp = regime_comparator(sing, regime, v, t, y, thresholds)
            ratios[got] = dens / comp
            got += 1

    sup_ratio = float(np.max(ratios))
    inf_ratio = float(np.min(ratios))
    if not (math.isfinite(sup_ratio) and inf_ratio > 0.0):
        raise RuntimeError(f"regime {regime!r} produced a degenerate band [{inf_ratio}, {sup_ratio}]")
    return RegimeBand(
        regime=regime,
        sup_ratio=sup_ratio,
        inf_ratio=inf_ratio,
        sample_count=sample_count,
        thresholds=thresholds,
    )


# ---------------------------------------------------------------------------
# The level-line root rho(y, v)
# ---------------------------------------------------------------------------

_LONG = np.longdouble


def power_real_residual(sing: Singularity, u: float, v: float, y: float) -> float:
    """``Re((u + iv)^gamma) - y`` evaluated in extended precision."""
    ul, vl = _LONG(u), _LONG(v)
    rho = np.hypot(ul, vl)
    theta = np.arctan2(vl, ul)
    return float(rho**_LONG(sing.gamma) * np.cos(_LONG(sing.gamma) * theta) - _LONG(y))


def rho_solver(
    sing: Singularity,
    y: float,
    v: float,
    thresholds: RegimeThresholds | None = None,
) -> float:
    """Solve ``Re((u + iv)^gamma) = y`` along the level line of ``v`` and
    return ``rho = b u + a v`` (the ``t`` coordinate of the crossing).

    Implements the branch where ``v`` is the smaller coordinate (``v <= t``);
    the swapped configuration follows by relabeling the inputs.  The real
    part is strictly increasing in ``u`` on ``u >= v / tan(sector angle
    /gamma)``... in practice on ``u > 0`` for angles below ``pi/(2 gamma)``,
    so bisection on an expanding bracket is branch-safe; a final safeguarded
    refinement drives the extended-precision residual to the floating floor.
    """
    thresholds = thresholds or RegimeThresholds()
    if not v >= 1.0:
        raise ValueError("rho_solver requires v >= 1")
    Y = float(scale_factor(sing, y))
    if v > Y / thresholds.c3:
        raise ValueError(
            f"rho_solver requires v <= (1+|y|)^(1/gamma)/c3 = {Y / thresholds.c3:g}, got v={v:g}"
        )
    gamma = sing.gamma

    def real_part(u: float) -> float:
        U, _ = power_polar(complex(u, v), gamma)
        return float(U)

    def f(u: float) -> float:
        return real_part(u) - y

    # Re(tau^gamma) = |tau|^gamma cos(gamma arg tau) is positive and increasing
    # in u once gamma*arg(tau) < pi/2; bracket the root by expansion from there
    u_lo = v / math.tan(math.pi / (2.0 * gamma)) if gamma > 1.0 else v
    u_lo = max(u_lo, 1e-12)
    if f(u_lo) > 0.0:
        raise NoRootError(
            f"Re((u+iv)^gamma) already exceeds y={y:g} at the start of the "
            f"monotone ray (v={v:g}); no root on the v <= t branch"
        )
    u_hi = max(2.0 * u_lo, 2.0 * Y, 2.0)
    for _ in range(200):
        if f(u_hi) > 0.0:
            break
        u_hi *= 2.0
    else:
        raise NoRootError(f"no sign change found for y={y:g}, v={v:g}")
    u_root = brentq(f, u_lo, u_hi, xtol=1e-13, rtol=8.9e-16, maxiter=200)

    # safeguarded Newton polish against the extended-precision residual:
    # d/du Re((u+iv)^gamma) = gamma rho^{gamma-1} cos((gamma-1) theta)
    best_u = u_root
    best_res = abs(power_real_residual(sing, best_u, v, y))
    for _ in range(4):
        rho_abs = math.hypot(best_u, v)
        theta = math.atan2(v, best_u)
        slope = gamma * rho_abs ** (gamma - 1.0) * math.cos((gamma - 1.0) * theta)
        if slope <= 0.0 or not math.isfinite(slope):
            break
        cand = best_u - power_real_residual(sing, best_u, v, y) / slope
        cand_res = abs(power_real_residual(sing, cand, v, y))
        if cand_res < best_res:
            best_u, best_res = cand, cand_res
        else:
            break
    u_root = best_u

    rho = sing.b * u_root + sing.a * v
    lo_ok = rho >= Y / thresholds.c2 - 1e-9
    hi_ok = rho <= thresholds.c2 * Y + 1e-9
    if not (lo_ok and hi_ok):
        raise NoRootError(
            f"root found but rho={rho:g} violates the comparability band "
            f"[{Y / thresholds.c2:g}, {thresholds.c2 * Y:g}]; thresholds too small"
        )
    return float(rho)


# ---------------------------------------------------------------------------
# The main bound report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KernelCell:
    s: float
    y: float
    K: float
    K_err: float
    bound_ratio: float
    ok: bool
    message: str = ""


@dataclass(frozen=True)
class KernelReport:
    cells: tuple[KernelCell, ...]
    empirical_c: float
    refinement_drift: float | None
    refined_empirical_c: float | None
    s_grid: tuple[float, ...]
    y_grid: tuple[float, ...]

    @property
    def failed_cells(self) -> tuple[KernelCell, ...]:
        return tuple(c for c in self.cells if not c.ok)


def _refine_s(s_grid: list[float]) -> list[float]:
    """Insert geometric midpoints between consecutive s values."""
    out = list(s_grid)
    for a, b in zip(s_grid, s_grid[1:]):
        out.append(math.sqrt(a * b))
    return sorted(set(out))


def _refine_y(y_grid: list[float]) -> list[float]:
    """Insert midpoints: geometric between same-sign neighbors, arithmetic
    across (or at) zero."""
    ys = sorted(set(y_grid))
    out = list(ys)
    for a, b in zip(ys, ys[1:]):
        if a > 0 and b > 0:
            out.append(math.sqrt(a * b))
        elif a < 0 and b < 0:
            out.append(-math.sqrt(a * b))
        else:
            out.append(0.5 * (a + b))
    return sorted(set(out))


def _evaluate_grid(sing, s_grid, y_grid, tol) -> list[KernelCell]:
    cells = []
    for s in s_grid:
        for y in y_grid:
            env = bound_envelope(sing, s, y)
            try:
                res = kernel_K(sing, s, y, tol)
                cells.append(
                    KernelCell(s=s, y=y, K=res.value, K_err=res.error_estimate, bound_ratio=res.value / env, ok=True)
                )
            except Exception as err:  # keep the sweep alive; flag the cell
                cells.append(
                    KernelCell(s=s, y=y, K=math.nan, K_err=math.nan, bound_ratio=math.nan, ok=False, message=str(err))
                )
    return cells


def kernel_report(
    sing: Singularity,
    s_grid,
    y_grid,
    tol: Tolerance | None = None,
    refine: bool = False,
) -> KernelReport:
    """Sweep ``K_s(y)`` over a grid and certify the decay-bound ratio.

    ``empirical_c`` is the sup of ``bound_ratio`` over successful cells.
    With ``refine=True`` both grids are refined by a factor 2 (midpoint
    insertion) and the relative change of the sup is reported as
    ``refinement_drift``.  Failed cells are flagged, never dropped silently.
    """
    s_grid = sorted(float(s) for s in s_grid)
    y_grid = sorted(float(y) for y in y_grid)
    if not s_grid or not y_grid:
        raise ValueError("grids must be nonempty")
    if s_grid[0] <= 0:
        raise ValueError("s values must be positive")
    cells = _evaluate_grid(sing, s_grid, y_grid, tol)
    ratios = [c.bound_ratio for c in cells if c.ok]
    if not ratios:
        raise RuntimeError("all kernel cells failed")
    empirical_c = max(ratios)

    drift = None
    refined_c = None
    if refine:
        fine_cells = _evaluate_grid(sing, _refine_s(s_grid), _refine_y(y_grid), tol)
        fine_ratios = [c.bound_ratio for c in fine_cells if c.ok]
        if fine_ratios:
            refined_c = max(fine_ratios)
            drift = abs(refined_c - empirical_c) / empirical_c
    return KernelReport(
        cells=tuple(cells),
        empirical_c=empirical_c,
        refinement_drift=drift,
        refined_empirical_c=refined_c,
        s_grid=tuple(s_grid),
        y_grid=tuple(y_grid),
    )


def case_decay_slope(sing: Singularity, s_values, y: float = 0.0, tol: Tolerance | None = None):
    """Least-squares slope of ``log K_s(y)`` against ``log s``.

    In the regime ``s >> (1+|y|)^{1/gamma}`` the kernel decays like
    ``s^{1 - gamma}``, so the fitted slope should settle near ``1 - gamma``
    (slightly above it at finite ``s``).  Returns ``(slope, values)``.
    """
    s_values = sorted(float(s) for s in s_values)
    if len(s_values) < 2:
        raise ValueError("need at least two s values")
    ks = [kernel_K(sing, s, y, tol).value for s in s_values]
    logs = np.log(np.asarray(s_values))
    logk = np.log(np.asarray(ks))
    slope = float(np.polyfit(logs, logk, 1)[0])
    return slope, ks
