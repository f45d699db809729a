"""Grand norms: suprema over the exponent on explicit grids.

Every supremum over a continuum of exponents is computed as a maximum over
an explicit grid followed by golden-section refinement inside the brackets
around the two best grid points.  The result is therefore always a LOWER
bound of the true supremum.  When the discrete maximum sits on the last
grid point before the (excluded or truncated) right endpoint, the result
carries an ``endpoint_flag``: the true supremum may keep growing toward the
boundary and the reported value must not be trusted as a ceiling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .genfun import ExponentInterval, GeneratingFunction
from .measure import INFINITY, GridFunction, lp_norm, lp_norm_table

#: truncation point for grids on intervals with b = inf
P_MAX = 1000.0
DEFAULT_POINTS = 256
DEFAULT_REFINEMENT = 40

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class PGrid:
    """Evaluation grid for suprema over the exponent.

    ``points`` are finite, strictly increasing exponents inside
    ``[interval.a, interval.b)``; ``include_infinity`` appends the INFINITY
    exponent as an explicit extra evaluation point.  ``refinement_depth``
    is the number of golden-section steps run inside the bracket around a
    discrete argmax (0 disables refinement).
    """

    interval: ExponentInterval
    points: tuple
    endpoint_offset: float = 0.0
    refinement_depth: int = DEFAULT_REFINEMENT
    include_infinity: bool = False

    def __post_init__(self) -> None:
        pts = tuple(float(p) for p in self.points)
        if not pts:
            raise ValueError("PGrid requires at least one finite point")
        arr = np.asarray(pts)
        if np.any(~np.isfinite(arr)):
            raise ValueError("PGrid points must be finite (INFINITY is a flag)")
        if np.any(np.diff(arr) <= 0.0):
            raise ValueError("PGrid points must be strictly increasing")
        if pts[0] < self.interval.a or pts[-1] >= self.interval.b:
            raise ValueError(
                f"PGrid points must lie in [{self.interval.a}, {self.interval.b})"
            )
        if self.refinement_depth < 0:
            raise ValueError("refinement_depth must be >= 0")
        object.__setattr__(self, "points", pts)

    @property
    def points_array(self) -> np.ndarray:
        return np.asarray(self.points)

    def without_infinity(self) -> "PGrid":
        if not self.include_infinity:
            return self
        return PGrid(self.interval, self.points, self.endpoint_offset,
                     self.refinement_depth, False)

    def with_refinement(self, depth: int) -> "PGrid":
        return PGrid(self.interval, self.points, self.endpoint_offset,
                     int(depth), self.include_infinity)


@dataclass(frozen=True)
class SupResult:
    """Value and argmax of a grid supremum.

    ``value`` equals the objective at ``argmax_p``; ``endpoint_flag`` is set
    when the discrete maximum was attained at the last finite grid point
    (possible growth toward the right endpoint).
    """

    value: float
    argmax_p: float
    grid: Optional[PGrid]
    endpoint_flag: bool = False

    def __float__(self) -> float:
        return self.value


def exponent_grid(a: float, b: float, n: int, p_max: float = P_MAX,
                  endpoint_offset: Optional[float] = None) -> np.ndarray:
    """Log-spaced exponents on [a, b) backing off the right endpoint."""
    a = float(a)
    b = float(b)
    if math.isfinite(b):
        eps = float(endpoint_offset) if endpoint_offset is not None else 1e-6 * (b - a)
        hi = b - eps
    else:
        hi = max(p_max, a + 1.0)
    if n == 1 or hi <= a:
        return np.array([a])
    return np.geomspace(a, hi, int(n))


def default_grid(psi: GeneratingFunction, n_points: int = DEFAULT_POINTS,
                 refinement_depth: int = DEFAULT_REFINEMENT,
                 p_max: float = P_MAX,
                 endpoint_offset: Optional[float] = None,
                 include_infinity: Optional[bool] = None,
                 extra_points: Sequence[float] = ()) -> PGrid:
    """Default evaluation grid for a generating function.

    Log-spaced points on ``[a, min(b - eps, p_max)]`` merged with the
    function's anchors, plus the INFINITY point when psi is finite there.
    """
    a, b = psi.domain.a, psi.domain.b
    pts = exponent_grid(a, b, n_points, p_max=p_max, endpoint_offset=endpoint_offset)
    extras = [float(x) for x in (*psi.anchors, *extra_points)
              if a <= float(x) < b and math.isfinite(float(x))]
    if extras:
        pts = np.unique(np.concatenate([pts, np.asarray(extras)]))
    if include_infinity is None:
        include_infinity = psi.infinity_value is not None
    eps = float(b - pts[-1]) if math.isfinite(b) else 0.0
    return PGrid(psi.domain, tuple(pts), eps, refinement_depth, bool(include_infinity))


def grid_from_points(interval: ExponentInterval, points: Sequence[float],
                     refinement_depth: int = DEFAULT_REFINEMENT,
                     include_infinity: bool = False) -> PGrid:
    pts = tuple(sorted(float(p) for p in points))
    eps = interval.b - pts[-1] if math.isfinite(interval.b) else 0.0
    return PGrid(interval, pts, eps, refinement_depth, include_infinity)


def _golden_max(fn: Callable[[float], float], lo: float, hi: float, iters: int,
                best: float, best_p: float) -> tuple:
    """Golden-section maximum search on [lo, hi], keeping the incumbent.

    A candidate replaces the incumbent only when strictly larger, or equal
    with a smaller exponent; ties therefore resolve toward smaller p.
    """
    if hi <= lo or iters <= 0:
        return best, best_p
    h = hi - lo
    x1 = lo + _INVPHI2 * h
    x2 = lo + _INVPHI * h
    f1 = fn(x1)
    f2 = fn(x2)
    for x, v in ((x1, f1), (x2, f2)):
        if v > best or (v == best and x < best_p):
            best, best_p = v, x
    for _ in range(int(iters)):
        if f1 >= f2:
            hi = x2
            x2, f2 = x1, f1
            h = hi - lo
            x1 = lo + _INVPHI2 * h
            f1 = fn(x1)
            x, v = x1, f1
        else:
            lo = x1
            x1, f1 = x2, f2
            h = hi - lo
            x2 = lo + _INVPHI * h
            f2 = fn(x2)
            x, v = x2, f2
        if v > best or (v == best and x < best_p):
            best, best_p = v, x
    return best, best_p


def sup_over_grid(objective: Callable[[float], float], grid: PGrid,
                  values: Optional[np.ndarray] = None) -> SupResult:
    """Maximum of ``objective`` over the grid, with golden-section refinement.

    ``values`` optionally carries precomputed objective values at
    ``grid.points``.  Objective values may be ``-inf`` (excluded exponents)
    but not ``+inf`` or NaN.  Refinement searches the brackets around the
    two best separated grid points and never lowers the discrete maximum.
    Ties resolve toward the smallest exponent.
    """
    pts = grid.points_array
    if values is None:
        values = np.array([float(objective(p)) for p in pts])
    else:
        values = np.asarray(values, dtype=float)
    if np.any(np.isnan(values)) or np.any(values == INFINITY):
        raise ValueError("objective must be finite or -inf at every grid point")

    k = int(np.argmax(values))  # first max = smallest exponent on ties
    best = float(values[k])
    best_p = float(pts[k])
    endpoint_flag = k == pts.size - 1

    if grid.refinement_depth > 0 and pts.size >= 2 and math.isfinite(best):
        brackets = [k]
        if pts.size >= 4:
            masked = values.copy()
            masked[max(k - 1, 0):k + 2] = -INFINITY
            k2 = int(np.argmax(masked))
            if math.isfinite(masked[k2]):
                brackets.append(k2)
        for idx in brackets:
            lo = pts[max(idx - 1, 0)]
            hi = pts[min(idx + 1, pts.size - 1)]
            best, best_p = _golden_max(objective, lo, hi, grid.refinement_depth,
                                       best, best_p)

    if grid.include_infinity:
        v_inf = float(objective(INFINITY))
        if v_inf > best:
            best, best_p = v_inf, INFINITY
            endpoint_flag = False

    return SupResult(best, best_p, grid, endpoint_flag)


def _check_grid_in_domain(grid: PGrid, psi: GeneratingFunction) -> None:
    if grid.points[0] < psi.domain.a or grid.points[-1] >= psi.domain.b:
        raise ValueError("grid points fall outside the generating function domain")
    if grid.include_infinity and psi.infinity_value is None:
        raise ValueError("grid includes INFINITY but psi is not defined there")


def gls_norm(f: GridFunction, psi: GeneratingFunction,
             grid: Optional[PGrid] = None) -> SupResult:
    """Grand norm ``sup_p lp_norm(f, p) / psi(p)`` over the grid.

    Grid points where ``psi = +inf`` contribute 0 (the ``x / inf = 0``
    convention), so the degenerate kind reduces exactly to ``lp_norm(f, r)``
    through its anchor.  The result is a lower bound of the continuum
    supremum; see the module docstring for the endpoint flag semantics.
    """
    if grid is None:
        grid = default_grid(psi)
    _check_grid_in_domain(grid, psi)
    pts = grid.points_array
    profile = lp_norm_table(f.values, f.space.weights, pts)
    psiv = psi.eval_array(pts)
    with np.errstate(invalid="ignore"):
        ratios = profile / psiv  # finite / inf = 0

    def objective(p: float) -> float:
        denom = psi.eval(p)
        if math.isinf(denom):
            return 0.0
        return lp_norm(f, p) / denom

    return sup_over_grid(objective, grid, values=ratios)


def fundamental_function(psi: GeneratingFunction, delta: float,
                         grid: Optional[PGrid] = None) -> SupResult:
    """``sup_p delta**(1/p) / psi(p)`` over the grid; nondecreasing in delta."""
    delta = float(delta)
    if not (delta > 0.0 and math.isfinite(delta)):
        raise ValueError("delta must be a positive finite real")
    if grid is None:
        grid = default_grid(psi)
    _check_grid_in_domain(grid, psi)
    pts = grid.points_array
    psiv = psi.eval_array(pts)
    values = np.power(delta, 1.0 / pts) / psiv

    def objective(p: float) -> float:
        denom = psi.eval(p)
        if math.isinf(denom):
            return 0.0
        return delta ** (1.0 / p) / denom  # delta**0 = 1 at p = inf

    return sup_over_grid(objective, grid, values=values)


def classical_grand_norm(f: GridFunction, q: float,
                         eps_grid: Sequence[float]) -> SupResult:
    """``sup_eps eps**(1/(q-eps)) * lp_norm(f, q-eps)`` over eps in (0, q-1).

    Plain grid maximum (no refinement); coincides with ``gls_norm`` under
    the classical_grand generating function on the matching exponent grid
    ``p = q - eps``.
    """
    q = float(q)
    if not (q > 1.0 and math.isfinite(q)):
        raise ValueError("classical grand norm requires finite q > 1")
    eps = np.asarray(list(eps_grid), dtype=float)
    if eps.size == 0:
        raise ValueError("eps_grid must be non-empty")
    if np.any(eps <= 0.0) or np.any(eps >= q - 1.0):
        raise ValueError("all eps must lie in (0, q-1)")
    ps = q - eps
    profile = lp_norm_table(f.values, f.space.weights, ps)
    vals = eps ** (1.0 / ps) * profile
    k = int(np.argmax(vals))
    return SupResult(float(vals[k]), float(ps[k]), None, False)
