"""Weighted discrete measure spaces and Lebesgue-Riesz norms.

Conventions shared by the whole package:

* A measure space is a finite list of points; point ``j`` carries a strictly
  positive weight ``w[j]`` and the total mass is ``sum(w)``.
* Exponents are floats in ``[1, inf)``.  ``math.inf`` is the distinguished
  supremum exponent: it is never used as a power, and every exponent loop in
  the package branches on it explicitly.
* ``lp_norm(f, p) = (sum_j w[j] * |f[j]|**p) ** (1/p)`` for finite ``p``,
  and ``max_j |f[j]|`` at ``p = inf`` (all weights are positive, so the
  essential supremum is the plain maximum).

Large exponents are evaluated in rescaled form,
``M * (sum_j w[j] * (|f[j]|/M)**p)**(1/p)`` with ``M = max|f|``; the scaled
powers switch to ``exp(p * log(x))`` above ``p = 50``.  Rescaling keeps the
whole computation overflow-free for ``p`` up to ``1e4`` and beyond.  Sums
use ``math.fsum`` once a space exceeds 1000 points.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

INFINITY = math.inf

#: switch from direct powers to exp(p * log x) above this exponent
_POW_SWITCH = 50.0
#: switch from numpy pairwise summation to math.fsum above this size
_FSUM_SIZE = 1000


def as_exponent(p: float) -> float:
    """Validate and return an exponent: a float in [1, inf) or INFINITY."""
    p = float(p)
    if math.isnan(p):
        raise ValueError("exponent must not be NaN")
    if p < 1.0:
        raise ValueError(f"exponent must be >= 1, got {p}")
    return p


def is_infinite(p: float) -> bool:
    return math.isinf(p)


@dataclass(frozen=True)
class MeasureSpace:
    """Finite set of points with strictly positive weights."""

    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise ValueError("weights must be finite and strictly positive")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @classmethod
    def counting(cls, n: int) -> "MeasureSpace":
        return cls(np.ones(int(n)))

    @classmethod
    def normalized(cls, n: int) -> "MeasureSpace":
        """Uniform probability weights 1/n."""
        n = int(n)
        return cls(np.full(n, 1.0 / n))

    @property
    def size(self) -> int:
        return int(self.weights.size)

    @property
    def total_mass(self) -> float:
        return float(math.fsum(self.weights.tolist()))


@dataclass(frozen=True)
class GridFunction:
    """Real-valued function on a :class:`MeasureSpace`."""

    space: MeasureSpace
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1:
            raise ValueError("values must be 1-d")
        if v.size != self.space.size:
            raise ValueError(
                f"values length {v.size} does not match space size {self.space.size}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @classmethod
    def on_counting(cls, values: Sequence[float]) -> "GridFunction":
        values = np.asarray(values, dtype=float)
        return cls(MeasureSpace.counting(values.size), values)

    @classmethod
    def constant(cls, space: MeasureSpace, c: float) -> "GridFunction":
        return cls(space, np.full(space.size, float(c)))

    def scaled(self, c: float) -> "GridFunction":
        return GridFunction(self.space, self.values * float(c))


def _scaled_powers(scaled: np.ndarray, ps: np.ndarray) -> np.ndarray:
    """Powers of values in [0, 1]: direct for small p, exp(p*log x) above 50."""
    out = np.empty(scaled.shape + (ps.size,))
    small = ps <= _POW_SWITCH
    if small.any():
        out[..., small] = scaled[..., None] ** ps[small]
    if (~small).any():
        with np.errstate(divide="ignore"):
            logs = np.log(scaled)  # -inf at zeros; exp(p * -inf) = 0
        out[..., ~small] = np.exp(logs[..., None] * ps[~small])
    return out


def lp_norm_table(values, weights, ps) -> np.ndarray:
    """Weighted p-norms of one or many value vectors at many finite exponents.

    ``values`` has shape ``(n,)`` or ``(m, n)``; the result has shape
    ``(len(ps),)`` or ``(m, len(ps))``.  All exponents must be finite and
    >= 1; the INFINITY exponent is handled by the callers.
    """
    V = np.asarray(values, dtype=float)
    single = V.ndim == 1
    V = np.atleast_2d(V)
    w = np.asarray(weights, dtype=float)
    ps = np.asarray(ps, dtype=float).ravel()
    if ps.size == 0:
        return np.zeros((V.shape[0], 0)) if not single else np.zeros(0)
    if np.any(np.isnan(ps)) or np.any(np.isinf(ps)) or np.any(ps < 1.0):
        raise ValueError("lp_norm_table requires finite exponents >= 1")
    absv = np.abs(V)
    mx = absv.max(axis=1)
    out = np.zeros((V.shape[0], ps.size))
    pos = mx > 0.0
    if pos.any():
        scaled = absv[pos] / mx[pos, None]
        terms = _scaled_powers(scaled, ps) * w[None, :, None]
        if w.size > _FSUM_SIZE:
            sums = np.array(
                [[math.fsum(terms[i, :, j]) for j in range(ps.size)]
                 for i in range(terms.shape[0])]
            )
        else:
            sums = terms.sum(axis=1)
        out[pos] = mx[pos, None] * sums ** (1.0 / ps)[None, :]
    return out[0] if single else out


def lp_norm(f: GridFunction, p: float) -> float:
    """Weighted Lebesgue-Riesz norm of ``f`` at exponent ``p``.

    Returns ``(sum_j w[j] |f[j]|**p)**(1/p)``; at ``p = INFINITY`` the
    maximum of ``|f|`` over the (everywhere positively weighted) points.
    """
    p = as_exponent(p)
    if is_infinite(p):
        return float(np.abs(f.values).max())
    return float(lp_norm_table(f.values, f.space.weights, [p])[0])


def tail_function(f: GridFunction, t: float) -> float:
    """Measure of the level set ``{ j : |f[j]| >= t }``."""
    t = float(t)
    if math.isnan(t) or t < 0.0:
        raise ValueError("threshold t must be >= 0")
    mask = np.abs(f.values) >= t
    return float(math.fsum(f.space.weights[mask].tolist()))


def grid_function_from_spec(spec: dict) -> GridFunction:
    """Build a GridFunction from ``{"values": [...], "weights": [...]}``.

    ``weights`` is optional and defaults to the counting measure.
    """
    if not isinstance(spec, dict) or "values" not in spec:
        raise ValueError('grid function spec needs a "values" list')
    values = np.asarray(spec["values"], dtype=float)
    if "weights" in spec and spec["weights"] is not None:
        space = MeasureSpace(np.asarray(spec["weights"], dtype=float))
    else:
        space = MeasureSpace.counting(values.size)
    return GridFunction(space, values)


def grid_function_to_spec(f: GridFunction) -> dict:
    return {
        "weights": [float(x) for x in f.space.weights],
        "values": [float(x) for x in f.values],
    }


def load_grid_function(path) -> GridFunction:
    with open(Path(path), "r", encoding="utf-8") as fh:
        return grid_function_from_spec(json.load(fh))
