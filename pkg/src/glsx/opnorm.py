"""Matrix operators between weighted discrete Lq and Lp spaces.

Norm estimation comes in two independent flavors:

* ``op_norm_lower`` runs an alternating duality-map ascent (a nonlinear
  power iteration) from many starts.  Every iterate is a feasible ratio, so
  the best ratio seen is a certified LOWER bound of the true operator norm.
* ``op_norm_oracle`` brute-forces the unit sphere of the source space with
  a dense angular grid plus a coordinate-wise golden-section polish.  It is
  restricted to small sources and is the reference the ascent is checked
  against.

``verify_theorem1`` checks the grand-norm extrapolation inequality at grid
resolution: one exponent grid per side parameterizes the minimal constant,
both norms, and both fundamental-function values, which makes the discrete
inequality chain exact up to the quality of the inner ascent.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import _parallel
from .genfun import ExponentInterval, GeneratingFunction
from .gls import _golden_max, exponent_grid
from .measure import (INFINITY, GridFunction, MeasureSpace, as_exponent,
                      is_infinite, lp_norm_table)


def inv_exponent(p: float) -> float:
    """1/p with the convention 1/inf = 0."""
    return 0.0 if is_infinite(p) else 1.0 / p


@dataclass(frozen=True)
class MatrixOperator:
    """Matrix acting from functions on ``source`` to functions on ``target``."""

    entries: np.ndarray
    source: MeasureSpace
    target: MeasureSpace

    def __post_init__(self) -> None:
        e = np.asarray(self.entries, dtype=float)
        if e.ndim != 2:
            raise ValueError("entries must be a 2-d matrix")
        if not np.all(np.isfinite(e)):
            raise ValueError("entries must be finite")
        if e.shape != (self.target.size, self.source.size):
            raise ValueError(
                f"entries shape {e.shape} does not match target size "
                f"{self.target.size} and source size {self.source.size}"
            )
        e = e.copy()
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)

    @classmethod
    def on_counting(cls, entries) -> "MatrixOperator":
        e = np.asarray(entries, dtype=float)
        return cls(e, MeasureSpace.counting(e.shape[1]), MeasureSpace.counting(e.shape[0]))

    @classmethod
    def identity(cls, n: int) -> "MatrixOperator":
        return cls.on_counting(np.eye(int(n)))

    @property
    def shape(self) -> tuple:
        return self.entries.shape

    def is_nonnegative(self) -> bool:
        return bool(np.all(self.entries >= 0.0))


def operator_from_spec(spec: dict) -> MatrixOperator:
    """Parse ``{"entries": [[...]], "mu": [...], "nu": [...]}``.

    ``mu`` weights the target space, ``nu`` the source; both default to the
    counting measure.
    """
    if not isinstance(spec, dict) or "entries" not in spec:
        raise ValueError('matrix spec needs an "entries" list of rows')
    e = np.asarray(spec["entries"], dtype=float)
    if e.ndim != 2:
        raise ValueError("entries must be a matrix")
    mu = spec.get("mu")
    nu = spec.get("nu")
    target = MeasureSpace(np.asarray(mu, float)) if mu is not None else MeasureSpace.counting(e.shape[0])
    source = MeasureSpace(np.asarray(nu, float)) if nu is not None else MeasureSpace.counting(e.shape[1])
    return MatrixOperator(e, source, target)


def operator_to_spec(A: MatrixOperator) -> dict:
    return {
        "entries": [[float(x) for x in row] for row in A.entries],
        "mu": [float(x) for x in A.target.weights],
        "nu": [float(x) for x in A.source.weights],
    }


def apply(A: MatrixOperator, g: GridFunction) -> GridFunction:
    """Matrix application ``(Ag)_i = sum_j a(i, j) g_j``."""
    if g.space.size != A.source.size or not np.array_equal(g.space.weights, A.source.weights):
        raise ValueError("function lives on a different space than the operator source")
    return GridFunction(A.target, A.entries @ g.values)


def _colnorms(H: np.ndarray, w: np.ndarray, p: float) -> np.ndarray:
    """Weighted p-norms of the columns of H."""
    if is_infinite(p):
        return np.abs(H).max(axis=0)
    return lp_norm_table(H.T, w, [p])[:, 0]


def _colnorms_pc(H: np.ndarray, w: np.ndarray, pc: np.ndarray) -> np.ndarray:
    """Weighted p-norms of the columns of H, exponent pc[c] per column."""
    absh = np.abs(H)
    out = np.empty(H.shape[1])
    inf = np.isinf(pc)
    if inf.any():
        out[inf] = absh[:, inf].max(axis=0)
    fin = ~inf
    if fin.any():
        Hf = absh[:, fin]
        pf = pc[fin]
        mx = Hf.max(axis=0)
        safe = np.where(mx > 0.0, mx, 1.0)
        with np.errstate(divide="ignore"):
            logs = np.log(Hf / safe)  # -inf at zeros -> exp gives 0
        sums = (w[:, None] * np.exp(logs * pf[None, :])).sum(axis=0)
        out[fin] = mx * sums ** (1.0 / pf)
    return out


def _dual_target_pc(H: np.ndarray, w: np.ndarray, pc: np.ndarray) -> np.ndarray:
    """Columnwise ascent direction of the weighted p-norm at H (unscaled)."""
    U = np.empty_like(H)
    absh = np.abs(H)
    one = pc == 1.0
    if one.any():
        U[:, one] = w[:, None] * np.sign(H[:, one])
    inf = np.isinf(pc)
    if inf.any():
        cols = np.flatnonzero(inf)
        block = np.zeros((H.shape[0], cols.size))
        idx = absh[:, cols].argmax(axis=0)
        block[idx, np.arange(cols.size)] = np.sign(H[idx, cols])
        U[:, cols] = block
    rest = ~(one | inf)
    if rest.any():
        Hr = absh[:, rest]
        mx = Hr.max(axis=0)
        mx = np.where(mx > 0.0, mx, 1.0)
        with np.errstate(divide="ignore"):
            logs = np.log(Hr / mx)
        U[:, rest] = w[:, None] * np.exp(logs * (pc[rest] - 1.0)[None, :]) * np.sign(H[:, rest])
    return U


def _dual_source_pc(Z: np.ndarray, w: np.ndarray, qc: np.ndarray) -> np.ndarray:
    """Columnwise maximizer of <z, g> over the weighted q-unit sphere."""
    G = np.empty_like(Z)
    one = qc == 1.0
    if one.any():
        cols = np.flatnonzero(one)
        scores = np.abs(Z[:, cols]) / w[:, None]
        idx = scores.argmax(axis=0)
        block = np.zeros((Z.shape[0], cols.size))
        s = np.sign(Z[idx, cols])
        s[s == 0.0] = 1.0
        block[idx, np.arange(cols.size)] = s / w[idx]
        G[:, cols] = block
    inf = np.isinf(qc)
    if inf.any():
        G[:, inf] = np.where(Z[:, inf] < 0.0, -1.0, 1.0)
    rest = ~(one | inf)
    if rest.any():
        T = np.abs(Z[:, rest]) / w[:, None]
        mx = T.max(axis=0)
        mx = np.where(mx > 0.0, mx, 1.0)
        with np.errstate(divide="ignore"):
            logs = np.log(T / mx)
        B = np.exp(logs * (1.0 / (qc[rest] - 1.0))[None, :]) * np.sign(Z[:, rest])
        norms = _colnorms_pc(B, w, qc[rest])
        norms[norms == 0.0] = 1.0
        G[:, rest] = B / norms
    return G


def _ascent_batch(E: np.ndarray, mu: np.ndarray, nu: np.ndarray,
                  G: np.ndarray, qc: np.ndarray, pc: np.ndarray,
                  tol: float, max_iter: int) -> tuple:
    """Duality-map ascent over many columns at once; column c maximizes the
    qc[c] -> pc[c] ratio.  Returns (best ratios, best witnesses).

    Columns run independently; a column retires when its ratio stagnates
    below ``tol``, when it stops improving for three steps (dual-map
    two-cycles at the corner exponents), or when its pullback dies.
    """
    n_cols = G.shape[1]
    g0 = _colnorms_pc(G, nu, qc)
    G = G / np.where(g0 > 0.0, g0, 1.0)
    best = np.zeros(n_cols)
    best_G = G.copy()
    prev = np.full(n_cols, -1.0)
    no_improve = np.zeros(n_cols, dtype=int)
    idx = np.arange(n_cols)

    for _ in range(int(max_iter)):
        Ga = G[:, idx]
        qa, pa = qc[idx], pc[idx]
        H = E @ Ga
        gn = _colnorms_pc(Ga, nu, qa)
        hn = _colnorms_pc(H, mu, pa)
        ok = gn > 0.0
        ratio = np.zeros(idx.size)
        ratio[ok] = hn[ok] / gn[ok]

        improved = ratio > best[idx]
        cols = idx[improved]
        best_G[:, cols] = Ga[:, improved]
        best[cols] = ratio[improved]
        no_improve[idx] = np.where(improved, 0, no_improve[idx] + 1)

        stalled = np.abs(ratio - prev[idx]) <= tol * np.maximum(ratio, 1.0)
        prev[idx] = ratio
        keep = ~stalled & (no_improve[idx] < 3)
        if not keep.any():
            break

        U = _dual_target_pc(H[:, keep], mu, pa[keep])
        Z = E.T @ U
        alive = np.abs(Z).max(axis=0) > 0.0
        idx = idx[keep][alive]
        if idx.size == 0:
            break
        G[:, idx] = _dual_source_pc(Z[:, alive], nu, qc[idx])
    return best, best_G


def _ascent_starts(n: int, restarts: int, seed: int) -> np.ndarray:
    """Constant vector, basis vectors, and seeded random sign vectors."""
    rng = np.random.default_rng(seed)
    signs = rng.choice([-1.0, 1.0], size=(n, int(restarts)))
    return np.hstack([np.ones((n, 1)), np.eye(n), signs])


@dataclass(frozen=True)
class AscentResult:
    value: float
    witness: GridFunction
    zero_matrix: bool = False

    def __float__(self) -> float:
        return self.value


def op_norm_lower(A: MatrixOperator, q: float, p: float, restarts: int = 32,
                  seed: int = 0, tol: float = 1e-12, max_iter: int = 200) -> AscentResult:
    """Certified lower bound on the q->p operator norm by duality ascent.

    Starts from the constant vector, every basis vector, and ``restarts``
    random sign vectors; each start alternates a target-norm duality step,
    a transpose pullback, and a source-sphere projection until the ratio
    stagnates below ``tol``.  The best ratio ever seen (with its witness) is
    returned, so the value never exceeds the true norm.
    """
    q = as_exponent(q)
    p = as_exponent(p)
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    n_y = A.source.size
    if not A.entries.any():
        return AscentResult(0.0, GridFunction(A.source, np.zeros(n_y)), True)
    G = _ascent_starts(n_y, restarts, seed)
    n_cols = G.shape[1]
    best, best_G = _ascent_batch(A.entries, A.target.weights, A.source.weights,
                                 G, np.full(n_cols, q), np.full(n_cols, p),
                                 tol, max_iter)
    k = int(np.argmax(best))
    return AscentResult(float(best[k]), GridFunction(A.source, best_G[:, k].copy()))


def _angles_to_directions(thetas: Sequence[np.ndarray]) -> np.ndarray:
    """Spherical map from angle grids to nonnegative unit directions."""
    dim = len(thetas) + 1
    grids = np.meshgrid(*thetas, indexing="ij") if thetas else []
    flat = [g.ravel() for g in grids]
    n = flat[0].size if flat else 1
    G = np.ones((dim, n))
    for i in range(dim - 1):
        G[i] *= np.cos(flat[i])
        G[i + 1:] *= np.sin(flat[i])
    return G


def _direction_from_angles(theta: np.ndarray) -> np.ndarray:
    g = np.ones(theta.size + 1)
    for i, th in enumerate(theta):
        g[i] *= math.cos(th)
        g[i + 1:] *= math.sin(th)
    return g


def _angles_from_direction(g: np.ndarray) -> np.ndarray:
    """Inverse of the spherical map for a nonnegative unit direction."""
    n = g.size
    theta = np.zeros(n - 1)
    tail = 1.0
    for i in range(n - 1):
        if tail <= 0.0:
            break
        c = min(1.0, max(0.0, g[i] / tail))
        theta[i] = math.acos(c)
        tail *= math.sin(theta[i])
    return theta


_DIRECTION_CACHE: dict = {}
_QNORM_CACHE: dict = {}


def _oracle_directions(n: int, resolution: int) -> np.ndarray:
    """Cached nonnegative direction grid for an n-dimensional source."""
    key = (n, resolution)
    if key not in _DIRECTION_CACHE:
        if n == 1:
            base = np.ones((1, 1))
        else:
            theta = np.linspace(0.0, math.pi / 2.0, int(resolution))
            base = _angles_to_directions([theta] * (n - 1))
        if len(_DIRECTION_CACHE) >= 8:
            _DIRECTION_CACHE.clear()
        _DIRECTION_CACHE[key] = base
    return _DIRECTION_CACHE[key]


def _oracle_qnorms(base: np.ndarray, nu: np.ndarray, q: float,
                   resolution: int) -> np.ndarray:
    key = (base.shape[0], resolution, nu.tobytes(), q)
    if key not in _QNORM_CACHE:
        if len(_QNORM_CACHE) >= 32:
            _QNORM_CACHE.clear()
        _QNORM_CACHE[key] = _colnorms(base, nu, q)
    return _QNORM_CACHE[key]


def op_norm_oracle_table(A: MatrixOperator, qs: Sequence[float],
                         ps: Sequence[float], resolution: int = 720,
                         allow_large: bool = False, polish: bool = True) -> dict:
    """Brute-force q->p operator norms for every (q, p) pair, sharing the
    direction grid, the matrix products, and the per-exponent column norms
    across pairs.  Returns a dict keyed by (q, p)."""
    qs = [as_exponent(qv) for qv in qs]
    ps = [as_exponent(p) for p in ps]
    n_y = A.source.size
    if n_y > 4 and not allow_large:
        raise ValueError("op_norm_oracle is limited to sources of size <= 4; "
                         "pass allow_large=True to override")
    if resolution < 2 and n_y > 1:
        raise ValueError("resolution must be >= 2")
    E = A.entries
    mu = A.target.weights
    nu = A.source.weights
    if not E.any():
        return {(qv, p): 0.0 for qv in qs for p in ps}

    base = _oracle_directions(n_y, int(resolution))
    angle_shape = (int(resolution),) * (n_y - 1)
    qn = {qv: _oracle_qnorms(base, nu, qv, int(resolution)) for qv in set(qs)}

    if A.is_nonnegative():
        patterns = [np.ones(n_y)]
    else:
        patterns = [np.array(s, dtype=float)
                    for s in itertools.product((1.0, -1.0), repeat=n_y)
                    if s[0] == 1.0]  # g and -g give the same ratio

    # classical extremizer candidates: the constant direction and every
    # basis direction (cube corners and spikes of the source unit balls)
    extra = np.hstack([np.ones((n_y, 1)) / math.sqrt(n_y), np.eye(n_y)])
    extra_qn = {qv: _colnorms(extra, nu, qv) for qv in set(qs)}

    # best (value, angles, sign pattern) per pair over all patterns
    best: dict = {pair: (-1.0, np.zeros(max(n_y - 1, 0)), patterns[0]) for pair in
                  ((qv, p) for qv in qs for p in ps)}
    for sign in patterns:
        H = (E * sign[None, :]) @ base
        He = (E * sign[None, :]) @ extra
        pn = {p: _colnorms(H, mu, p) for p in set(ps)}
        pe = {p: _colnorms(He, mu, p) for p in set(ps)}
        for qv in qs:
            for p in ps:
                vals = pn[p] / qn[qv]
                k = int(np.argmax(vals))
                if vals[k] > best[(qv, p)][0]:
                    idx = np.unravel_index(k, angle_shape) if n_y > 1 else ()
                    step0 = math.pi / 2.0 / (int(resolution) - 1)
                    theta = np.array([i * step0 for i in idx])
                    best[(qv, p)] = (float(vals[k]), theta, sign)
                evals = pe[p] / extra_qn[qv]
                ke = int(np.argmax(evals))
                if evals[ke] > best[(qv, p)][0]:
                    best[(qv, p)] = (float(evals[ke]),
                                     _angles_from_direction(extra[:, ke]), sign)

    step = math.pi / 2.0 / (int(resolution) - 1) if n_y > 1 else 0.0

    def polish_pair(pair) -> float:
        qv, p = pair
        best_val, theta0, sign = best[pair]
        if not polish or n_y == 1:
            return best_val
        theta = theta0.copy()
        Es = E * sign[None, :]

        def ratio_at(t: np.ndarray) -> float:
            g = _direction_from_angles(t)
            gn = _colnorms(g[:, None], nu, qv)[0]
            hn = _colnorms((Es @ g)[:, None], mu, p)[0]
            return hn / gn

        for _ in range(3):
            for axis in range(theta.size):
                lo = max(0.0, theta[axis] - step)
                hi = min(math.pi / 2.0, theta[axis] + step)

                def axis_fn(x: float, axis=axis) -> float:
                    t = theta.copy()
                    t[axis] = x
                    return ratio_at(t)

                val, arg = _golden_max(axis_fn, lo, hi, 60, best_val, theta[axis])
                if val > best_val:
                    best_val = val
                    theta[axis] = arg
        return float(best_val)

    pairs = [(qv, p) for qv in qs for p in ps]
    values = _parallel.thread_map(polish_pair, pairs)
    return dict(zip(pairs, values))


def op_norm_oracle(A: MatrixOperator, q: float, p: float, resolution: int = 720,
                   allow_large: bool = False, polish: bool = True) -> float:
    """Brute-force q->p operator norm over a dense angular grid.

    Nonnegative matrices are searched on the nonnegative orthant only
    (valid because ``|Ag| <= A|g|`` entrywise); otherwise every sign
    pattern of the source coordinates is combined with the nonnegative
    grid.  A coordinate-wise golden-section polish refines the best grid
    direction.  Cost grows as ``resolution**(n-1)``; sources larger than 4
    are rejected unless ``allow_large`` is set.
    """
    table = op_norm_oracle_table(A, [q], [p], resolution=resolution,
                                 allow_large=allow_large, polish=polish)
    return table[(as_exponent(q), as_exponent(p))]


@dataclass
class OperatorBoundCertificate:
    """Claimed bound ``|Ag|_p <= C * sigma**(1/q - 1/p) * |g|_q`` on two
    exponent intervals; ``witnessed`` records a passed sampling check."""

    sigma: float
    C: float
    p_interval: ExponentInterval
    q_interval: ExponentInterval
    witnessed: bool = False

    def __post_init__(self) -> None:
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise ValueError("sigma must be a positive finite real")
        if not (self.C > 0.0 and math.isfinite(self.C)):
            raise ValueError("C must be a positive finite real")


def _norm_profiles(V: np.ndarray, w: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Row profiles ||v||_p for every row of V and every exponent in pts."""
    finite = np.isfinite(pts)
    out = np.empty((V.shape[0], pts.size))
    if finite.any():
        out[:, finite] = lp_norm_table(V, w, pts[finite])
    if (~finite).any():
        out[:, ~finite] = np.abs(V).max(axis=1, keepdims=True)
    return out


def _candidate_functions(n: int, samples: int, rng: np.random.Generator) -> np.ndarray:
    """Random normal samples plus the deterministic extremal candidates."""
    gs = rng.standard_normal((int(samples), n))
    return np.vstack([gs, np.ones((1, n)), np.eye(n)])


@dataclass(frozen=True)
class SigmaConditionReport:
    holds: bool
    worst_ratio: float
    worst_p: float
    worst_q: float
    worst_witness: tuple
    samples: int
    tol: float


def check_sigma_condition(A: MatrixOperator, cert: OperatorBoundCertificate,
                          p_grid: Sequence[float], q_grid: Sequence[float],
                          samples: int = 100, seed: int = 0,
                          tol: float = 1e-9) -> SigmaConditionReport:
    """Sample the certificate inequality on random functions and grid pairs.

    Sets ``cert.witnessed`` on success and reports the worst ratio of
    left- to right-hand side together with its witness.
    """
    p_pts = np.array([as_exponent(p) for p in p_grid])
    q_pts = np.array([as_exponent(qv) for qv in q_grid])
    for p in p_pts:
        if not (cert.p_interval.a <= p < cert.p_interval.b or is_infinite(p)):
            raise ValueError(f"p grid point {p} outside certificate interval")
    for qv in q_pts:
        if not (cert.q_interval.a <= qv < cert.q_interval.b or is_infinite(qv)):
            raise ValueError(f"q grid point {qv} outside certificate interval")

    rng = np.random.default_rng(seed)
    G = _candidate_functions(A.source.size, samples, rng)
    H = G @ A.entries.T
    PN = _norm_profiles(H, A.target.weights, p_pts)  # (S, P)
    QN = _norm_profiles(G, A.source.weights, q_pts)  # (S, Q)

    inv_p = np.array([inv_exponent(p) for p in p_pts])
    inv_q = np.array([inv_exponent(qv) for qv in q_pts])
    factor = cert.C * cert.sigma ** (inv_q[:, None] - inv_p[None, :])  # (Q, P)

    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = PN[:, None, :] / (factor[None, :, :] * QN[:, :, None])
    ratios = np.nan_to_num(ratios, nan=0.0, posinf=0.0)
    s, qi, pi = np.unravel_index(int(np.argmax(ratios)), ratios.shape)
    worst = float(ratios[s, qi, pi])
    holds = worst <= 1.0 + tol
    cert.witnessed = bool(holds)
    return SigmaConditionReport(holds, worst, float(p_pts[pi]), float(q_pts[qi]),
                                tuple(float(x) for x in G[s]), int(G.shape[0]), tol)


@dataclass(frozen=True)
class MinimalConstantResult:
    value: float
    argmax_p: float
    argmax_q: float

    def __float__(self) -> float:
        return self.value


def minimal_constant(A: MatrixOperator, sigma: float, p_grid: Sequence[float],
                     q_grid: Sequence[float], samples: int = 32,
                     seed: int = 0, tol: float = 1e-12,
                     max_iter: int = 200) -> MinimalConstantResult:
    """Lower bound of the minimal certificate constant
    ``sup_g sup_{p,q} sigma**(1/p - 1/q) |Ag|_p / |g|_q`` over the grids.

    ``samples`` is the number of random multistarts handed to the inner
    ascent per (q, p) pair; all pairs run as one batched ascent with the
    same start block, which matches per-pair ``op_norm_lower`` calls
    exactly.  Ties resolve toward the lexicographically smallest (p, q).
    """
    sigma = float(sigma)
    if not (sigma > 0.0 and math.isfinite(sigma)):
        raise ValueError("sigma must be a positive finite real")
    p_pts = sorted(as_exponent(p) for p in p_grid)
    q_pts = sorted(as_exponent(qv) for qv in q_grid)
    pairs = [(p, qv) for p in p_pts for qv in q_pts]
    if not A.entries.any():
        return MinimalConstantResult(0.0, p_pts[0], q_pts[0])

    starts = _ascent_starts(A.source.size, samples, seed)
    n_starts = starts.shape[1]
    G = np.tile(starts, len(pairs))
    pc = np.repeat([p for p, _ in pairs], n_starts)
    qc = np.repeat([qv for _, qv in pairs], n_starts)
    best, _ = _ascent_batch(A.entries, A.target.weights, A.source.weights,
                            G, qc, pc, tol, max_iter)
    per_pair = best.reshape(len(pairs), n_starts).max(axis=1)

    best_val = -INFINITY
    best_p = best_q = p_pts[0]
    for (p, qv), norm_val in zip(pairs, per_pair):
        val = sigma ** (inv_exponent(p) - inv_exponent(qv)) * norm_val
        if val > best_val:
            best_val, best_p, best_q = val, p, qv
    return MinimalConstantResult(float(best_val), float(best_p), float(best_q))


# ---------------------------------------------------------------------------
# extrapolation verification engine (shared with the moment-norm module)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtrapolationReport:
    passed: bool
    samples: int
    violations: tuple
    max_lhs_rhs_ratio: float
    cbar: float
    phi_lhs: float
    phi_rhs: float
    sigma: float
    p_points: tuple
    q_points: tuple
    seed: int
    tol: float
    rhs_endpoint_flag: bool = False
    lhs_endpoint_flag: bool = False


def _sup_functional(psi: GeneratingFunction, pts: np.ndarray):
    """Rowwise sup of profile/psi over the grid, plus the matching
    fundamental-function evaluator."""
    psiv = psi.eval_array(pts)

    def norms(profiles: np.ndarray) -> np.ndarray:
        with np.errstate(invalid="ignore"):
            ratios = profiles / psiv[None, :]
        return ratios.max(axis=1)

    def fundamental(delta: float) -> tuple:
        vals = np.power(delta, 1.0 / pts) / psiv
        k = int(np.argmax(vals))
        return float(vals[k]), k == pts.size - 1

    return norms, fundamental


def _verify_extrapolation(A: MatrixOperator, sigma: float,
                          p_pts: np.ndarray, q_pts: np.ndarray,
                          lhs_norms: Callable[[np.ndarray], np.ndarray],
                          rhs_norms: Callable[[np.ndarray], np.ndarray],
                          phi_lhs: float, phi_rhs: float, cbar: float,
                          samples: int, seed: int, tol: float,
                          lhs_flag: bool, rhs_flag: bool) -> ExtrapolationReport:
    if not (phi_lhs > 0.0 and math.isfinite(phi_lhs)):
        raise ValueError(f"degenerate left fundamental value {phi_lhs}")
    if not (phi_rhs > 0.0 and math.isfinite(phi_rhs)):
        raise ValueError(f"degenerate right fundamental value {phi_rhs}")
    rng = np.random.default_rng(seed)
    G = _candidate_functions(A.source.size, samples, rng)
    H = G @ A.entries.T
    L = lhs_norms(_norm_profiles(H, A.target.weights, p_pts)) / phi_lhs
    R = cbar * rhs_norms(_norm_profiles(G, A.source.weights, q_pts)) / phi_rhs

    violations = []
    max_ratio = 0.0
    for i in range(G.shape[0]):
        li, ri = float(L[i]), float(R[i])
        if ri > 0.0:
            ratio = li / ri
            max_ratio = max(max_ratio, ratio)
            if li > ri * (1.0 + tol):
                violations.append({"index": i, "lhs": li, "rhs": ri,
                                   "witness": [float(x) for x in G[i]]})
        elif li > 0.0:
            violations.append({"index": i, "lhs": li, "rhs": ri,
                               "witness": [float(x) for x in G[i]]})
    return ExtrapolationReport(
        passed=not violations,
        samples=int(G.shape[0]),
        violations=tuple(violations),
        max_lhs_rhs_ratio=max_ratio,
        cbar=float(cbar),
        phi_lhs=float(phi_lhs),
        phi_rhs=float(phi_rhs),
        sigma=float(sigma),
        p_points=tuple(float(p) for p in p_pts),
        q_points=tuple(float(qv) for qv in q_pts),
        seed=int(seed),
        tol=float(tol),
        lhs_endpoint_flag=lhs_flag,
        rhs_endpoint_flag=rhs_flag,
    )


def verify_theorem1(A: MatrixOperator, cert: OperatorBoundCertificate,
                    psi: GeneratingFunction, nu_gen: GeneratingFunction,
                    samples: int = 1000, seed: int = 0,
                    p_points: Optional[Sequence[float]] = None,
                    q_points: Optional[Sequence[float]] = None,
                    cbar: Optional[float] = None, restarts: int = 32,
                    grid_points: int = 17, tol: float = 1e-8) -> ExtrapolationReport:
    """Check the grand-norm extrapolation inequality on sampled functions.

    For each sampled g the grand norm of Ag (generating function ``psi``,
    exponent grid inside the certificate's p interval) divided by the
    fundamental value at 1/sigma must not exceed the minimal constant times
    the same quantity for g on the q side.  Raises when a fundamental value
    is degenerate or carries the endpoint-divergence flag (the inequality's
    normalization would then be meaningless).
    """
    if not cert.witnessed:
        raise ValueError("certificate must be witnessed by check_sigma_condition first")
    if psi.domain.as_tuple() != cert.p_interval.as_tuple():
        raise ValueError("psi domain must equal the certificate p interval")
    if nu_gen.domain.as_tuple() != cert.q_interval.as_tuple():
        raise ValueError("nu domain must equal the certificate q interval")

    p_pts = (np.array([as_exponent(p) for p in p_points]) if p_points is not None
             else exponent_grid(cert.p_interval.a, cert.p_interval.b, grid_points))
    q_pts = (np.array([as_exponent(qv) for qv in q_points]) if q_points is not None
             else exponent_grid(cert.q_interval.a, cert.q_interval.b, grid_points))

    lhs_norms, lhs_fund = _sup_functional(psi, p_pts)
    rhs_norms, rhs_fund = _sup_functional(nu_gen, q_pts)
    delta = 1.0 / cert.sigma
    phi_lhs, lhs_flag = lhs_fund(delta)
    phi_rhs, rhs_flag = rhs_fund(delta)
    if (lhs_flag and p_pts.size > 1) or (rhs_flag and q_pts.size > 1):
        raise RuntimeError(
            "fundamental function attained its maximum at the last grid point; "
            "it may diverge toward the interval boundary and the inequality "
            "normalization cannot be trusted"
        )
    if cbar is None:
        cbar = minimal_constant(A, cert.sigma, p_pts, q_pts,
                                samples=restarts, seed=seed).value
    return _verify_extrapolation(A, cert.sigma, p_pts, q_pts, lhs_norms,
                                 rhs_norms, phi_lhs, phi_rhs, cbar, samples,
                                 seed, tol, lhs_flag, rhs_flag)
