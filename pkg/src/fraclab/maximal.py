"""Curve-restricted maximal functions and scaling experiments.

The maximal profile takes, per measure atom x_i, the sup over a time grid
of |u(gamma(x_i, t), t)| followed by a golden-section polish around the
discrete argmax.  For the built-in curve families gamma(x, t) = x - shift(t),
so the time scan factors into one complex matrix product

    field[i, k] = sum_j exp(i x_i xi_j) * [exp(i(t_k Phi_j - shift(t_k) xi_j)) v_j]

which is what keeps lambda sweeps affordable; table curves fall back to a
per-time direct sum.  Sums are fixed-order, so profiles are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import CurveFamily
from .dispersion import DispersionSymbol, field_at_points, MAX_PHASE_PER_NODE
from .errors import ParameterError, ResolutionError
from .measures import FrostmanMeasure, integrate_l2_mu
from .spectral import FrequencyGrid, FrequencySignal, sobolev_norm, _mollifier


@dataclass(frozen=True)
class TimeGrid:
    t_min: float = 0.0
    t_max: float = 1.0
    n_t: int = 2048
    refinement_level: int = 0

    def __post_init__(self):
        if not -1.0 <= self.t_min < self.t_max <= 1.0:
            raise ParameterError("time grid must satisfy -1 <= t_min < t_max <= 1")
        if self.n_t < 2:
            raise ParameterError("time grid needs at least 2 nodes")

    def nodes(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.n_t)

    def refined(self) -> "TimeGrid":
        # doubling keeps the old nodes as a subset
        return TimeGrid(self.t_min, self.t_max, 2 * self.n_t - 1, self.refinement_level + 1)


def experiment_time_nodes(
    lam: float, n_uniform: int = 2048, n_geom: int = 256,
    t_max: float = 1.0, geom_floor: float = 1e-6,
) -> np.ndarray:
    """Uniform nodes on [0, t_max] plus a geometric subgrid of (0, 1/lambda].

    Uniform grids miss features living at times of order 1/lambda once
    lambda is large; the geometric tail keeps those windows sampled.
    """
    uniform = np.linspace(0.0, t_max, n_uniform)
    head = min(1.0 / lam, t_max)
    geom = np.geomspace(head * geom_floor, head, n_geom)
    return np.unique(np.concatenate([uniform, geom]))


@dataclass(frozen=True)
class MaximalProfile:
    measure: FrostmanMeasure
    sup_values: np.ndarray
    argmax_t: np.ndarray

    def l2_norm(self) -> float:
        return integrate_l2_mu(self.sup_values, self.measure)


_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0
_INVPHI2 = (3.0 - np.sqrt(5.0)) / 2.0


def _polish_suprema(sig, curve, sym, atoms, t_lo, t_hi, best_val, best_t, iters):
    """Vectorised golden-section ascent of |field| per atom on [t_lo, t_hi]."""
    a = t_lo.copy()
    b = t_hi.copy()
    c = a + _INVPHI2 * (b - a)
    d = a + _INVPHI * (b - a)

    def probe(ts):
        pos = curve.position(atoms, ts)
        return np.abs(field_at_points(sig, pos, ts, sym, check_resolution=False))

    def record(ts, fs, best_val, best_t):
        better = fs > best_val
        return np.where(better, fs, best_val), np.where(better, ts, best_t)

    fc = probe(c)
    fd = probe(d)
    best_val, best_t = record(c, fc, best_val, best_t)
    best_val, best_t = record(d, fd, best_val, best_t)
    for _ in range(iters):
        c_old, d_old, fc_old, fd_old = c, d, fc, fd
        left = fc_old > fd_old
        b = np.where(left, d_old, b)
        a = np.where(left, a, c_old)
        probe_t = np.where(left, b - _INVPHI * (b - a), a + _INVPHI * (b - a))
        probe_f = probe(probe_t)
        c = np.where(left, probe_t, d_old)
        fc = np.where(left, probe_f, fd_old)
        d = np.where(left, c_old, probe_t)
        fd = np.where(left, fc_old, probe_f)
        best_val, best_t = record(probe_t, probe_f, best_val, best_t)
    return best_val, best_t


def maximal_function(
    sig: FrequencySignal,
    curve: CurveFamily,
    sym: DispersionSymbol,
    times,
    mu: FrostmanMeasure,
    polish_iters: int = 20,
    t_chunk: int = 512,
) -> MaximalProfile:
    """Per-atom sup over the time nodes of |u(gamma(x, t), t)|, then polish."""
    if isinstance(times, TimeGrid):
        times = times.nodes()
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 2:
        raise ParameterError("need at least two time nodes")
    if times.min() < -1.0 or times.max() > 1.0:
        raise ParameterError("time nodes must lie in [-1, 1]")

    atoms = mu.atoms
    xi = sig.grid.nodes
    phi = sym.phase(xi)
    v = sig.values * (sig.grid.delta / (2 * np.pi))

    shift = curve.time_shift(times)
    if shift is not None:
        reach = float(np.max(np.abs(atoms))) + float(np.max(np.abs(shift)))
        if reach * sig.grid.delta > MAX_PHASE_PER_NODE:
            raise ResolutionError("curve positions outrun the frequency resolution")
        plane = np.exp(1j * np.outer(atoms, xi))
        best_val = np.zeros(atoms.size)
        best_idx = np.zeros(atoms.size, dtype=np.intp)
        for lo in range(0, times.size, t_chunk):
            hi = min(lo + t_chunk, times.size)
            tw = np.exp(1j * (np.outer(phi, times[lo:hi]) - np.outer(xi, shift[lo:hi])))
            tw *= v[:, None]
            block = np.abs(plane @ tw)
            idx = np.argmax(block, axis=1)
            val = block[np.arange(atoms.size), idx]
            better = val > best_val
            best_val = np.where(better, val, best_val)
            best_idx = np.where(better, idx + lo, best_idx)
    else:
        best_val = np.zeros(atoms.size)
        best_idx = np.zeros(atoms.size, dtype=np.intp)
        for k, t in enumerate(times):
            pos = curve.position(atoms, np.full(atoms.shape, t))
            if float(np.max(np.abs(pos))) * sig.grid.delta > MAX_PHASE_PER_NODE:
                raise ResolutionError("curve positions outrun the frequency resolution")
            val = np.abs(field_at_points(sig, pos, np.full(atoms.shape, t), sym,
                                         check_resolution=False))
            better = val > best_val
            best_val = np.where(better, val, best_val)
            best_idx = np.where(better, k, best_idx)

    best_t = times[best_idx]
    if polish_iters > 0:
        lo_idx = np.maximum(best_idx - 1, 0)
        hi_idx = np.minimum(best_idx + 1, times.size - 1)
        best_val, best_t = _polish_suprema(
            sig, curve, sym, atoms, times[lo_idx], times[hi_idx],
            best_val, best_t, polish_iters,
        )
    return MaximalProfile(mu, best_val, best_t)


def maximal_ratio(
    sig: FrequencySignal,
    curve: CurveFamily,
    sym: DispersionSymbol,
    times,
    mu: FrostmanMeasure,
    s: float = 0.0,
    polish_iters: int = 20,
) -> float:
    """L^2(d mu) norm of the maximal profile over the H^s norm of the data."""
    denom = sobolev_norm(sig, s)
    if denom == 0.0:
        raise ParameterError("maximal ratio is undefined for the zero signal")
    profile = maximal_function(sig, curve, sym, times, mu, polish_iters=polish_iters)
    return profile.l2_norm() / denom


@dataclass(frozen=True)
class ScalingFit:
    lambdas: np.ndarray
    values: np.ndarray
    slope: float
    intercept: float
    max_residual: float


def scaling_regression(lambdas, values) -> ScalingFit:
    """Least-squares line through (log lambda, log value); slope = exponent."""
    lam = np.asarray(lambdas, dtype=float)
    val = np.asarray(values, dtype=float)
    if lam.size < 4:
        raise ParameterError("need at least 4 sweep points")
    if np.any(np.diff(lam) <= 0):
        raise ParameterError("lambdas must be strictly increasing")
    if np.any(val <= 0):
        raise ParameterError("regression requires positive values")
    ll = np.log(lam)
    lv = np.log(val)
    slope, intercept = np.polyfit(ll, lv, 1)
    resid = np.max(np.abs(lv - (slope * ll + intercept)))
    return ScalingFit(lam, val, float(slope), float(intercept), float(resid))


@dataclass(frozen=True)
class HlsResult:
    lhs: float
    rhs: float
    ratio: float


def hls_check(
    g, h, rho: float, mu: FrostmanMeasure,
    enforce_hypothesis: bool = True, block: int = 4096,
) -> HlsResult:
    """Discrete bilinear Riesz-type form against the product of L^2(d mu) norms.

    lhs = sum_{i != i'} g_i h_{i'} |x_i - x_{i'}|^{-rho} w_i w_{i'} and
    rhs = ||g||_{L^2(d mu)} ||h||_{L^2(d mu)}.  The form is uniformly bounded
    only for rho < alpha; pass enforce_hypothesis=False to probe beyond that
    deliberately.
    """
    if not 0 < rho:
        raise ParameterError("rho must be positive")
    if enforce_hypothesis and rho >= mu.alpha:
        raise ParameterError(
            f"rho={rho} violates rho < alpha={mu.alpha}; "
            "pass enforce_hypothesis=False to probe the unbounded regime"
        )
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    if g.shape != mu.atoms.shape or h.shape != mu.atoms.shape:
        raise ParameterError("g and h must align with the measure's atoms")
    if np.any(g < 0) or np.any(h < 0):
        raise ParameterError("g and h must be nonnegative")

    ig = np.flatnonzero(g)
    ih = np.flatnonzero(h)
    a = g[ig] * mu.weights[ig]
    b = h[ih] * mu.weights[ih]
    xg = mu.atoms[ig]
    xh = mu.atoms[ih]

    lhs = 0.0
    for lo in range(0, ig.size, block):
        hi = min(lo + block, ig.size)
        dist = np.abs(xg[lo:hi, None] - xh[None, :])
        same = ig[lo:hi, None] == ih[None, :]
        kern = np.where(same, 0.0, np.where(dist > 0, dist, 1.0) ** -rho)
        # distinct atoms at equal positions would make the kernel infinite
        coincident = (~same) & (dist == 0)
        if np.any(coincident):
            raise ParameterError("distinct atoms share a position; kernel is singular")
        lhs += float(a[lo:hi] @ kern @ b)

    rhs = integrate_l2_mu(g, mu) * integrate_l2_mu(h, mu)
    ratio = lhs / rhs if rhs > 0 else 0.0
    return HlsResult(lhs, rhs, ratio)


def random_band_signal(
    lam: float, seed: int = 0, delta_xi: float = np.pi / 16
) -> FrequencySignal:
    """Random data with frequency support in the band [lambda/2, 2 lambda].

    Independent complex Gaussians per node under a smooth envelope vanishing
    at the band edges.
    """
    if lam < 2:
        raise ParameterError("band experiments need lambda >= 2")
    n = int(np.ceil(1.5 * lam / delta_xi))
    grid = FrequencyGrid(lam / 2, 2 * lam, n)
    xi = grid.nodes
    envelope = _mollifier((xi - 1.25 * lam) / (0.75 * lam))
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return FrequencySignal(grid, envelope * noise / np.sqrt(2.0))


def band_scaling_experiment(
    m: float,
    kappa: float,
    alpha: float,
    lambdas,
    mu: FrostmanMeasure,
    s: float = 0.0,
    seed: int = 0,
    curve: CurveFamily | None = None,
    n_uniform: int = 2048,
    n_geom: int = 256,
) -> dict:
    """Maximal-ratio sweep over dyadic bands; returns rows and the log-log fit."""
    from .curves import power_curve
    from .kernels import band_gain_exponent

    if curve is None:
        curve = power_curve(kappa)
    sym = DispersionSymbol.power(m)
    lambdas = np.asarray(lambdas, dtype=float)
    rows = []
    for k, lam in enumerate(lambdas):
        sig = random_band_signal(lam, seed=seed + k)
        times = experiment_time_nodes(lam, n_uniform=n_uniform, n_geom=n_geom)
        ratio = maximal_ratio(sig, curve, sym, times, mu, s=s)
        rows.append({"lambda": float(lam), "ratio": ratio})
    fit = scaling_regression(lambdas, [r["ratio"] for r in rows])
    gain = band_gain_exponent(m, alpha, kappa)
    return {
        "rows": rows,
        "fit": fit,
        "gain_exponent": gain,
        "predicted_slope_bound": 0.5 - gain,
    }
