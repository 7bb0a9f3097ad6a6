"""Frequency grids, band-limited signals, Sobolev norms and bump profiles.

Conventions used throughout the package:

* forward transform    fhat(xi) = int e^{-i x xi} f(x) dx
* inverse transform    f(x)     = (1/2pi) int e^{+i x xi} fhat(xi) dxi
* Sobolev norm         ||f||_{H^s} = ((1/2pi) int (1+xi^2)^s |fhat|^2 dxi)^{1/2}

All integrals are midpoint Riemann sums on uniform grids.  Frequency grids
sample at cell midpoints, so xi = 0 is never a node; symbols like |xi|^m
with m < 2 then have finite second derivatives at every node.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError

# Relative magnitude at the grid edge above which a transform result is
# flagged as aliased (support not captured by the grid).
ALIASING_EDGE_TOL = 1e-8


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform midpoint grid on [xi_min, xi_max] with n cells."""

    xi_min: float
    xi_max: float
    n: int

    def __post_init__(self):
        if not np.isfinite(self.xi_min) or not np.isfinite(self.xi_max):
            raise ParameterError("grid endpoints must be finite")
        if not self.xi_min < self.xi_max:
            raise ParameterError("grid requires xi_min < xi_max")
        if self.n < 2:
            raise ParameterError("grid requires at least 2 samples")

    @property
    def delta(self) -> float:
        return (self.xi_max - self.xi_min) / self.n

    @property
    def nodes(self) -> np.ndarray:
        j = np.arange(self.n)
        return self.xi_min + (j + 0.5) * self.delta

    def to_dict(self) -> dict:
        return {"xi_min": self.xi_min, "xi_max": self.xi_max, "n": self.n}


@dataclass(frozen=True)
class FrequencySignal:
    """Samples of fhat on a FrequencyGrid.  Immutable after construction."""

    grid: FrequencyGrid
    values: np.ndarray
    aliasing_warning: bool = False

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != (self.grid.n,):
            raise ParameterError(
                f"signal length {vals.shape} does not match grid n={self.grid.n}"
            )
        if not np.all(np.isfinite(vals.view(np.float64))):
            raise ParameterError("signal values must be finite")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def scaled(self, a: complex) -> "FrequencySignal":
        return FrequencySignal(self.grid, a * self.values, self.aliasing_warning)


def forward_transform(x: np.ndarray, f: np.ndarray, target: FrequencyGrid) -> FrequencySignal:
    """Riemann-sum forward transform of spatial samples onto a frequency grid.

    ``x`` must be uniformly spaced and cover the numerical support of ``f``.
    The result carries an aliasing flag when |fhat| at the grid edge exceeds
    ALIASING_EDGE_TOL times its maximum.
    """
    x = np.asarray(x, dtype=float)
    f = np.asarray(f, dtype=np.complex128)
    if x.ndim != 1 or x.size < 2 or f.shape != x.shape:
        raise ParameterError("x and f must be 1-d arrays of equal length >= 2")
    dx = np.diff(x)
    step = dx[0]
    if step <= 0 or np.any(np.abs(dx - step) > 1e-12 * abs(step)):
        raise ParameterError("spatial grid must be uniform and increasing")

    xi = target.nodes
    weighted = f * step
    out = np.empty(target.n, dtype=np.complex128)
    # chunk over frequency nodes to bound the phase-matrix size
    chunk = max(1, int(4e6) // max(x.size, 1))
    for lo in range(0, target.n, chunk):
        hi = min(lo + chunk, target.n)
        out[lo:hi] = np.exp(-1j * np.outer(xi[lo:hi], x)) @ weighted

    mags = np.abs(out)
    peak = mags.max()
    aliased = bool(peak > 0 and max(mags[0], mags[-1]) > ALIASING_EDGE_TOL * peak)
    return FrequencySignal(target, out, aliasing_warning=aliased)


def inverse_transform(sig: FrequencySignal, x: np.ndarray) -> np.ndarray:
    """Evaluate f(x) = (1/2pi) sum e^{i x xi} fhat(xi) dxi at the given points."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    xi = sig.grid.nodes
    weighted = sig.values * (sig.grid.delta / (2 * np.pi))
    out = np.empty(x.size, dtype=np.complex128)
    chunk = max(1, int(4e6) // max(xi.size, 1))
    for lo in range(0, x.size, chunk):
        hi = min(lo + chunk, x.size)
        out[lo:hi] = np.exp(1j * np.outer(x[lo:hi], xi)) @ weighted
    return out


def sobolev_norm(sig: FrequencySignal, s: float = 0.0) -> float:
    """H^s norm of the signal; s = 0 gives the Plancherel L^2 norm."""
    if not np.isfinite(s):
        raise ParameterError("Sobolev exponent must be finite")
    xi = sig.grid.nodes
    density = (1.0 + xi * xi) ** s * np.abs(sig.values) ** 2
    return float(np.sqrt(density.sum() * sig.grid.delta / (2 * np.pi)))


def _mollifier(u: np.ndarray) -> np.ndarray:
    # exp(1 - 1/(1-u^2)) inside (-1, 1), identically zero outside
    u = np.asarray(u, dtype=float)
    out = np.zeros(u.shape, dtype=float)
    inside = np.abs(u) < 1.0
    w = 1.0 - u[inside] ** 2
    out[inside] = np.exp(1.0 - 1.0 / w)
    return out


@dataclass(frozen=True)
class BumpProfile:
    """Smooth compactly supported profile: origin bump or annular cutoff.

    kind="origin": even, psi(0) = 1, support [-delta, delta].
    kind="annular": even, nonnegative, support (-2, -1/2) u (1/2, 2).
    """

    kind: str
    delta: float = 0.1

    def __post_init__(self):
        if self.kind not in ("origin", "annular"):
            raise ParameterError(f"unknown bump kind {self.kind!r}")
        if self.kind == "origin" and not 0 < self.delta <= 1:
            raise ParameterError("origin bump needs support radius in (0, 1]")

    @property
    def support(self) -> tuple[tuple[float, float], ...]:
        if self.kind == "origin":
            return ((-self.delta, self.delta),)
        return ((-2.0, -0.5), (0.5, 2.0))

    def __call__(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        if self.kind == "origin":
            return _mollifier(xi / self.delta)
        # annular: mollifier in |xi| rescaled onto (1/2, 2)
        return _mollifier((np.abs(xi) - 1.25) / 0.75)

    def support_nodes(self, n: int = 1 << 14) -> tuple[np.ndarray, float]:
        """Midpoint nodes covering the support, n cells per interval."""
        pieces = []
        for a, b in self.support:
            step = (b - a) / n
            pieces.append(a + (np.arange(n) + 0.5) * step)
        return np.concatenate(pieces), step

    def integral(self, n: int = 1 << 14) -> float:
        nodes, step = self.support_nodes(n)
        return float(self(nodes).sum() * step)

    def l2_squared(self, n: int = 1 << 14) -> float:
        nodes, step = self.support_nodes(n)
        return float((self(nodes) ** 2).sum() * step)


def origin_bump(delta: float = 0.1) -> BumpProfile:
    return BumpProfile("origin", delta)


def annular_bump() -> BumpProfile:
    return BumpProfile("annular")


def gaussian_signal(grid: FrequencyGrid | None = None) -> FrequencySignal:
    """fhat of f(x) = exp(-x^2/2), i.e. sqrt(2pi) exp(-xi^2/2)."""
    if grid is None:
        grid = FrequencyGrid(-9.0, 9.0, 2048)
    xi = grid.nodes
    return FrequencySignal(grid, np.sqrt(2 * np.pi) * np.exp(-xi * xi / 2))


def save_signal(sig: FrequencySignal, path) -> None:
    payload = {
        "grid": sig.grid.to_dict(),
        "values": [[float(v.real), float(v.imag)] for v in sig.values],
        "aliasing_warning": sig.aliasing_warning,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)


def load_signal(path) -> FrequencySignal:
    with open(path) as fh:
        payload = json.load(fh)
    g = payload["grid"]
    grid = FrequencyGrid(float(g["xi_min"]), float(g["xi_max"]), int(g["n"]))
    vals = np.array([complex(re, im) for re, im in payload["values"]])
    return FrequencySignal(grid, vals, bool(payload.get("aliasing_warning", False)))
