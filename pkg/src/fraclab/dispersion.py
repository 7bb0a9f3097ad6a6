"""Dispersion symbols and the evolution operator.

The evolution of a band-limited signal is a unimodular multiplier in
frequency, u_hat(xi, t) = e^{i t Phi(xi)} fhat(xi); fields at space-time
points are direct nonuniform Riemann sums

    u(x, t) = (1/2pi) sum_j e^{i (x xi_j + t Phi(xi_j))} fhat(xi_j) dxi.

Built-in symbols are the power laws Phi(xi) = |xi|^m with m > 1.  General
symbols are accepted only with caller-supplied first and second derivatives;
no numerical differentiation is done here because symbol certification
involves second-derivative ratios.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import ParameterError, ResolutionError
from .spectral import FrequencySignal, sobolev_norm

# A field evaluation refuses to run when the plane-wave phase advance per
# frequency node exceeds this (midpoint rule would be unresolved in x).
MAX_PHASE_PER_NODE = np.pi / 4

# Symbol certification: both second-derivative ratios must stay above this.
SYMBOL_RATIO_FLOOR = 1e-6


class SpaceTimePoint(NamedTuple):
    x: float
    t: float


@dataclass(frozen=True)
class DispersionSymbol:
    """Phase multiplier Phi with first and second derivatives.

    ``m`` is the reference growth exponent: exactly the power for the
    built-in family, and the exponent a general symbol is certified
    against (its second derivative is compared with |xi|^{m-2}).
    """

    kind: str
    m: float
    _phi: Callable[[np.ndarray], np.ndarray] | None = None
    _dphi: Callable[[np.ndarray], np.ndarray] | None = None
    _d2phi: Callable[[np.ndarray], np.ndarray] | None = None

    @staticmethod
    def power(m: float) -> "DispersionSymbol":
        if not np.isfinite(m) or m <= 1:
            raise ParameterError("power symbol requires m > 1")
        return DispersionSymbol("power", float(m))

    @staticmethod
    def from_callables(
        phi: Callable,
        dphi: Callable | None,
        d2phi: Callable | None,
        m: float,
    ) -> "DispersionSymbol":
        if not np.isfinite(m) or m <= 1:
            raise ParameterError("reference exponent m must exceed 1")
        return DispersionSymbol("table", float(m), phi, dphi, d2phi)

    def phase(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        if self.kind == "power":
            return np.abs(xi) ** self.m
        return np.asarray(self._phi(xi), dtype=float)

    def dphase(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        if self.kind == "power":
            return self.m * np.abs(xi) ** (self.m - 1) * np.sign(xi)
        if self._dphi is None:
            raise ParameterError("symbol lacks first derivative data")
        return np.asarray(self._dphi(xi), dtype=float)

    def d2phase(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        if self.kind == "power":
            return self.m * (self.m - 1) * np.abs(xi) ** (self.m - 2)
        if self._d2phi is None:
            raise ParameterError("symbol lacks second derivative data")
        return np.asarray(self._d2phi(xi), dtype=float)


@dataclass(frozen=True)
class SymbolReport:
    passed: bool
    c3_est: float
    c4_est: float


def validate_symbol(sym: DispersionSymbol, xi_samples) -> SymbolReport:
    """Empirical infima of the convexity ratios over |xi| >= 1 samples.

    Ratio one: |xi|^{2-m} |Phi''(xi)|.  Ratio two: |xi| |Phi''| / |Phi'|.
    Passes when both infima stay above SYMBOL_RATIO_FLOOR.
    """
    xi = np.asarray(xi_samples, dtype=float)
    xi = xi[np.abs(xi) >= 1.0]
    if xi.size == 0:
        raise ParameterError("need samples with |xi| >= 1")
    d2 = np.abs(sym.d2phase(xi))
    d1 = np.abs(sym.dphase(xi))
    c3 = float(np.min(np.abs(xi) ** (2 - sym.m) * d2))
    # where Phi' vanishes the second ratio is unconstrained
    with np.errstate(divide="ignore", invalid="ignore"):
        r4 = np.where(d1 > 0, np.abs(xi) * d2 / np.where(d1 > 0, d1, 1.0), np.inf)
    c4 = float(np.min(r4))
    passed = c3 >= SYMBOL_RATIO_FLOOR and c4 >= SYMBOL_RATIO_FLOOR
    return SymbolReport(passed, c3, c4)


def propagate_grid(sig: FrequencySignal, t: float, sym: DispersionSymbol) -> FrequencySignal:
    """Apply the unimodular multiplier e^{i t Phi} node by node."""
    mult = np.exp(1j * t * sym.phase(sig.grid.nodes))
    return FrequencySignal(sig.grid, sig.values * mult, sig.aliasing_warning)


def field_at_points(
    sig: FrequencySignal,
    positions,
    times,
    sym: DispersionSymbol,
    check_resolution: bool = True,
) -> np.ndarray:
    """Vectorised field values u(position_k, time_k); fixed summation order."""
    pos = np.atleast_1d(np.asarray(positions, dtype=float))
    ts = np.atleast_1d(np.asarray(times, dtype=float))
    if ts.size == 1 and pos.size > 1:
        ts = np.full(pos.shape, ts[0])
    if pos.shape != ts.shape:
        raise ParameterError("positions and times must have matching shapes")
    if check_resolution and pos.size:
        worst = float(np.max(np.abs(pos))) * sig.grid.delta
        if worst > MAX_PHASE_PER_NODE:
            raise ResolutionError(
                f"phase advance per node {worst:.3f} exceeds pi/4; refine the grid"
            )
    xi = sig.grid.nodes
    phi = sym.phase(xi)
    weighted = sig.values * (sig.grid.delta / (2 * np.pi))
    out = np.empty(pos.size, dtype=np.complex128)
    flat_p = pos.ravel()
    flat_t = ts.ravel()
    chunk = max(1, int(4e6) // max(xi.size, 1))
    for lo in range(0, flat_p.size, chunk):
        hi = min(lo + chunk, flat_p.size)
        phase = np.outer(flat_p[lo:hi], xi) + np.outer(flat_t[lo:hi], phi)
        out[lo:hi] = np.exp(1j * phase) @ weighted
    return out.reshape(pos.shape)


def evaluate_field(
    sig: FrequencySignal, x: float, t: float, sym: DispersionSymbol
) -> complex:
    """Field value u(x, t) as a deterministic fixed-order sum."""
    if sig.aliasing_warning:
        raise ParameterError("signal is flagged as aliased on its grid")
    return complex(field_at_points(sig, [x], [t], sym)[0])


def unitarity_deviation(sig: FrequencySignal, sym: DispersionSymbol, times) -> float:
    """Max |L2 after propagation - L2 before| over the given times."""
    base = sobolev_norm(sig, 0.0)
    dev = 0.0
    for t in np.atleast_1d(times):
        dev = max(dev, abs(sobolev_norm(propagate_grid(sig, float(t), sym), 0.0) - base))
    return dev
