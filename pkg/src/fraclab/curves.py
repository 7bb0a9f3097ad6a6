"""Curve families gamma(x, t) with gamma(x, 0) = x.

Built-in families are shifts of the identity, gamma(x, t) = x - shift(t),
which is what makes batched field evaluation along a curve cheap (the shift
factors out of the plane-wave phase).  The power family uses the odd
extension shift(t) = sign(t) |t|^kappa so it is defined on all of [-1, 1];
for t >= 0 it reduces to x - t^kappa.

Each family carries certified class constants: c1 bounds the kappa-Holder
time increment, c2 the bilipschitz distortion in x.  For the odd power
shift, |shift(t) - shift(t')| <= 2 |t - t'|^kappa (concavity on each sign,
plus |a|^k + |b|^k <= 2 max^k <= 2 |a - b|^k across signs), so c1 = 2a for
amplitude a; x-increments are exact, so c2 = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class CurveFamily:
    kind: str  # "vertical" | "power" | "shifted_power" | "table"
    kappa: float
    amplitude: float = 1.0
    c1: float = 0.0
    c2: float = 1.0
    table: Callable | None = None

    def __post_init__(self):
        if not 0 < self.kappa <= 1:
            raise ParameterError("kappa must lie in (0, 1]")
        if self.kind == "table" and self.table is None:
            raise ParameterError("table curve needs a callable")

    def time_shift(self, t) -> np.ndarray | None:
        """shift(t) with gamma(x,t) = x - shift(t), or None for table curves."""
        if self.kind == "table":
            return None
        t = np.asarray(t, dtype=float)
        if self.kind == "vertical":
            return np.zeros(t.shape)
        return self.amplitude * np.sign(t) * np.abs(t) ** self.kappa

    def position(self, x, t) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        if self.kind == "table":
            return np.asarray(self.table(x, t), dtype=float)
        return x - self.time_shift(t)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "kappa": self.kappa}
        if self.kind == "shifted_power":
            d["amplitude"] = self.amplitude
        return d


def vertical_curve() -> CurveFamily:
    return CurveFamily("vertical", kappa=1.0, c1=0.0, c2=1.0)


def power_curve(kappa: float) -> CurveFamily:
    return CurveFamily("power", kappa=kappa, c1=2.0, c2=1.0)


def shifted_power_curve(kappa: float, amplitude: float) -> CurveFamily:
    if amplitude < 0:
        raise ParameterError("amplitude must be nonnegative")
    return CurveFamily("shifted_power", kappa=kappa, amplitude=amplitude,
                       c1=2.0 * amplitude, c2=1.0)


def user_curve(fn: Callable, kappa: float, c1: float = np.inf, c2: float = np.inf) -> CurveFamily:
    return CurveFamily("table", kappa=kappa, c1=c1, c2=c2, table=fn)


def curve_eval(curve: CurveFamily, x: float, t: float) -> float:
    """Curve position; times are restricted to [-1, 1]."""
    if not -1.0 <= t <= 1.0:
        raise ParameterError("curve time must lie in [-1, 1]")
    return float(curve.position(x, t))


@dataclass(frozen=True)
class CurveClassReport:
    c1_est: float
    c2_est: float
    passed: bool


def verify_curve_class(
    curve: CurveFamily, sample_count: int = 10_000, seed: int = 0, x_range: float = 2.0
) -> CurveClassReport:
    """Empirical Holder and bilipschitz constants over sampled triples.

    The time scan mixes random pairs with the structured probes (t, -t) and
    (t, 0) that are extremal for odd power shifts, so estimates are stable
    under resampling.
    """
    if sample_count < 1000:
        raise ParameterError("sample_count must be at least 1000")
    rng = np.random.default_rng(seed)

    xs = rng.uniform(-x_range, x_range, sample_count)
    t1 = rng.uniform(-1.0, 1.0, sample_count)
    t2 = rng.uniform(-1.0, 1.0, sample_count)
    # structured extremal probes
    tp = rng.uniform(0.0, 1.0, sample_count // 4)
    t1 = np.concatenate([t1, tp, tp])
    t2 = np.concatenate([t2, -tp, np.zeros(tp.size)])
    xs = np.concatenate([xs, xs[: 2 * (sample_count // 4)]])

    keep = np.abs(t1 - t2) > 1e-14
    g1 = curve.position(xs[keep], t1[keep])
    g2 = curve.position(xs[keep], t2[keep])
    holder = np.abs(g1 - g2) / np.abs(t1[keep] - t2[keep]) ** curve.kappa
    c1_est = float(holder.max()) if holder.size else 0.0

    xa = rng.uniform(-x_range, x_range, sample_count)
    xb = rng.uniform(-x_range, x_range, sample_count)
    tt = rng.uniform(-1.0, 1.0, sample_count)
    keep = np.abs(xa - xb) > 1e-12
    num = np.abs(curve.position(xa[keep], tt[keep]) - curve.position(xb[keep], tt[keep]))
    den = np.abs(xa[keep] - xb[keep])
    ratio = num / den
    if np.any(ratio <= 0):
        return CurveClassReport(c1_est, float("inf"), False)
    c2_est = float(max(ratio.max(), (1.0 / ratio).max()))

    passed = bool(np.isfinite(c1_est) and np.isfinite(c2_est))
    return CurveClassReport(c1_est, c2_est, passed)
