"""Fractal-dimension-controlled measures on I = [-1, 1] as weighted atoms.

A measure here is a finite atom list with closed-form cell masses, so
L^2(d mu) quadrature has no discretization error beyond atom placement.
The power family atomizes |x|^{alpha-1} dx; its cell masses come from the
exact antiderivative sign(x)|x|^alpha / alpha, which also gives the exact
extremal ball mass mu(B(0, r)) = 2 r^alpha / alpha and total mass 2/alpha.

The dimension certificate (max of ball mass over r^alpha) is only
meaningful above the atomization scale; the scan floor is four times the
smallest atom gap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class FrostmanMeasure:
    alpha: float
    atoms: np.ndarray      # sorted positions in [-1, 1]
    weights: np.ndarray    # positive masses
    total_mass: float
    frostman_c: float      # certified sup of ball_mass / r^alpha

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if atoms.ndim != 1 or atoms.shape != weights.shape:
            raise ParameterError("atoms and weights must be matching 1-d arrays")
        if np.any(np.diff(atoms) < 0):
            raise ParameterError("atoms must be sorted")
        if atoms.size and (atoms[0] < -1 - 1e-12 or atoms[-1] > 1 + 1e-12):
            raise ParameterError("atoms must lie inside [-1, 1]")
        if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
            raise ParameterError("weights must be positive and finite")
        atoms = atoms.copy()
        weights = weights.copy()
        atoms.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "_cum", np.concatenate([[0.0], np.cumsum(weights)]))

    @property
    def atom_count(self) -> int:
        return int(self.atoms.size)

    @property
    def min_gap(self) -> float:
        gaps = np.diff(self.atoms)
        gaps = gaps[gaps > 0]
        return float(gaps.min()) if gaps.size else 2.0


def ball_mass(mu: FrostmanMeasure, x, r) -> np.ndarray | float:
    """Total weight of atoms with |atom - x| <= r.  Vectorised over x and r."""
    x = np.asarray(x, dtype=float)
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ParameterError("ball radius must be positive")
    lo = np.searchsorted(mu.atoms, x - r, side="left")
    hi = np.searchsorted(mu.atoms, x + r, side="right")
    cum = getattr(mu, "_cum")
    out = cum[hi] - cum[lo]
    return float(out) if out.ndim == 0 else out


def frostman_constant(
    mu: FrostmanMeasure, sample_count: int = 4096, r_floor: float | None = None
) -> float:
    """Scan max of ball_mass(x, r) / r^alpha over centers and dyadic radii.

    Centers are the atoms themselves (subsampled to sample_count) plus 0 and
    the endpoints; radii run dyadically from 2 down to sixteen atom gaps.
    A ball of radius r captures whole cells reaching up to half a gap past
    its edge, a relative inflation of order gap/(2r); the floor keeps that
    discretization bias near the percent level.
    """
    if sample_count < 1000:
        raise ParameterError("sample_count must be at least 1000")
    if r_floor is None:
        r_floor = 16.0 * mu.min_gap
    r_floor = max(r_floor, 1e-300)

    if mu.atom_count <= sample_count:
        centers = mu.atoms
    else:
        step = mu.atom_count // sample_count
        centers = mu.atoms[::step]
    centers = np.unique(np.concatenate([centers, [-1.0, 0.0, 1.0]]))

    levels = max(1, int(np.ceil(np.log2(2.0 / r_floor))) + 1)
    best = 0.0
    for j in range(levels):
        r = 2.0 * 0.5**j
        if r < r_floor:
            break
        ratio = ball_mass(mu, centers, r) / r**mu.alpha
        best = max(best, float(ratio.max()))
    return best


def power_measure_from_edges(alpha: float, edges: np.ndarray) -> FrostmanMeasure:
    """Atomize |x|^{alpha-1} dx on the cells given by sorted edge positions."""
    if not 0 < alpha <= 1:
        raise ParameterError("alpha must lie in (0, 1]")
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise ParameterError("edges must be strictly increasing")
    antider = np.sign(edges) * np.abs(edges) ** alpha / alpha
    weights = np.diff(antider)
    atoms = 0.5 * (edges[:-1] + edges[1:])
    total = float(antider[-1] - antider[0])
    mu = FrostmanMeasure(alpha, atoms, weights, total, frostman_c=1.0)
    object.__setattr__(mu, "frostman_c", frostman_constant(mu))
    return mu


def build_power_measure(alpha: float, atom_count: int) -> FrostmanMeasure:
    """Uniform-cell atomization of |x|^{alpha-1} dx on [-1, 1]."""
    if atom_count < 100:
        raise ParameterError("atom_count must be at least 100")
    edges = np.linspace(-1.0, 1.0, atom_count + 1)
    return power_measure_from_edges(alpha, edges)


def build_lebesgue_measure(atom_count: int) -> FrostmanMeasure:
    return build_power_measure(1.0, atom_count)


def build_power_measure_graded(
    alpha: float, depth: int, cells_per_shell: int = 8
) -> FrostmanMeasure:
    """Dyadically graded atomization of |x|^{alpha-1} dx.

    Cells refine geometrically toward the origin: each dyadic shell
    [2^{-k-1}, 2^{-k}], k < depth, carries cells_per_shell uniform cells
    (mirrored), plus one core cell straddling 0.  The innermost scale is
    2^{-depth}, so refining depth shrinks the atomization scale at the
    density peak exponentially fast while atom count grows linearly.
    """
    if depth < 1:
        raise ParameterError("depth must be at least 1")
    if cells_per_shell < 2:
        raise ParameterError("cells_per_shell must be at least 2")
    pos = [np.linspace(2.0 ** -(k + 1), 2.0**-k, cells_per_shell + 1)[:-1]
           for k in range(depth - 1, -1, -1)]
    right = np.concatenate(pos + [[1.0]])
    core = 2.0 ** -depth
    right = right[right >= core]
    edges = np.concatenate([-right[::-1], right])
    return power_measure_from_edges(alpha, edges)


def build_power_measure_windowed(
    alpha: float, atom_count: int, window: float, window_atoms: int = 96
) -> FrostmanMeasure:
    """Uniform atomization plus log-graded refinement of (0, window].

    Guarantees at least window_atoms atoms inside (0, window), which a
    uniform grid cannot do once the window shrinks below its cell size.
    """
    if not 0 < window <= 1:
        raise ParameterError("window must lie in (0, 1]")
    if window_atoms < 16:
        raise ParameterError("window_atoms must be at least 16")
    base = np.linspace(-1.0, 1.0, atom_count + 1)
    fine = np.geomspace(window * 1e-4, window, window_atoms + 1)
    edges = np.unique(np.concatenate([base, fine]))
    return power_measure_from_edges(alpha, edges)


def build_cantor_measure(contraction_ratio: float, depth: int) -> FrostmanMeasure:
    """Self-similar Cantor measure mapped onto [-1, 1], equal atom masses.

    2^depth atoms sit at the midpoints of the generation-``depth`` intervals
    of the two-map iterated function system with the given contraction
    ratio; alpha is the similarity dimension log 2 / log(1/ratio).
    """
    if not 0 < contraction_ratio < 0.5:
        raise ParameterError("contraction ratio must lie in (0, 1/2)")
    if not 0 <= depth <= 30:
        raise ParameterError("depth must lie in [0, 30]")
    r = contraction_ratio
    lefts = np.zeros(1)
    for k in range(depth):
        step = (1.0 - r) * r**k
        lefts = np.concatenate([lefts, lefts + step])
    mids = np.sort(lefts) + 0.5 * r**depth
    atoms = 2.0 * mids - 1.0  # [0,1] -> [-1,1]
    weights = np.full(atoms.size, 2.0**-depth)
    alpha = np.log(2.0) / np.log(1.0 / r)
    mu = FrostmanMeasure(alpha, atoms, weights, 1.0, frostman_c=1.0)
    object.__setattr__(mu, "frostman_c", frostman_constant(mu, sample_count=max(1000, min(4096, atoms.size))))
    return mu


def integrate_l2_mu(values, mu: FrostmanMeasure) -> float:
    """(sum w_i values_i^2)^{1/2} -- the L^2(d mu) norm of atom-aligned data."""
    values = np.asarray(values, dtype=float)
    if values.shape != mu.atoms.shape:
        raise ParameterError("values must align with the measure's atoms")
    return float(np.sqrt(np.sum(mu.weights * values * values)))
