"""Candidate interpolants, the interval-wise transfer operator, and its fixed point.

Candidates live in the space of continuous functions on each data set's
domain that take the prescribed values at the two domain endpoints. They are
represented as densely sampled piecewise-linear functions on a fixed grid
that contains every knot, which makes the sup metric between two samplings
exact: the difference of two piecewise-linear functions is piecewise linear,
so its maximum is attained at a node of the union grid.

The transfer operator rewrites each target interval from its wired source
function: for interval i of vertex alpha with map (a, c, d, e, f) and source
beta, the new value at x in the interval is

    c t + d F_beta(t) + f,   t = (x - e) / a.

The operator is applied by resampling onto the same fixed output grid every
time, so grids never grow across iterations, and it contracts the family sup
metric by the factor r = max |d| < 1. Iterating from the straight-chord
family therefore converges geometrically to the unique fixed family, which
interpolates every knot of every data set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .maps import GifsSystem
from .model import DataSet


class ConvergenceError(RuntimeError):
    """Fixed-point iteration did not reach the requested tolerance."""

    def __init__(self, iterations: int, final_delta: float, tol: float):
        super().__init__(
            f"no convergence after {iterations} iterations: "
            f"last delta {final_delta:.3e} is above tol {tol:.3e}"
        )
        self.iterations = iterations
        self.final_delta = final_delta
        self.tol = tol


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """One vertex's candidate, sampled on a strictly increasing grid.

    Evaluation between nodes is piecewise linear; outside the grid the value
    clamps to the nearest endpoint (only round-off ever lands there).
    """

    vertex: int
    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        grid = np.array(self.grid, dtype=float)
        values = np.array(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise ValueError("grid and values must be 1-d arrays of equal length")
        if grid.size < 2:
            raise ValueError("need at least two samples")
        if not np.all(np.diff(grid) > 0):
            raise ValueError("grid must be strictly increasing")
        grid.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def evaluate(self, x):
        return np.interp(x, self.grid, self.values)

    def as_points(self) -> np.ndarray:
        """Graph samples as a (k, 2) array."""
        return np.column_stack((self.grid, self.values))

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.grid[0]), float(self.grid[-1])


@dataclass(frozen=True, eq=False)
class FunctionFamily:
    """One SampledFunction per vertex, ordered 1..n."""

    functions: tuple[SampledFunction, ...]

    def __post_init__(self):
        fns = tuple(self.functions)
        if not fns:
            raise ValueError("a family needs at least one function")
        for k, fn in enumerate(fns, start=1):
            if fn.vertex != k:
                raise ValueError(f"expected vertex {k} at position {k - 1}, got {fn.vertex}")
        object.__setattr__(self, "functions", fns)

    @property
    def n(self) -> int:
        return len(self.functions)

    def get(self, alpha: int) -> SampledFunction:
        return self.functions[alpha - 1]

    def __iter__(self):
        return iter(self.functions)


def standard_grid(dataset: DataSet, resolution: int) -> np.ndarray:
    """Per-interval grid: `resolution` equally spaced samples per interval.

    Both interval endpoints are included, shared knots once, so the grid has
    n_intervals * (resolution - 1) + 1 nodes and contains every knot exactly.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    xs = dataset.xs
    parts = [np.linspace(xs[i], xs[i + 1], resolution) for i in range(dataset.n_intervals)]
    return np.concatenate([parts[0]] + [p[1:] for p in parts[1:]])


def initial_family(system: GifsSystem, resolution: int) -> FunctionFamily:
    """Straight chords between each data set's endpoint ordinates."""
    fns = []
    for alpha in range(1, system.n + 1):
        ds = system.dataset(alpha)
        grid = standard_grid(ds, resolution)
        values = np.interp(grid, [ds.xs[0], ds.xs[-1]], [ds.fs[0], ds.fs[-1]])
        fns.append(SampledFunction(alpha, grid, values))
    return FunctionFamily(tuple(fns))


def _check_family(system: GifsSystem, family: FunctionFamily):
    if family.n != system.n:
        raise ValueError(f"family covers {family.n} vertices, system has {system.n}")
    for alpha in range(1, system.n + 1):
        fn = family.get(alpha)
        ds = system.dataset(alpha)
        if fn.grid[0] != ds.xs[0] or fn.grid[-1] != ds.xs[-1]:
            raise ValueError(f"function for vertex {alpha} does not span its data set's domain")
        if fn.values[0] != ds.fs[0] or fn.values[-1] != ds.fs[-1]:
            raise ValueError(
                f"function for vertex {alpha} is not pinned to the endpoint ordinates"
            )


def apply_T(system: GifsSystem, family: FunctionFamily, resolution: int) -> FunctionFamily:
    """One application of the transfer operator, resampled on the standard grid.

    Each interval's block is computed from its wired source function via the
    pullback t = (x - e) / a. Both one-sided values at every knot agree with
    the knot ordinate up to round-off (this is asserted), and the knot
    samples are then written exactly, so the result is admissible and
    interpolates all knots from the first application on.
    """
    _check_family(system, family)
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    out = []
    for alpha in range(1, system.n + 1):
        ds = system.dataset(alpha)
        k = ds.n_intervals
        size = k * (resolution - 1) + 1
        grid = np.empty(size)
        values = np.empty(size)
        scale = 1.0 + float(np.max(np.abs(ds.fs)))
        worst_knot_dev = 0.0
        for i, m in enumerate(system.maps_for(alpha), start=1):
            block_x = np.linspace(ds.xs[i - 1], ds.xs[i], resolution)
            t = (block_x - m.e) / m.a
            source_fn = family.get(m.source_vertex)
            block_v = m.c * t + m.d * source_fn.evaluate(t) + m.f
            worst_knot_dev = max(
                worst_knot_dev,
                abs(block_v[0] - ds.fs[i - 1]),
                abs(block_v[-1] - ds.fs[i]),
            )
            lo = (i - 1) * (resolution - 1)
            grid[lo:lo + resolution] = block_x
            values[lo:lo + resolution] = block_v
        assert worst_knot_dev <= 1e-6 * scale, (
            f"one-sided knot values for vertex {alpha} deviate by {worst_knot_dev:.3e}"
        )
        knot_pos = np.arange(k + 1) * (resolution - 1)
        values[knot_pos] = ds.fs
        out.append(SampledFunction(alpha, grid, values))
    return FunctionFamily(tuple(out))


def sup_distance(u: SampledFunction, v: SampledFunction) -> float:
    """Exact sup distance between two piecewise-linear samplings.

    The grids may differ; the maximum of |u - v| is attained at a node of
    the union grid because the difference is piecewise linear there.
    """
    if u.vertex != v.vertex:
        raise ValueError(f"vertex mismatch: {u.vertex} vs {v.vertex}")
    union = np.union1d(u.grid, v.grid)
    return float(np.max(np.abs(u.evaluate(union) - v.evaluate(union))))


def family_distance(a: FunctionFamily, b: FunctionFamily) -> float:
    """Largest per-vertex sup distance."""
    if a.n != b.n:
        raise ValueError(f"family size mismatch: {a.n} vs {b.n}")
    return max(sup_distance(u, v) for u, v in zip(a, b))


@dataclass(frozen=True, eq=False)
class FixedPointResult:
    """Converged family plus the iteration record.

    `error_bound` is the a-priori distance to the true fixed family implied
    by the last step: final_delta * r / (1 - r).
    """

    family: FunctionFamily
    iterations: int
    final_delta: float
    error_bound: float
    deltas: tuple[float, ...]


def fixed_point(
    system: GifsSystem,
    resolution: int = 64,
    tol: float = 1e-9,
    max_iters: int = 200,
) -> FixedPointResult:
    """Iterate the transfer operator from the chord family until it settles.

    Successive iterates share the same grids, so each delta is an exact sup
    distance and shrinks at least by the factor r per step. Stops once a
    delta drops to `tol`; raises ConvergenceError (carrying the iteration
    count and last delta) if `max_iters` steps are not enough.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    current = initial_family(system, resolution)
    deltas: list[float] = []
    for iteration in range(1, max_iters + 1):
        nxt = apply_T(system, current, resolution)
        delta = family_distance(nxt, current)
        deltas.append(delta)
        current = nxt
        if delta <= tol:
            bound = delta * system.r / (1.0 - system.r)
            return FixedPointResult(
                family=current,
                iterations=iteration,
                final_delta=delta,
                error_bound=bound,
                deltas=tuple(deltas),
            )
    raise ConvergenceError(max_iters, deltas[-1], tol)


def interpolation_residual(system: GifsSystem, family: FunctionFamily) -> float:
    """Largest |family(x_j) - F_j| over every knot of every data set."""
    worst = 0.0
    for alpha in range(1, system.n + 1):
        ds = system.dataset(alpha)
        fn = family.get(alpha)
        worst = max(worst, float(np.max(np.abs(fn.evaluate(ds.xs) - ds.fs))))
    return worst


def evaluate_exact(system: GifsSystem, alpha: int, x: float, depth: int) -> float:
    """Pointwise value by recursive pullback, with no sampling grid at all.

    Follows the interval containing x back through its wired source `depth`
    times and bottoms out on the straight chord, which reproduces the value
    of the depth-fold operator power applied to the chord family. The error
    against the true interpolant is at most r**depth times the chord
    family's distance to it. A knot belongs to the interval it closes (x at
    the left domain endpoint belongs to interval 1), so knots evaluate to
    their data ordinates at every depth.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    ds = system.dataset(alpha)
    x = float(x)
    if not ds.xs[0] <= x <= ds.xs[-1]:
        raise ValueError(
            f"x = {x:g} is outside [{ds.xs[0]:g}, {ds.xs[-1]:g}] for vertex {alpha}"
        )
    return _evaluate_rec(system, alpha, x, depth)


def _chord_value(ds: DataSet, x: float) -> float:
    (x0, F0), (xN, FN) = ds.first, ds.last
    return F0 + (x - x0) * (FN - F0) / (xN - x0)


def _evaluate_rec(system: GifsSystem, alpha: int, x: float, depth: int) -> float:
    ds = system.dataset(alpha)
    if depth == 0:
        return _chord_value(ds, x)
    i = max(1, int(np.searchsorted(ds.xs, x, side="left")))
    m = system.maps_for(alpha)[i - 1]
    source = system.dataset(m.source_vertex)
    t = (x - m.e) / m.a
    # round-off can push the pullback a few ulp past the source domain
    t = min(max(t, source.xs[0]), source.xs[-1])
    return m.c * t + m.d * _evaluate_rec(system, m.source_vertex, t, depth - 1) + m.f
