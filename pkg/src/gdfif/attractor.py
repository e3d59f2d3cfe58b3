"""Set-valued attractor iteration, a chaos-game sampler, and Hausdorff metrics.

The family of affine maps determines one compact attractor per vertex, each
the union of map images of the others. Starting the set iteration from the
data points themselves is convenient because every data point already lies
on its attractor (the graphs interpolate the data), so each generation stays
on the attractor exactly and only has to fill it in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .maps import GifsSystem, apply_map, transform_points


class CloudBudgetError(RuntimeError):
    """The next generation would exceed the configured point budget."""


@dataclass(frozen=True, eq=False)
class AttractorCloud:
    """A finite point set approximating one vertex's attractor."""

    vertex: int
    points: np.ndarray
    generation: int

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] == 0:
            raise ValueError("points must be a nonempty (k, 2) array")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]


def data_clouds(system: GifsSystem) -> tuple[AttractorCloud, ...]:
    """Generation-0 clouds: each vertex's data points."""
    return tuple(
        AttractorCloud(alpha, np.array(system.dataset(alpha).points), 0)
        for alpha in range(1, system.n + 1)
    )


def _check_clouds(system: GifsSystem, clouds):
    clouds = tuple(clouds)
    if len(clouds) != system.n:
        raise ValueError(f"expected {system.n} clouds, got {len(clouds)}")
    for k, cloud in enumerate(clouds, start=1):
        if cloud.vertex != k:
            raise ValueError(f"expected vertex {k} at position {k - 1}, got {cloud.vertex}")
    return clouds


def hutchinson_step(system: GifsSystem, clouds) -> tuple[AttractorCloud, ...]:
    """One set-valued step: each vertex becomes the union of its maps' images."""
    clouds = _check_clouds(system, clouds)
    out = []
    for alpha in range(1, system.n + 1):
        parts = [
            transform_points(m, clouds[m.source_vertex - 1].points)
            for m in system.maps_for(alpha)
        ]
        out.append(AttractorCloud(alpha, np.vstack(parts), clouds[alpha - 1].generation + 1))
    return tuple(out)


def _dedup(points: np.ndarray, tol: float) -> np.ndarray:
    """Keep one representative per tol-sized grid cell, in first-seen order.

    Representatives are original points, not cell centers, so deduplication
    never moves a point; it only thins clusters closer than about tol.
    """
    keys = np.round(points / tol).astype(np.int64)
    _, index = np.unique(keys, axis=0, return_index=True)
    return points[np.sort(index)]


def iterate_attractor(
    system: GifsSystem,
    generations: int,
    dedup_tolerance: float,
    max_points: int = 10_000_000,
) -> tuple[AttractorCloud, ...]:
    """Iterate the set-valued step from the data points.

    Clouds are deduplicated on a grid of size `dedup_tolerance` after each
    generation (pass 0 to disable). Before each step the undeduplicated size
    of the next generation is predicted from the wiring; if it exceeds
    `max_points` a CloudBudgetError is raised instead of allocating it.
    """
    if generations < 1:
        raise ValueError("generations must be at least 1")
    clouds = data_clouds(system)
    for _ in range(generations):
        predicted = sum(
            len(clouds[m.source_vertex - 1])
            for alpha in range(1, system.n + 1)
            for m in system.maps_for(alpha)
        )
        if predicted > max_points:
            raise CloudBudgetError(
                f"next generation would hold {predicted} points, cap is {max_points}; "
                f"raise max_points or use a coarser dedup_tolerance"
            )
        clouds = hutchinson_step(system, clouds)
        if dedup_tolerance > 0:
            clouds = tuple(
                AttractorCloud(c.vertex, _dedup(c.points, dedup_tolerance), c.generation)
                for c in clouds
            )
    return clouds


def chaos_game(
    system: GifsSystem,
    total_points: int,
    burn_in: int = 0,
    seed: int = 0,
) -> tuple[AttractorCloud, ...]:
    """Random-walk sampler honoring the wiring direction.

    Keeps one current point per vertex, seeded with the data set's first
    point. Each of the `total_points` steps picks a target vertex and one of
    its maps uniformly, applies the map to the current point of the map's
    source vertex, and makes the image the target's new current point. A
    vertex's first `burn_in` emissions are discarded. Fully deterministic
    for a given seed.
    """
    if burn_in < 0:
        raise ValueError("burn_in must be nonnegative")
    if total_points <= burn_in:
        raise ValueError("total_points must exceed burn_in")
    rng = np.random.default_rng(seed)
    n = system.n
    current = [system.dataset(alpha).first for alpha in range(1, n + 1)]
    kept: list[list[tuple[float, float]]] = [[] for _ in range(n)]
    emitted = [0] * n
    for _ in range(total_points):
        alpha = int(rng.integers(1, n + 1))
        vertex_maps = system.maps_for(alpha)
        m = vertex_maps[int(rng.integers(0, len(vertex_maps)))]
        point = apply_map(m, current[m.source_vertex - 1])
        current[alpha - 1] = point
        emitted[alpha - 1] += 1
        if emitted[alpha - 1] > burn_in:
            kept[alpha - 1].append(point)
    for alpha, pts in enumerate(kept, start=1):
        if not pts:
            raise ValueError(
                f"vertex {alpha} kept no points past burn-in; increase total_points"
            )
    return tuple(
        AttractorCloud(alpha, np.array(pts), total_points)
        for alpha, pts in enumerate(kept, start=1)
    )


def directed_hausdorff(p_points, q_points) -> float:
    """max over p of min over q of the max-norm distance."""
    P = _as_point_array(p_points)
    Q = _as_point_array(q_points)
    dists, _ = cKDTree(Q).query(P, k=1, p=np.inf)
    return float(np.max(dists))


def hausdorff_distance(p_points, q_points) -> float:
    """Symmetric Hausdorff distance between two point sets in the max norm."""
    return max(directed_hausdorff(p_points, q_points), directed_hausdorff(q_points, p_points))


def _as_point_array(points) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] == 0:
        raise ValueError("expected a nonempty (k, 2) array of points")
    return arr
