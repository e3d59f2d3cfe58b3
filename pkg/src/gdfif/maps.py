"""Affine contractions of the graph-directed system, solved in closed form.

Interval i of vertex alpha, wired to source vertex beta with scaling factor
d, gets one planar affine map

    (x, y) -> (a x + e,  c x + d y + f)

that carries the source data set's span onto the target interval: the
source's first point lands on the interval's left knot and its last point on
the right knot. Writing (u0, U0) and (uS, US) for the source's first and
last points and (p, P), (q, Q) for the target interval's knots, those two
endpoint constraints determine the coefficients:

    a = (q - p) / (uS - u0)
    e = (uS p - u0 q) / (uS - u0)
    c = (Q - P) / (uS - u0) - d (US - U0) / (uS - u0)
    f = (uS P - u0 Q) / (uS - u0) - d (uS U0 - u0 US) / (uS - u0)

With a single vertex wired to itself this reduces to the classic fractal
interpolation construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import STRICT_MODE, DataSet, WiringPlan, validate


@dataclass(frozen=True)
class AffineMap:
    """(x, y) -> (a x + e, c x + d y + f) with a lower-triangular linear part."""

    a: float
    c: float
    d: float
    e: float
    f: float
    source_vertex: int
    target_vertex: int
    target_interval: int


def apply_map(m: AffineMap, point) -> tuple[float, float]:
    x, y = point
    return (m.a * x + m.e, m.c * x + m.d * y + m.f)


def transform_points(m: AffineMap, points: np.ndarray) -> np.ndarray:
    """Apply the map to a (k, 2) array of points, returning a new array."""
    x = points[:, 0]
    y = points[:, 1]
    return np.column_stack((m.a * x + m.e, m.c * x + m.d * y + m.f))


@dataclass(frozen=True)
class GifsSystem:
    """Validated data sets, their wiring, and the full family of affine maps.

    `maps[k]` holds vertex k+1's maps in interval order; `r` is the largest
    |d| over the whole plan and is the contraction factor of the transfer
    operator on candidate interpolants.
    """

    datasets: tuple[DataSet, ...]
    plan: WiringPlan
    maps: tuple[tuple[AffineMap, ...], ...]
    r: float

    @property
    def n(self) -> int:
        return len(self.datasets)

    def dataset(self, alpha: int) -> DataSet:
        return self.datasets[alpha - 1]

    def maps_for(self, alpha: int) -> tuple[AffineMap, ...]:
        return self.maps[alpha - 1]


def build_system(datasets, plan: WiringPlan, mode: str = STRICT_MODE) -> GifsSystem:
    """Validate the inputs and construct every affine map in closed form.

    Raises ValueError when validation reports any violation; the message
    carries the first few violation messages. On success the returned
    system's maps satisfy the endpoint constraints to round-off and every
    horizontal coefficient obeys 0 < a < 1.
    """
    report = validate(datasets, plan, mode)
    if not report.ok:
        shown = "; ".join(v.message for v in report.violations[:5])
        more = len(report.violations) - 5
        if more > 0:
            shown += f"; and {more} more"
        raise ValueError(f"invalid construction input ({len(report.violations)} violations): {shown}")

    datasets = tuple(datasets)
    all_maps = []
    for alpha, row in enumerate(plan.assignments, start=1):
        target = datasets[alpha - 1]
        vertex_maps = []
        for i, asg in enumerate(row, start=1):
            source = datasets[asg.source - 1]
            u0, U0 = source.first
            uS, US = source.last
            p, P = target.points[i - 1]
            q, Q = target.points[i]
            du = uS - u0
            a = (q - p) / du
            e = (uS * p - u0 * q) / du
            c = (Q - P) / du - asg.d * (US - U0) / du
            f = (uS * P - u0 * Q) / du - asg.d * (uS * U0 - u0 * US) / du
            vertex_maps.append(AffineMap(
                a=a, c=c, d=asg.d, e=e, f=f,
                source_vertex=asg.source, target_vertex=alpha, target_interval=i,
            ))
        all_maps.append(tuple(vertex_maps))

    r = max(abs(asg.d) for row in plan.assignments for asg in row)
    return GifsSystem(datasets=datasets, plan=plan, maps=tuple(all_maps), r=r)


def endpoint_residuals(system: GifsSystem) -> float:
    """Worst absolute endpoint mismatch over every map in the system.

    Each map must send the source's first point to its target interval's left
    knot and the source's last point to the right knot; the residual is the
    largest coordinate-wise error over all maps and both endpoints. Zero up
    to round-off for any system built by `build_system`.
    """
    worst = 0.0
    for alpha in range(1, system.n + 1):
        target = system.dataset(alpha)
        for m in system.maps_for(alpha):
            source = system.dataset(m.source_vertex)
            for src_pt, want in (
                (source.first, target.points[m.target_interval - 1]),
                (source.last, target.points[m.target_interval]),
            ):
                gx, gy = apply_map(m, src_pt)
                worst = max(worst, abs(gx - want[0]), abs(gy - want[1]))
    return worst
