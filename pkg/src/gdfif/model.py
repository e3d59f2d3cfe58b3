"""Data sets and directed-graph wiring for graph-directed fractal interpolation.

A construction starts from n planar data sets and a wiring plan that gives
every interval of every data set a source vertex and a vertical scaling
factor. Everything here is immutable, and `validate` collects every
violation into a report instead of raising on the first one, so a caller
can show all problems at once. Only structurally malformed input (vertex
count mismatch, unknown mode) raises.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

STRICT_MODE = "paper-strict"
USED_EDGES_MODE = "used-edges-only"
CONDITION3_MODES = (STRICT_MODE, USED_EDGES_MODE)


@dataclass(frozen=True)
class DataSet:
    """Ordered interpolation points (x_j, F_j) for one vertex.

    Downstream construction needs at least 3 points with strictly increasing
    abscissas. Those rules are checked by `validate`, not by the constructor,
    so that suspect input can still be loaded and diagnosed.
    """

    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple((float(x), float(F)) for x, F in self.points)
        if not pts:
            raise ValueError("a data set needs at least one point")
        object.__setattr__(self, "points", pts)

    @cached_property
    def xs(self) -> np.ndarray:
        arr = np.array([p[0] for p in self.points], dtype=float)
        arr.setflags(write=False)
        return arr

    @cached_property
    def fs(self) -> np.ndarray:
        arr = np.array([p[1] for p in self.points], dtype=float)
        arr.setflags(write=False)
        return arr

    @property
    def n_intervals(self) -> int:
        return len(self.points) - 1

    @property
    def span(self) -> float:
        return self.points[-1][0] - self.points[0][0]

    @property
    def first(self) -> tuple[float, float]:
        return self.points[0]

    @property
    def last(self) -> tuple[float, float]:
        return self.points[-1]


@dataclass(frozen=True)
class IntervalAssignment:
    """One interval's source vertex (1-based) and vertical scaling factor."""

    source: int
    d: float


@dataclass(frozen=True)
class WiringPlan:
    """Ordered interval assignments per vertex; encodes the directed graph.

    `assignments[k]` holds the assignments for vertex k+1, one per interval,
    in interval order. Vertex indices are 1-based throughout the public API.
    """

    assignments: tuple[tuple[IntervalAssignment, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.assignments)
        if not rows:
            raise ValueError("a wiring plan needs at least one vertex")
        for row in rows:
            for asg in row:
                if not isinstance(asg, IntervalAssignment):
                    raise TypeError(f"expected IntervalAssignment, got {type(asg).__name__}")
        object.__setattr__(self, "assignments", rows)

    @property
    def n(self) -> int:
        return len(self.assignments)

    def for_vertex(self, alpha: int) -> tuple[IntervalAssignment, ...]:
        return self.assignments[alpha - 1]

    @classmethod
    def from_pairs(cls, per_vertex) -> "WiringPlan":
        """Build a plan from [[(source, d), ...], ...], one inner list per vertex."""
        return cls(tuple(
            tuple(IntervalAssignment(int(s), float(d)) for s, d in row)
            for row in per_vertex
        ))


@dataclass(frozen=True)
class Violation:
    """One failed check: a stable code, a human message, and the indices involved.

    Codes in use: points/count, points/finite, points/order, wiring/source,
    wiring/factor, wiring/length, data/width-ratio. For data/width-ratio the
    indices are (span_vertex, width_vertex, interval).
    """

    code: str
    message: str
    indices: tuple[int, ...]


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...]
    strongly_connected: bool
    condition3_mode: str

    def codes(self) -> tuple[str, ...]:
        return tuple(v.code for v in self.violations)


def validate(datasets, plan: WiringPlan, mode: str = STRICT_MODE) -> ValidationReport:
    """Check every hypothesis the construction needs; report, don't raise.

    Checks per data set: point count >= 3, finite coordinates, strictly
    increasing abscissas. Checks per assignment: source in range, |d| < 1,
    assignment count equal to the interval count. Cross-data-set check: every
    interval must be narrower than the span of every other data set (strict
    mode) or of each data set it exchanges values with (used-edges mode,
    where only wired source/target pairs are held to the rule). Strong
    connectivity of the induced digraph is reported as information, not as a
    violation.

    Raises ValueError only for structural errors: empty input, unknown mode,
    or a vertex-count mismatch between `datasets` and `plan`.
    """
    if mode not in CONDITION3_MODES:
        raise ValueError(f"unknown width-condition mode {mode!r}, expected one of {CONDITION3_MODES}")
    datasets = tuple(datasets)
    if not datasets:
        raise ValueError("no data sets given")
    if plan.n != len(datasets):
        raise ValueError(
            f"wiring plan covers {plan.n} vertices but {len(datasets)} data sets were given"
        )

    n = plan.n
    violations: list[Violation] = []

    for alpha, ds in enumerate(datasets, start=1):
        if len(ds.points) < 3:
            violations.append(Violation(
                "points/count",
                f"data set {alpha} has {len(ds.points)} points, need at least 3",
                (alpha,),
            ))
        for j, (x, F) in enumerate(ds.points):
            if not (math.isfinite(x) and math.isfinite(F)):
                violations.append(Violation(
                    "points/finite",
                    f"point {j} of data set {alpha} has a non-finite coordinate",
                    (alpha, j),
                ))
        for j in range(1, len(ds.points)):
            if not ds.points[j][0] > ds.points[j - 1][0]:
                violations.append(Violation(
                    "points/order",
                    f"abscissas of data set {alpha} are not strictly increasing at index {j}",
                    (alpha, j),
                ))

    for alpha, row in enumerate(plan.assignments, start=1):
        ds = datasets[alpha - 1]
        if len(row) != ds.n_intervals:
            violations.append(Violation(
                "wiring/length",
                f"vertex {alpha} has {len(row)} interval assignments "
                f"for {ds.n_intervals} intervals",
                (alpha,),
            ))
        for i, asg in enumerate(row, start=1):
            if not 1 <= asg.source <= n:
                violations.append(Violation(
                    "wiring/source",
                    f"interval {i} of vertex {alpha} names source vertex {asg.source}, "
                    f"valid range is 1..{n}",
                    (alpha, i),
                ))
            if not (math.isfinite(asg.d) and abs(asg.d) < 1.0):
                violations.append(Violation(
                    "wiring/factor",
                    f"interval {i} of vertex {alpha} has |d| = {abs(asg.d):g}, must be < 1",
                    (alpha, i),
                ))

    for span_vertex, width_vertex in sorted(_width_condition_pairs(plan, mode)):
        src = datasets[span_vertex - 1]
        tgt = datasets[width_vertex - 1]
        for j in range(1, len(tgt.points)):
            width = tgt.points[j][0] - tgt.points[j - 1][0]
            if not width < src.span:
                violations.append(Violation(
                    "data/width-ratio",
                    f"interval {j} of data set {width_vertex} (width {width:g}) must be "
                    f"narrower than the span of data set {span_vertex} ({src.span:g})",
                    (span_vertex, width_vertex, j),
                ))

    return ValidationReport(
        ok=not violations,
        violations=tuple(violations),
        strongly_connected=_strongly_connected(plan),
        condition3_mode=mode,
    )


def _width_condition_pairs(plan: WiringPlan, mode: str) -> set[tuple[int, int]]:
    """Ordered (span_vertex, width_vertex) pairs the width condition covers.

    Strict mode takes all ordered pairs of distinct vertices. Used-edges mode
    takes, for each interval of a target vertex wired to a different source,
    the pair (source, target): the target's intervals must be narrower than
    the source's span, which is exactly what makes the horizontal part of
    each wired map a contraction.
    """
    n = plan.n
    if mode == STRICT_MODE:
        return {(a, b) for a in range(1, n + 1) for b in range(1, n + 1) if a != b}
    pairs = set()
    for target, row in enumerate(plan.assignments, start=1):
        for asg in row:
            if 1 <= asg.source <= n and asg.source != target:
                pairs.add((asg.source, target))
    return pairs


def _strongly_connected(plan: WiringPlan) -> bool:
    """True when every vertex reaches every other along wired assignments."""
    n = plan.n
    fwd = [set() for _ in range(n)]
    rev = [set() for _ in range(n)]
    for alpha, row in enumerate(plan.assignments):
        for asg in row:
            if 1 <= asg.source <= n:
                fwd[alpha].add(asg.source - 1)
                rev[asg.source - 1].add(alpha)

    def reaches_all(adj) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == n

    return reaches_all(fwd) and reaches_all(rev)


def edge_counts(plan: WiringPlan) -> list[list[int]]:
    """n-by-n matrix K with K[a][b] = number of intervals of vertex a+1 wired to b+1.

    Row sums equal the interval counts whenever the plan matches its data
    sets. Raises ValueError if an assignment names a source outside 1..n.
    """
    n = plan.n
    counts = [[0] * n for _ in range(n)]
    for alpha, row in enumerate(plan.assignments):
        for i, asg in enumerate(row, start=1):
            if not 1 <= asg.source <= n:
                raise ValueError(
                    f"interval {i} of vertex {alpha + 1} names source vertex "
                    f"{asg.source}, valid range is 1..{n}"
                )
            counts[alpha][asg.source - 1] += 1
    return counts
