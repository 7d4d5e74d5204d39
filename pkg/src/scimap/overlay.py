"""Per-node overlay scores and the 2-D density field.

The overlay score of a node is the average publication date of its
supporting records, expressed as a fractional year: a record dated
year Y, month M counts as Y + (M - 0.5)/12, and Y + 0.5 (midyear) when
the month is unknown. Records with no year are excluded; a node whose
supporting records all lack a year has no score.

The density field is an unnormalized Gaussian kernel sum over node
positions, weighted by occurrence counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Mapping, Sequence

import numpy as np

from .corpus import BibRecord
from .errors import NoDatedRecords
from .network import CooccurrenceNetwork, NetworkNode

__all__ = [
    "OverlayScores",
    "DensityField",
    "fractional_date",
    "average_pub_date",
    "compute_overlay_scores",
    "emerging_filter",
    "density_field",
    "write_pgm",
]


def fractional_date(year: int, month: int | None = None) -> float:
    """Map a publication date to a fractional year (midpoint convention)."""
    if month is None:
        return year + 0.5
    return year + (month - 0.5) / 12.0


def average_pub_date(node: NetworkNode, records: Mapping[str, BibRecord]) -> float:
    """Mean fractional date over the node's dated supporting records.

    Raises :class:`NoDatedRecords` when none of them carries a year.
    """
    dates = [
        fractional_date(rec.pub_year, rec.pub_month)
        for rec in (records[rid] for rid in sorted(node.record_ids))
        if rec.pub_year is not None
    ]
    if not dates:
        raise NoDatedRecords(f"node {node.label!r} has no dated records")
    return sum(dates) / len(dates)


@dataclass(frozen=True)
class OverlayScores:
    """Index-aligned scores; None where no supporting record has a year.

    ``normalized`` maps scores into [0, 1] after clamping at the 2nd and
    98th percentile of present scores (robust to outlier dates), so it is
    monotone in the raw scores.
    """

    scores: tuple[float | None, ...]
    normalized: tuple[float | None, ...]
    clamp_low: float | None
    clamp_high: float | None


def compute_overlay_scores(
    net: CooccurrenceNetwork, records: Mapping[str, BibRecord] | Sequence[BibRecord]
) -> OverlayScores:
    if not isinstance(records, Mapping):
        records = {rec.id: rec for rec in records}
    scores: list[float | None] = []
    for node in net.nodes:
        try:
            scores.append(average_pub_date(node, records))
        except NoDatedRecords:
            scores.append(None)

    present = [s for s in scores if s is not None]
    if not present:
        return OverlayScores(tuple(scores), tuple(scores), None, None)
    low = float(np.percentile(present, 2.0))
    high = float(np.percentile(present, 98.0))
    if high == low:
        normalized = tuple(None if s is None else 0.5 for s in scores)
    else:
        normalized = tuple(
            None if s is None else (min(max(s, low), high) - low) / (high - low)
            for s in scores
        )
    return OverlayScores(tuple(scores), normalized, low, high)


def emerging_filter(
    scores: Mapping[str, float | None], cutoff: float
) -> set[str]:
    """Labels whose score is strictly greater than the cutoff."""
    return {
        label
        for label, score in scores.items()
        if score is not None and score > cutoff
    }


@dataclass(frozen=True)
class DensityField:
    """Rectangular kernel-density grid covering all node positions.

    ``grid[iy, ix]`` is the field value at
    (x_min + ix * dx, y_min + iy * dy).
    """

    grid: np.ndarray
    bounds: tuple[float, float, float, float]
    bandwidth: float

    @property
    def cell_area(self) -> float:
        x_min, x_max, y_min, y_max = self.bounds
        ny, nx = self.grid.shape
        return ((x_max - x_min) / (nx - 1)) * ((y_max - y_min) / (ny - 1))


def default_bandwidth(positions) -> float:
    pos = np.asarray(positions, dtype=float)
    if pos.size == 0:
        return 1.0
    spread = max(
        float(pos[:, 0].max() - pos[:, 0].min()),
        float(pos[:, 1].max() - pos[:, 1].min()),
    )
    return 0.05 * spread if spread > 0 else 1.0


def density_field(
    positions,
    node_weights: Sequence[float],
    grid_resolution: int = 128,
    bandwidth: float | None = None,
    padding_bandwidths: float = 5.0,
) -> DensityField:
    """Gaussian kernel sum on a square grid.

    Each grid point p holds sum_i weight_i * exp(-||p - x_i||^2 / (2 b^2)).
    Bounds extend ``padding_bandwidths`` * b past the positions so the
    kernel mass is essentially all inside the grid.
    """
    pos = np.asarray(positions, dtype=float)
    weights = np.asarray(node_weights, dtype=float)
    if grid_resolution < 2:
        raise ValueError("grid_resolution must be >= 2")
    if bandwidth is None:
        bandwidth = default_bandwidth(pos)
    if bandwidth <= 0:
        raise ValueError("bandwidth must be positive")

    pad = padding_bandwidths * bandwidth
    x_min, x_max = float(pos[:, 0].min()) - pad, float(pos[:, 0].max()) + pad
    y_min, y_max = float(pos[:, 1].min()) - pad, float(pos[:, 1].max()) + pad
    xs = np.linspace(x_min, x_max, grid_resolution)
    ys = np.linspace(y_min, y_max, grid_resolution)

    grid = np.empty((grid_resolution, grid_resolution))
    dx = xs[:, None] - pos[None, :, 0]
    denom = 2.0 * bandwidth * bandwidth
    for iy, y in enumerate(ys):
        dy = y - pos[:, 1]
        sq = dx * dx + (dy * dy)[None, :]
        grid[iy] = (np.exp(-sq / denom) * weights).sum(axis=-1)
    return DensityField(grid=grid, bounds=(x_min, x_max, y_min, y_max), bandwidth=bandwidth)


def write_pgm(field: DensityField, stream: IO[str]) -> None:
    """Export the grid as plain-text PGM (P2), top row = max y."""
    grid = field.grid
    peak = float(grid.max())
    ny, nx = grid.shape
    stream.write(f"P2\n{nx} {ny}\n255\n")
    for row in grid[::-1]:
        if peak > 0:
            values = [str(int(round(255.0 * v / peak))) for v in row]
        else:
            values = ["0"] * nx
        stream.write(" ".join(values))
        stream.write("\n")
