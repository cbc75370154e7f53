"""Region-of-interest candidates: which luma samples of a frame may carry bytes.

A frame is cut into *units*: the main diagonal first, then full-width rows
alternating from the top and bottom edges (row 0, row H-1, row 1, ...). Each
unit contributes ``floor(fraction * W)`` evenly strided samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from stegano_ga.errors import CapacityError

DIAGONAL = "diagonal"


@dataclass(frozen=True)
class RoiParams:
    width: int
    height: int
    payload_len: int
    frame_count: int
    row_fraction: float = 0.1

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0 or self.frame_count <= 0:
            raise ValueError("width, height and frame_count must be positive")
        if not 0.0 < self.row_fraction <= 1.0:
            raise ValueError(f"row_fraction must lie in (0, 1], got {self.row_fraction}")
        if self.payload_len < 0:
            raise ValueError("payload_len must be non-negative")

    @property
    def per_unit(self) -> int:
        # epsilon guards products like 0.1 * 70 landing a hair under an integer
        return max(1, math.floor(self.row_fraction * self.width + 1e-9))


def row_metric(params: RoiParams) -> float:
    """Rows needed per frame: bytes per frame over the per-row allowance."""
    if params.payload_len == 0:
        return 0.0
    return (params.payload_len / params.frame_count) / (params.width * params.row_fraction)


def unit_count(params: RoiParams) -> int:
    return math.ceil(row_metric(params))


def unit_schedule(height: int, count: int) -> list:
    """Ordered units: ``DIAGONAL`` then row indices alternating top/bottom."""
    if count > height + 1:
        raise CapacityError(f"{count} units requested but a frame of height {height} has only {height + 1}")
    units: list = []
    if count > 0:
        units.append(DIAGONAL)
    top, bottom = 0, height - 1
    while len(units) < count:
        if (len(units) - 1) % 2 == 0:
            units.append(top)
            top += 1
        else:
            units.append(bottom)
            bottom -= 1
    return units


def _unit_positions(unit, width: int, height: int, per_unit: int) -> list[tuple[int, int]]:
    if unit == DIAGONAL:
        d = min(height, width)
        c = min(per_unit, d)
        return [(t, t) for t in (j * d // c for j in range(c))]
    c = min(per_unit, width)
    return [(unit, j * width // c) for j in range(c)]


@lru_cache(maxsize=64)
def _all_units(width: int, height: int, per_unit: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Every unit's surviving positions after dropping ones claimed by an earlier unit."""
    claimed: set[tuple[int, int]] = set()
    out = []
    for unit in unit_schedule(height, height + 1):
        kept = []
        for pos in _unit_positions(unit, width, height, per_unit):
            if pos not in claimed:
                claimed.add(pos)
                kept.append(pos)
        out.append(tuple(kept))
    return tuple(out)


def frame_capacity(params: RoiParams) -> int:
    return sum(len(u) for u in _all_units(params.width, params.height, params.per_unit))


def candidate_positions(params: RoiParams, bytes_for_frame: int, frame: int | None = None) -> list[tuple[int, int]]:
    """Candidate ``(row, col)`` pairs for one frame, whole units at a time.

    Units are taken in schedule order until at least ``bytes_for_frame``
    positions are available, so the GA always has the full unit to choose from.
    """
    if bytes_for_frame <= 0:
        return []
    positions: list[tuple[int, int]] = []
    for unit in _all_units(params.width, params.height, params.per_unit):
        positions.extend(unit)
        if len(positions) >= bytes_for_frame:
            return positions
    where = f"frame {frame}" if frame is not None else "frame"
    raise CapacityError(
        f"{where} needs {bytes_for_frame} bytes but holds at most {len(positions)}",
        max_payload=len(positions),
    )
