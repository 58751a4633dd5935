"""Interval geometry: sub-intervals, batches, instances and coverage state.

Everything here is immutable and pure; the other modules build on these
primitives.  Lengths are plain doubles; touching pieces (gap within the
global tolerance) merge into one covered component.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import numeric
from .errors import SettingError, StructureError

LENGTH_SETTINGS = ("UL", "FL", "AL", "US")
COUNT_SETTINGS = ("UN", "AN")


@dataclass(frozen=True)
class SubInterval:
    """Closed interval [start, end] with strictly positive length."""

    start: float
    end: float

    def __post_init__(self):
        if not (self.start >= 0.0):
            raise StructureError(f"start {self.start!r} must be >= 0")
        if not (self.end > self.start):
            raise StructureError(
                f"interval [{self.start!r}, {self.end!r}] has non-positive length"
            )

    @property
    def length(self) -> float:
        return self.end - self.start

    def __repr__(self) -> str:
        return f"[{self.start:g}, {self.end:g}]"


@dataclass(frozen=True)
class Batch:
    """One released item: an ordered tuple of pairwise-disjoint sub-intervals.

    Outside the unit-sum setting every batch is a singleton.  Parts must be
    sorted by start and may touch but not overlap.
    """

    parts: tuple[SubInterval, ...]

    def __post_init__(self):
        if not self.parts:
            raise StructureError("batch needs at least one part")
        for prev, cur in zip(self.parts, self.parts[1:]):
            if cur.start < prev.end - numeric.EPS:
                raise StructureError(
                    f"batch parts overlap or are unsorted: {prev} then {cur}"
                )

    @classmethod
    def single(cls, start: float, end: float) -> "Batch":
        return cls((SubInterval(start, end),))

    @property
    def total_part_length(self) -> float:
        """Sum of part lengths (equals the union length; parts are disjoint)."""
        return sum(p.length for p in self.parts)

    @property
    def is_singleton(self) -> bool:
        return len(self.parts) == 1

    @property
    def span(self) -> tuple[float, float]:
        return self.parts[0].start, self.parts[-1].end

    def __repr__(self) -> str:
        return "Batch(" + ", ".join(repr(p) for p in self.parts) + ")"


def _merge(parts: Iterable[SubInterval]) -> list[SubInterval]:
    """Sort-and-sweep merge; pieces whose gap is within EPS become one."""
    ordered = sorted(parts, key=lambda p: (p.start, p.end))
    merged: list[list[float]] = []
    for p in ordered:
        if merged and p.start <= merged[-1][1] + numeric.EPS:
            if p.end > merged[-1][1]:
                merged[-1][1] = p.end
        else:
            merged.append([p.start, p.end])
    return [SubInterval(a, b) for a, b in merged]


def union_length(batches: Sequence[Batch]) -> float:
    """Total covered length of the union of all parts of all batches."""
    parts = [p for b in batches for p in b.parts]
    return sum(p.length for p in _merge(parts))


def intersection_length(u: SubInterval, v: SubInterval) -> float:
    """Length of the overlap between two sub-intervals (0 when disjoint)."""
    return max(0.0, min(u.end, v.end) - max(u.start, v.start))


@dataclass(frozen=True)
class CoverageState:
    """Canonical disjoint-interval union of everything accepted so far."""

    components: tuple[SubInterval, ...]
    total_len: float
    component_count: int

    @classmethod
    def empty(cls) -> "CoverageState":
        return cls((), 0.0, 0)

    @classmethod
    def of(cls, parts: Iterable[SubInterval]) -> "CoverageState":
        merged = tuple(_merge(parts))
        return cls(merged, sum(p.length for p in merged), len(merged))


def absorb(state: CoverageState, batch: Batch) -> CoverageState:
    """New canonical state after accepting `batch`; `state` is untouched."""
    return CoverageState.of(state.components + batch.parts)


def added_length(state: CoverageState, batch: Batch) -> float:
    """Marginal covered length the batch would contribute to `state`."""
    return absorb(state, batch).total_len - state.total_len


@dataclass(frozen=True)
class Setting:
    """Length regime (UL / FL / AL / US, with FL range cap m) plus whether
    the total release count is known (UN) or not (AN)."""

    length: str
    count: str
    m: Optional[float] = None

    def __post_init__(self):
        if self.length not in LENGTH_SETTINGS:
            raise SettingError(f"unknown length setting {self.length!r}")
        if self.count not in COUNT_SETTINGS:
            raise SettingError(f"unknown count setting {self.count!r}")
        if self.length == "FL":
            if self.m is None or not self.m > 1.0:
                raise SettingError("FL setting needs m > 1")
        elif self.m is not None:
            raise SettingError(f"m is only meaningful in FL, got m={self.m!r}")

    def label(self) -> str:
        return f"{self.length}-{self.count}"


def _check_item_shape(setting: Setting, batch: Batch, where: str) -> None:
    if setting.length == "US":
        if abs(batch.total_part_length - 1.0) > numeric.EPS:
            raise SettingError(
                f"{where}: unit-sum batch has total length "
                f"{batch.total_part_length!r}"
            )
        return
    if not batch.is_singleton:
        raise SettingError(f"{where}: multi-part batch outside the US setting")
    length = batch.parts[0].length
    if setting.length == "UL":
        if abs(length - 1.0) > numeric.EPS:
            raise SettingError(f"{where}: unit-length item has length {length!r}")
    elif setting.length == "FL":
        if length < 1.0 - numeric.EPS or length > setting.m + numeric.EPS:
            raise SettingError(
                f"{where}: FL item length {length!r} outside [1, {setting.m}]"
            )
    # AL: any positive length.


@dataclass(frozen=True)
class Instance:
    """A full release sequence over the target [0, target_len] with quota."""

    target_len: float
    quota: int
    setting: Setting
    items: tuple[Batch, ...]

    def __post_init__(self):
        if not self.target_len > 0.0:
            raise SettingError("target_len must be positive")
        if self.quota < 2:
            raise SettingError(f"quota must be >= 2, got {self.quota}")
        if not self.items:
            raise SettingError("instance needs at least one item")
        for i, batch in enumerate(self.items):
            for p in batch.parts:
                if p.start < -numeric.EPS or p.end > self.target_len + numeric.EPS:
                    raise SettingError(
                        f"items[{i}]: part {p} outside [0, {self.target_len}]"
                    )
            _check_item_shape(self.setting, batch, f"items[{i}]")
        if self.setting.count == "UN" and len(self.items) < self.quota + 1:
            raise SettingError(
                f"UN instance needs n >= k+1, got n={len(self.items)} k={self.quota}"
            )

    @property
    def n(self) -> int:
        return len(self.items)
