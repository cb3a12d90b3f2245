"""Partitions as Young diagrams: conjugation, arm/leg lengths, enumeration."""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator

ENUMERATION_CEILING = 24

Partition = tuple[int, ...]
Cell = tuple[int, int]

EMPTY: Partition = ()


def make_partition(parts) -> Partition:
    lam = tuple(int(p) for p in parts if p != 0)
    if any(p < 0 for p in lam):
        raise ValueError(f"negative part in {parts!r}")
    if any(a < b for a, b in zip(lam, lam[1:])):
        raise ValueError(f"parts must be weakly decreasing: {parts!r}")
    return lam


def weight(lam: Partition) -> int:
    return sum(lam)


@lru_cache(maxsize=None)
def conjugate(lam: Partition) -> Partition:
    if not lam:
        return EMPTY
    return tuple(sum(1 for p in lam if p >= j) for j in range(1, lam[0] + 1))


def cells(lam: Partition) -> Iterator[Cell]:
    """Cells ``(i, j)`` of the diagram, 1-based, row-major."""
    for i, row in enumerate(lam, start=1):
        for j in range(1, row + 1):
            yield (i, j)


def _part(lam: Partition, i: int) -> int:
    return lam[i - 1] if 1 <= i <= len(lam) else 0


def arm(lam: Partition, cell: Cell) -> int:
    i, j = cell
    return _part(lam, i) - j


def leg(lam: Partition, cell: Cell) -> int:
    i, j = cell
    return _part(conjugate(lam), j) - i


def _check_ceiling(k: int) -> None:
    if k < 0:
        raise ValueError("weight must be non-negative")
    if k > ENUMERATION_CEILING:
        raise ValueError(f"weight {k} exceeds enumeration ceiling {ENUMERATION_CEILING}")


def _partitions_bounded(k: int, largest: int) -> Iterator[Partition]:
    if k == 0:
        yield EMPTY
        return
    for first in range(min(k, largest), 0, -1):
        for rest in _partitions_bounded(k - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def enumerate_partitions(k: int) -> tuple[Partition, ...]:
    """All partitions of ``k`` in reverse-lexicographic order."""
    _check_ceiling(k)
    return tuple(_partitions_bounded(k, k))


@lru_cache(maxsize=None)
def enumerate_pairs_upto(n: int) -> tuple[tuple[Partition, Partition], ...]:
    """Pairs ``(lam_plus, lam_minus)`` with total weight ``<= n``.

    Grouped by total weight; within a weight, ordered by ``|lam_plus|``
    descending and then by the reverse-lexicographic order of each part.
    """
    _check_ceiling(n)
    out = []
    for total in range(n + 1):
        for a in range(total, -1, -1):
            for lp in enumerate_partitions(a):
                for lm in enumerate_partitions(total - a):
                    out.append((lp, lm))
    return tuple(out)
