"""Integer partitions, set partitions and compositions."""

from __future__ import annotations

from typing import Iterator, List, Optional, Sequence, Tuple

Partition = Tuple[int, ...]


def partitions(n: int, max_part: Optional[int] = None) -> Iterator[Partition]:
    """Partitions of ``n`` as non-increasing tuples, in reverse-lexicographic order.

    ``partitions(4)`` yields (4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1).
    """
    if n < 0:
        return
    if max_part is None or max_part > n:
        max_part = n
    if n == 0:
        yield ()
        return

    def rec(rest: int, cap: int, prefix: List[int]):
        if rest == 0:
            yield tuple(prefix)
            return
        for part in range(min(rest, cap), 0, -1):
            prefix.append(part)
            yield from rec(rest - part, part, prefix)
            prefix.pop()

    yield from rec(n, max_part, [])


def proper_partitions(n: int) -> List[Partition]:
    """Partitions of ``n`` other than the one-part partition ``(n,)``."""
    return list(partitions(n, n - 1))


def partition_str(lam: Partition) -> str:
    return ",".join(str(p) for p in lam)


def parse_partition(text: str) -> Partition:
    parts = tuple(sorted((int(t) for t in text.split(",") if t.strip()), reverse=True))
    if any(p <= 0 for p in parts):
        raise ValueError(f"partition parts must be positive: {text!r}")
    return parts


def set_partitions(k: int) -> Iterator[List[List[int]]]:
    """All set partitions of ``{0, ..., k-1}`` (restricted growth strings)."""
    if k == 0:
        yield []
        return
    labels = [0] * k

    def rec(i: int, nblocks: int):
        if i == k:
            blocks: List[List[int]] = [[] for _ in range(nblocks)]
            for idx, b in enumerate(labels):
                blocks[b].append(idx)
            yield blocks
            return
        for b in range(nblocks + 1):
            labels[i] = b
            yield from rec(i + 1, max(nblocks, b + 1))

    yield from rec(1, 1)


def bell_number(k: int) -> int:
    row = [1]
    for _ in range(k):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def compositions(n: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Weak compositions of ``n`` into ``parts`` non-negative entries."""
    if parts == 0:
        if n == 0:
            yield ()
        return
    if parts == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in compositions(n - first, parts - 1):
            yield (first,) + rest


def multiset_counts(items: Sequence) -> List[Tuple[object, int]]:
    """Distinct items in sorted order with their multiplicities."""
    out: List[Tuple[object, int]] = []
    for it in sorted(items):
        if out and out[-1][0] == it:
            out[-1] = (it, out[-1][1] + 1)
        else:
            out.append((it, 1))
    return out
