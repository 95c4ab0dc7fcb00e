"""Enumeration of finite topologies and random space generation.

Spaces on n points are streamed as minimal-neighborhood row tuples in
ascending lexicographic order (rows compared as integers, first row first).
Two independent enumerators exist: a direct backtracking generator over
coherent rows, and a brute-force walk over open-set families closed under
union and intersection. Their agreement is a regression gate before any
count is trusted.
"""

from __future__ import annotations

import random
from itertools import permutations
from typing import Iterator

from .bitset import bits
from .space import CapExceeded, FinSpace

LABELED_CAP = 6
HOMEO_CAP = 7

_NAME_POOL = tuple(str(i) for i in range(16))


def point_names(n: int) -> tuple[str, ...]:
    return _NAME_POOL[:n]


def space_from_rows(rows: tuple[int, ...]) -> FinSpace:
    return FinSpace(point_names(len(rows)), rows)


def first_rows(n: int) -> Iterator[int]:
    """Legal row-0 values in ascending order: the odd masks on n bits."""
    for m in range(1, 1 << n, 2):
        yield m


def complete_rows(n: int, prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """Extend a valid row prefix to all full coherent row tuples, ascending.

    A candidate row for point i is checked against every decided row j < i:
    if j ∈ N(i) then N(j) ⊆ N(i), and if i ∈ N(j) then N(i) ⊆ N(j). Every
    point pair is checked when its later member is placed, so leaves are
    exactly the valid topologies.
    """
    if len(prefix) == n:
        yield prefix
        return
    full = (1 << n) - 1
    rows = list(prefix)

    def place(i: int) -> Iterator[tuple[int, ...]]:
        own = 1 << i
        for m in range(own, full + 1):
            if not m & own:
                continue
            ok = True
            for j in range(i):
                rj = rows[j]
                if m >> j & 1 and rj & ~m:
                    ok = False
                    break
                if rj >> i & 1 and m & ~rj:
                    ok = False
                    break
            if not ok:
                continue
            rows.append(m)
            if i + 1 == n:
                yield tuple(rows)
            else:
                yield from place(i + 1)
            rows.pop()

    yield from place(len(prefix))


def labeled_rows(n: int) -> Iterator[tuple[int, ...]]:
    """All coherent minimal-neighborhood row tuples on n points, ascending."""
    if n == 0:
        yield ()
        return
    for r0 in first_rows(n):
        yield from complete_rows(n, (r0,))


def _completions_task(args: tuple[int, int]) -> list[tuple[int, ...]]:
    n, r0 = args
    return list(complete_rows(n, (r0,)))


def sharded_labeled_rows(n: int, workers: int = 1) -> Iterator[tuple[int, ...]]:
    """labeled_rows with first-row shards fanned out across processes.

    Shards are reassembled in ascending first-row order, so the stream is
    byte-identical to labeled_rows(n) for any worker count.
    """
    if n == 0 or workers <= 1:
        yield from labeled_rows(n)
        return
    from .parallel import run_tasks

    tasks = [(n, r0) for r0 in first_rows(n)]
    for block in run_tasks(_completions_task, tasks, workers):
        yield from block


def permute_rows(rows: tuple[int, ...], perm: tuple[int, ...]) -> tuple[int, ...]:
    """Relabel points: perm[i] is the new index of old point i."""
    n = len(rows)
    out = [0] * n
    for i in range(n):
        m = 0
        for j in bits(rows[i]):
            m |= 1 << perm[j]
        out[perm[i]] = m
    return tuple(out)


def canonical_rows(rows: tuple[int, ...], max_points: int = HOMEO_CAP) -> tuple[int, ...]:
    """The least row tuple over all relabelings; factorial in n."""
    n = len(rows)
    if n > max_points:
        raise CapExceeded(f"canonical form over {n}! relabelings; cap is {max_points} points")
    if n <= 1:
        return rows
    return min(permute_rows(rows, p) for p in permutations(range(n)))


def canonicalize(space: FinSpace, max_points: int = HOMEO_CAP) -> FinSpace:
    """Canonical representative of the homeomorphism class, on points 0..n-1."""
    return space_from_rows(canonical_rows(space.nbhd, max_points))


def homeo_rows(n: int) -> Iterator[tuple[int, ...]]:
    """One representative per homeomorphism class, in ascending order.

    The labeled stream ascends, so the first member of each class met is its
    least labeling, i.e. the canonical form; the rest of the orbit is marked
    seen. Memory is the orbit union, which is why the cap sits at 7.
    """
    if n <= 1:
        yield from labeled_rows(n)
        return
    seen: set[tuple[int, ...]] = set()
    perms = list(permutations(range(n)))
    for rows in labeled_rows(n):
        if rows in seen:
            continue
        yield rows
        for p in perms:
            seen.add(permute_rows(rows, p))


def enumerate_spaces(
    n: int,
    mode: str = "labeled",
    labeled_cap: int = LABELED_CAP,
    homeo_cap: int = HOMEO_CAP,
) -> Iterator[FinSpace]:
    if mode == "labeled":
        if n > labeled_cap:
            raise CapExceeded(f"labeled enumeration capped at {labeled_cap} points")
        stream = labeled_rows(n)
    elif mode == "homeo":
        if n > homeo_cap:
            raise CapExceeded(f"homeomorphism enumeration capped at {homeo_cap} points")
        stream = homeo_rows(n)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for rows in stream:
        yield space_from_rows(rows)


# ---------------------------------------------------------------------------
# Second enumerator: open-set families.
# ---------------------------------------------------------------------------

OPEN_FAMILY_CAP = 4


def open_family_rows(n: int) -> Iterator[tuple[int, ...]]:
    """Topologies on n points found by scanning all families of subsets that
    contain ∅ and the whole set and are closed under union and intersection.
    Doubly exponential; exists purely to cross-check labeled_rows."""
    if n > OPEN_FAMILY_CAP:
        raise CapExceeded(f"open-family enumeration capped at {OPEN_FAMILY_CAP} points")
    if n == 0:
        yield ()
        return
    full = (1 << n) - 1
    middle = [m for m in range(1, full)]
    for pick in range(1 << len(middle)):
        family = [0, full]
        rest = pick
        i = 0
        while rest:
            if rest & 1:
                family.append(middle[i])
            rest >>= 1
            i += 1
        fam = set(family)
        closed = True
        for a in family:
            for b in family:
                if a | b not in fam or a & b not in fam:
                    closed = False
                    break
            if not closed:
                break
        if not closed:
            continue
        rows = []
        for x in range(n):
            m = full
            for u in family:
                if u >> x & 1:
                    m &= u
            rows.append(m)
        yield tuple(rows)


def count_spaces(n: int, mode: str = "labeled") -> int:
    return sum(1 for _ in enumerate_spaces(n, mode))


# ---------------------------------------------------------------------------
# Random generation for property tests and sampled sweeps.
# ---------------------------------------------------------------------------

def random_rows(n: int, rng: random.Random, density: float = 0.35) -> tuple[int, ...]:
    """A random topology: random reflexive rows, then coherence closure
    (if y ∈ N(x) then N(y) ⊆ N(x)) iterated to a fixpoint."""
    rows = []
    for i in range(n):
        m = 1 << i
        for j in range(n):
            if j != i and rng.random() < density:
                m |= 1 << j
        rows.append(m)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            m = rows[i]
            for j in bits(m):
                m |= rows[j]
            if m != rows[i]:
                rows[i] = m
                changed = True
    return tuple(rows)


def random_space(n: int, rng: random.Random, density: float = 0.35) -> FinSpace:
    return space_from_rows(random_rows(n, rng, density))
