"""Square-difference-free subsets of an integer interval.

Construction (greedy), testing (pair witness search), exact optimization
(branch-and-bound maximum independent set on the square-difference graph),
and exact-rational densities on progressions.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import CapExceeded, EmptyProgression, OutOfUniverse

EXACT_SOLVE_CAP = 200


@dataclass(frozen=True)
class IntegerSet:
    """A strictly increasing tuple of non-negative integers inside [0, universe]."""

    elements: tuple[int, ...]
    universe: int

    def __post_init__(self):
        elems = tuple(self.elements)
        if any(b <= a for a, b in zip(elems, elems[1:])):
            raise ValueError("elements must be strictly increasing")
        if elems and (elems[0] < 0 or elems[-1] > self.universe):
            raise OutOfUniverse(f"elements must lie in [0, {self.universe}]")
        object.__setattr__(self, "elements", elems)

    @classmethod
    def from_iterable(cls, it: Iterable[int], universe: Optional[int] = None) -> "IntegerSet":
        elems = tuple(sorted(set(int(x) for x in it)))
        if universe is None:
            universe = elems[-1] if elems else 0
        return cls(elems, universe)

    def __len__(self) -> int:
        return len(self.elements)

    def as_set(self) -> set[int]:
        return set(self.elements)

    def density(self) -> Fraction:
        """|A| / universe, over the 1-based interval convention."""
        if self.universe == 0:
            return Fraction(0)
        return Fraction(len(self.elements), self.universe)


@dataclass(frozen=True)
class Progression:
    """Arithmetic progression start, start+step, ..., with `length` terms."""

    start: int
    step: int
    length: int

    def __post_init__(self):
        if self.step < 1:
            raise ValueError("step must be >= 1")
        if self.length < 0:
            raise ValueError("length must be >= 0")

    @property
    def last(self) -> int:
        return self.start + self.step * (self.length - 1)

    def elements(self) -> range:
        return range(self.start, self.start + self.step * self.length, self.step)

    def inside(self, x_max: int) -> bool:
        return self.length == 0 or (self.start >= 1 and self.last <= x_max)


def squares_up_to(n: int) -> list[int]:
    return [t * t for t in range(1, math.isqrt(max(n, 0)) + 1)]


def is_square_difference_free(a: IntegerSet | Iterable[int]) -> tuple[bool, Optional[tuple[int, int, int]]]:
    """Check that no two elements differ by a positive perfect square.

    Returns (True, None) or (False, (a1, a2, n)) with a1 - a2 = n^2.
    """
    elems = a.elements if isinstance(a, IntegerSet) else tuple(sorted(set(a)))
    if len(elems) < 2:
        return True, None
    present = set(elems)
    span = elems[-1] - elems[0]
    for t in range(1, math.isqrt(span) + 1):
        sq = t * t
        for x in elems:
            if x + sq in present:
                return False, (x + sq, x, t)
    return True, None


def greedy_sequence(limit: int, base: int = 0) -> IntegerSet:
    """First-fit square-difference-free set scanning base, base+1, ..., limit.

    base=0 gives the classical sequence 0, 2, 5, 7, 10, 12, ...; base=1
    scans the 1-based interval instead.
    """
    if limit < base:
        return IntegerSet((), max(limit, 0))
    n = limit - base + 1
    blocked = bytearray(n)
    chosen = []
    for off in range(n):
        if blocked[off]:
            continue
        chosen.append(base + off)
        t = 1
        while off + t * t < n:
            blocked[off + t * t] = 1
            t += 1
    return IntegerSet(tuple(chosen), limit)


def density_on_progression(a: IntegerSet | Iterable[int], p: Progression) -> Fraction:
    """Exact |A meet P| / |P|."""
    if p.length == 0:
        raise EmptyProgression("progression has no elements")
    members = a.as_set() if isinstance(a, IntegerSet) else set(a)
    hits = sum(1 for x in p.elements() if x in members)
    return Fraction(hits, p.length)


# ---------------------------------------------------------------------------
# Exact maximum by branch and bound.
#
# Vertices are bit positions 0..x-1 for the integers 1..x; candidate sets are
# Python ints used as bitsets.  The upper bound at each node is a greedy
# clique cover, preferring the square-difference triangles {v, v+a, v+b}
# (a, b, b-a all squares, i.e. scaled Pythagorean triples) over plain edges.
# Vertices are then processed in decreasing cover-class order so that a node
# can stop as soon as size + class_index <= incumbent.
# ---------------------------------------------------------------------------


def _adjacency_masks(x: int) -> list[int]:
    adj = [0] * x
    for sq in squares_up_to(x - 1):
        for i in range(x - sq):
            adj[i] |= 1 << (i + sq)
            adj[i + sq] |= 1 << i
    return adj


def _triangle_offsets(x: int) -> list[tuple[int, int]]:
    """Offset pairs (a, b) with a, b, b-a all positive squares, b <= x-1."""
    offs = []
    for ta in range(1, math.isqrt(x) + 1):
        for tb in range(ta + 1, math.isqrt(x) + 1):
            a, b = ta * ta, tb * tb
            d = b - a
            if math.isqrt(d) ** 2 == d:
                offs.append((a, b))
    return offs


def max_sdf_exact(x: int, cap: int = EXACT_SOLVE_CAP) -> tuple[int, IntegerSet]:
    """Largest square-difference-free subset of {1..x}.

    Exact for any x up to `cap` (default 200; raise the cap at your own
    risk, runtime grows quickly past ~130).  Deterministic: fixed vertex
    order, greedy incumbent seed, strict-improvement updates.
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    if x > cap:
        raise CapExceeded(f"x={x} exceeds exact-solve cap {cap}")

    adj = _adjacency_masks(x)
    tri = _triangle_offsets(x)

    seed = greedy_sequence(x, base=1)
    best_size = len(seed.elements)
    best_set = sum(1 << (v - 1) for v in seed.elements)

    sys.setrecursionlimit(max(10000, 50 * x))

    def expand(cands: int, size: int, chosen: int) -> None:
        nonlocal best_size, best_set
        # Take degree-0/1 vertices outright; some optimum always contains them.
        while True:
            scan = cands
            took = False
            while scan:
                v = (scan & -scan).bit_length() - 1
                scan &= scan - 1
                nb = adj[v] & cands
                if nb == 0:
                    cands &= ~(1 << v)
                    chosen |= 1 << v
                    size += 1
                elif nb & (nb - 1) == 0:
                    cands &= ~(1 << v) & ~nb
                    chosen |= 1 << v
                    size += 1
                    took = True
                    break
            if not took:
                break
        if not cands:
            if size > best_size:
                best_size, best_set = size, chosen
            return

        order: list[tuple[int, int]] = []
        rest = cands
        k = 0
        while rest:
            k += 1
            v = (rest & -rest).bit_length() - 1
            rest &= ~(1 << v)
            placed = False
            for a, b in tri:
                if v + b >= x:
                    continue
                m = (1 << (v + a)) | (1 << (v + b))
                if (rest & m) == m:
                    rest &= ~m
                    order += [(v, k), (v + a, k), (v + b, k)]
                    placed = True
                    break
            if not placed:
                members = [v]
                common = adj[v] & rest
                while common:
                    u = (common & -common).bit_length() - 1
                    rest &= ~(1 << u)
                    members.append(u)
                    common &= adj[u]
                order += [(u, k) for u in members]

        local = cands
        for v, cls in reversed(order):
            if size + cls <= best_size:
                return
            bit = 1 << v
            if not (local & bit):
                continue
            sub = local & ~adj[v] & ~bit
            if sub:
                expand(sub, size + 1, chosen | bit)
            elif size + 1 > best_size:
                best_size, best_set = size + 1, chosen | bit
            local &= ~bit

    expand((1 << x) - 1, 0, 0)

    witness = IntegerSet(tuple(i + 1 for i in range(x) if best_set >> i & 1), x)
    ok, _ = is_square_difference_free(witness)
    assert ok and len(witness.elements) == best_size
    return best_size, witness


def read_set_file(path: str) -> IntegerSet:
    """Newline-delimited decimal integers."""
    elems = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                elems.append(int(line))
    return IntegerSet.from_iterable(elems)
