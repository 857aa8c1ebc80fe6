"""Exact eventually-periodic subsets of the integers, bounded below.

A set is stored as a finite part below a threshold T plus a periodic
tail {x >= T : x mod P in residues}.  The family is closed under union,
intersection, Minkowski sum, complement within [lo, oo) and Kleene star
of subsets of [1, oo), which is exactly what the transitive closure of
translation-invariant inversion relations consumes.  All operations are
exact; normalization makes equality structural.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm


@dataclass(frozen=True)
class IntSet:
    fin: frozenset[int]
    T: int
    P: int
    res: frozenset[int]  # residues mod P active for x >= T

    # -- construction -----------------------------------------------------

    @staticmethod
    def empty() -> "IntSet":
        return _make(frozenset(), 0, 1, frozenset())

    @staticmethod
    def points(xs) -> "IntSet":
        return _make(frozenset(xs), 0, 1, frozenset())

    @staticmethod
    def from_range(lo: int, hi: int | None = None) -> "IntSet":
        """[lo, hi] when hi is given, else [lo, oo)."""
        if hi is None:
            return _make(frozenset(), lo, 1, frozenset({0}))
        if hi < lo:
            return IntSet.empty()
        return IntSet.points(range(lo, hi + 1))

    @staticmethod
    def tail(start: int, period: int, residues) -> "IntSet":
        return _make(frozenset(), start, period, frozenset(r % period for r in residues))

    # -- predicates --------------------------------------------------------

    def __contains__(self, x: int) -> bool:
        if x in self.fin:
            return True
        return bool(self.res) and x >= self.T and x % self.P in self.res

    def is_empty(self) -> bool:
        return not self.fin and not self.res

    def is_finite(self) -> bool:
        return not self.res

    def min(self) -> int | None:
        if self.fin:
            return min(self.fin)
        if self.res:
            return min(x for x in range(self.T, self.T + self.P) if x % self.P in self.res)
        return None

    def max_finite(self) -> int | None:
        """Largest element, for finite sets only."""
        if self.res:
            raise ValueError("set has a periodic tail")
        return max(self.fin) if self.fin else None

    def upto(self, hi: int) -> list[int]:
        lo = self.min()
        if lo is None:
            return []
        return [x for x in range(lo, hi + 1) if x in self]

    def is_cofinal_from(self) -> int | None:
        """K when the set equals fin-part plus the full ray [K, oo)."""
        if len(self.res) != self.P:
            return None
        k = self.T
        while k - 1 in self.fin:
            k -= 1
        return k

    # -- algebra -----------------------------------------------------------

    def union(self, other: "IntSet") -> "IntSet":
        p = lcm(self.P, other.P)
        t = max(_t_eff(self), _t_eff(other))
        res = frozenset(
            r for r in range(p) if (r in _lift(self, p)) or (r in _lift(other, p))
        )
        lo = _min2(self, other)
        if lo is None:
            return IntSet.empty()
        fin = frozenset(x for x in range(lo, t) if x in self or x in other)
        return _make(fin, t, p, res)

    def intersection(self, other: "IntSet") -> "IntSet":
        p = lcm(self.P, other.P)
        t = max(_t_eff(self), _t_eff(other))
        res = frozenset(
            r for r in range(p) if (r in _lift(self, p)) and (r in _lift(other, p))
        )
        lo = _min2(self, other)
        if lo is None:
            return IntSet.empty()
        fin = frozenset(x for x in range(lo, t) if x in self and x in other)
        return _make(fin, t, p, res)

    def complement_in(self, lo: int) -> "IntSet":
        """[lo, oo) minus this set."""
        t = max(_t_eff(self), lo)
        res = frozenset(r for r in range(self.P) if r not in self.res)
        fin = frozenset(x for x in range(lo, t) if x not in self)
        return _make(fin, t, self.P, res)

    def issubset(self, other: "IntSet") -> bool:
        return self.union(other) == other

    def intersects(self, other: "IntSet") -> bool:
        return not self.intersection(other).is_empty()

    def shift(self, c: int) -> "IntSet":
        return _make(
            frozenset(x + c for x in self.fin),
            self.T + c,
            self.P,
            frozenset((r + c) % self.P for r in self.res),
        )

    def minkowski(self, other: "IntSet") -> "IntSet":
        """{x + y : x in self, y in other}, exactly.

        Beyond T_a + T_b + 2*lcm(P_a, P_b) the sumset is lcm-periodic, so
        an explicit scan up to that bound determines it completely.
        """
        if self.is_empty() or other.is_empty():
            return IntSet.empty()
        if self.is_finite() and other.is_finite():
            return IntSet.points(
                x + y for x in self.fin for y in other.fin
            )
        la, lb = self.min(), other.min()
        L = lcm(self.P, other.P)
        t_out = _t_eff(self) + _t_eff(other) + 2 * L
        lo = la + lb

        def member(s: int) -> bool:
            return any((s - x) in other for x in self.upto(s - lb))

        fin = frozenset(x for x in range(lo, t_out) if member(x))
        res = frozenset(x % L for x in range(t_out, t_out + L) if member(x))
        return _make(fin, t_out, L, res)

    def star(self) -> "IntSet":
        """{0} u self u (self+self) u ...; requires min(self) >= 1.

        Uses the Apery trick: with m = min(self) the star is closed under
        adding m, so per class mod m it is a ray from the least reachable
        value.  A finite generating slice of the set suffices because
        P*m is itself a sum of m's.
        """
        if self.is_empty():
            return IntSet.points([0])
        m = self.min()
        if m < 1:
            raise ValueError("star needs a subset of [1, oo)")
        gens = self.upto(_t_eff(self) + self.P * (m + 1))
        INF = None
        ap: dict[int, int | None] = {c: INF for c in range(m)}
        ap[0] = 0
        # Dijkstra over Z/m with edge weights the generators
        import heapq

        heap = [(0, 0)]
        while heap:
            val, c = heapq.heappop(heap)
            if ap[c] is not None and val > ap[c]:
                continue
            for g in gens:
                c2 = (c + g) % m
                v2 = val + g
                if ap[c2] is None or v2 < ap[c2]:
                    ap[c2] = v2
                    heapq.heappush(heap, (v2, c2))
        finite = {c: v for c, v in ap.items() if v is not None}
        t = max(finite.values()) + 1
        fin = frozenset(
            x
            for v in finite.values()
            for x in range(v, t, m)
        )
        res = frozenset(v % m for v in finite.values())
        return _make(fin, t, m, res)

    def __repr__(self):
        bits = sorted(self.fin)
        if self.res:
            return f"IntSet({bits} + tail[{self.T}+, mod {self.P}: {sorted(self.res)}])"
        return f"IntSet({bits})"


def _lift(s: IntSet, p: int) -> frozenset[int]:
    """Residues mod p (a multiple of s.P) matching s's tail pattern."""
    return frozenset(r for r in range(p) if r % s.P in s.res)


def _t_eff(s: IntSet) -> int:
    """A threshold beyond which membership is purely the tail pattern."""
    return max(s.T, max(s.fin) + 1) if s.fin else s.T


def _min2(a: IntSet, b: IntSet):
    xs = [v for v in (a.min(), b.min()) if v is not None]
    return min(xs) if xs else None


def _make(fin: frozenset[int], t: int, p: int, res: frozenset[int]) -> IntSet:
    """Normalize to the canonical representation."""
    if not res:
        return IntSet(frozenset(fin), 0, 1, frozenset())
    # absorb finite points lying on the tail, bump T over strays beyond it
    stray = {x for x in fin if x >= t}
    if stray:
        t_new = max(stray) + 1
        fin = frozenset(
            x
            for x in range(min(min(fin), t), t_new)
            if (x in fin) or (x >= t and x % p in res)
        )
        t = t_new
    fin = frozenset(x for x in fin if x < t)
    # minimal period
    for d in range(1, p + 1):
        if p % d:
            continue
        folded = frozenset(r % d for r in res)
        if frozenset(r for r in range(p) if r % d in folded) == res:
            p, res = d, folded
            break
    # retract the threshold point by point while the pattern keeps
    # matching; res is nonempty, so this stops within one period of the
    # finite support (the first uncovered pattern residue blocks it)
    fin = set(fin)
    while ((t - 1) in fin) == ((t - 1) % p in res):
        t -= 1
        fin.discard(t)
    return IntSet(frozenset(fin), t, p, frozenset(res))
