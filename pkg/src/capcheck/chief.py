"""Chief factors, chief series, cover/avoid and the CAP-type predicates.

A subgroup ``A`` *covers* the chief factor ``H/K`` when ``H <= AK`` and
*avoids* it when ``A ∩ H <= K``.  Quantifying over "every pd-chief factor of G"
is done over all normal pairs ``(K, H)`` with ``H/K`` minimal normal in
``G/K``; each such pair lies on some chief series.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

from .errors import GroupError
from .group import ElementTable, Group, mask_in, popcount
from .lattice import memo, chief_pair_masks, normal_masks
from .util import is_prime, prime_factors, require_prime


class CoverAvoid(str, enum.Enum):
    COVERS = "covers"
    AVOIDS = "avoids"
    NEITHER = "neither"


@dataclass(frozen=True)
class ChiefFactor:
    """``above/below`` with both terms normal in ``ambient``."""
    ambient: Group
    below_mask: int
    above_mask: int

    @cached_property
    def below(self) -> Group:
        return Group._from_mask(self.ambient, self.below_mask)

    @cached_property
    def above(self) -> Group:
        return Group._from_mask(self.ambient, self.above_mask)

    @property
    def factor_order(self) -> int:
        return popcount(self.above_mask) // popcount(self.below_mask)

    @property
    def pd_primes(self) -> frozenset[int]:
        return frozenset(prime_factors(self.factor_order))

    def label(self) -> str:
        return f"{popcount(self.above_mask)}/{popcount(self.below_mask)}"

    def as_dict(self) -> dict:
        return {"above_order": popcount(self.above_mask), "below_order": popcount(self.below_mask),
                "factor_order": self.factor_order,
                "above_gens": [g.cycle_string() for g in self.above.generators],
                "below_gens": [g.cycle_string() for g in self.below.generators]}

    def __repr__(self) -> str:
        return f"ChiefFactor({self.label()}, order={self.factor_order})"


@dataclass(frozen=True)
class ChiefSeries:
    ambient: Group
    term_masks: tuple[int, ...]

    @property
    def terms(self) -> list[Group]:
        return [Group._from_mask(self.ambient, m) for m in self.term_masks]

    @property
    def factors(self) -> list[ChiefFactor]:
        ms = self.term_masks
        return [ChiefFactor(self.ambient, a, b) for a, b in zip(ms, ms[1:])]

    def factor_orders(self) -> tuple[int, ...]:
        ms = self.term_masks
        return tuple(popcount(b) // popcount(a) for a, b in zip(ms, ms[1:]))


# ---------------------------------------------------------------------------
# factor enumeration
# ---------------------------------------------------------------------------

def chief_factor_pairs(G: Group) -> list[ChiefFactor]:
    return [ChiefFactor(G, k, h) for k, h in chief_pair_masks(G.table, G.mask)]


def _cover_graph(t: ElementTable, g: int) -> dict[int, list[int]]:
    def compute():
        graph: dict[int, list[int]] = {}
        for k, h in chief_pair_masks(t, g):
            graph.setdefault(k, []).append(h)
        return graph
    return memo(t, ("covergraph", g), compute)


def chief_series_masks(t: ElementTable, g: int, limit: int | None = None) -> tuple[list[tuple[int, ...]], bool]:
    """Depth-first chief series of ``g``; returns ``(series, exhausted)``."""
    graph = _cover_graph(t, g)
    out: list[tuple[int, ...]] = []
    stack = [(t.trivial,)]
    while stack:
        path = stack.pop()
        top = path[-1]
        if top == g:
            if limit is not None and len(out) >= limit:
                return out, False
            out.append(path)
            continue
        for h in reversed(graph.get(top, [])):
            stack.append(path + (h,))
    return out, True


def chief_series_enumerate(G: Group, limit: int | None = None) -> list[ChiefSeries]:
    series, _ = chief_series_masks(G.table, G.mask, limit)
    return [ChiefSeries(G, s) for s in series]


def chief_series(G: Group) -> ChiefSeries:
    """The first series in depth-first order."""
    return chief_series_enumerate(G, limit=1)[0]


# ---------------------------------------------------------------------------
# cover / avoid
# ---------------------------------------------------------------------------

def cover_avoid_mask(t: ElementTable, a: int, k: int, h: int) -> CoverAvoid:
    if a & h & ~k == 0:
        return CoverAvoid.AVOIDS
    if h & ~k & ~a == 0:
        # every element of H outside K already lies in A
        return CoverAvoid.COVERS
    ak = t.join(a, k)  # AK, a subgroup since K is normal
    if h & ~ak == 0:
        return CoverAvoid.COVERS
    return CoverAvoid.NEITHER


def cover_avoid(A: Group, f: ChiefFactor) -> CoverAvoid:
    t = f.ambient.table
    try:
        a = mask_in(f.ambient, A)
    except GroupError as exc:
        raise GroupError(f"subgroup does not lie in the factor's ambient group: {exc}") from None
    return cover_avoid_mask(t, a, f.below_mask, f.above_mask)


def pd_pairs(t: ElementTable, g: int, p: int) -> list[tuple[int, int]]:
    return memo(t, ("pdpairs", g, p),
                 lambda: [(k, h) for k, h in chief_pair_masks(t, g) if (popcount(h) // popcount(k)) % p == 0])


def pcap_violation_mask(t: ElementTable, a: int, g: int, p: int) -> tuple[int, int] | None:
    key = ("pcap", a, g, p)
    v = t.cache.get(key)
    if v is None:
        v = (0, 0)
        for k, h in pd_pairs(t, g, p):
            if cover_avoid_mask(t, a, k, h) is CoverAvoid.NEITHER:
                v = (k, h)
                break
        t.cache[key] = v
    return None if v == (0, 0) else v


def pcap_violation(A: Group, G: Group, p: int) -> ChiefFactor | None:
    """A pd-chief factor of ``G`` that ``A`` neither covers nor avoids, if any."""
    require_prime(p)
    v = pcap_violation_mask(G.table, mask_in(G, A), G.mask, p)
    return None if v is None else ChiefFactor(G, *v)


def is_pCAP(A: Group, G: Group, p: int) -> bool:
    return pcap_violation(A, G, p) is None


def semicap_series_mask(t: ElementTable, a: int, g: int) -> tuple[int, ...] | None:
    """A chief series all of whose factors ``a`` covers or avoids, or None.

    Searches the DAG of chief pairs from 1 to G keeping only good edges, so the
    answer is exact without listing every series.
    """
    key = ("semicap", a, g)
    if key in t.cache:
        return t.cache[key]
    graph = _cover_graph(t, g)
    dead: set[int] = set()

    def dfs(node, path):
        if node == g:
            return path
        for h in graph.get(node, []):
            if h in dead or cover_avoid_mask(t, a, node, h) is CoverAvoid.NEITHER:
                continue
            found = dfs(h, path + (h,))
            if found is not None:
                return found
        dead.add(node)
        return None

    result = dfs(t.trivial, (t.trivial,))
    t.cache[key] = result
    return result


def semicap_witness(A: Group, G: Group) -> ChiefSeries | None:
    s = semicap_series_mask(G.table, mask_in(G, A), G.mask)
    return None if s is None else ChiefSeries(G, s)


def is_semiCAP(A: Group, G: Group) -> bool:
    return semicap_witness(A, G) is not None


# ---------------------------------------------------------------------------
# U-hypercenter
# ---------------------------------------------------------------------------

def u_hypercenter_mask(t: ElementTable, g: int) -> int:
    """Ascending layers: join all prime-order minimal normal subgroups of G/Z_i."""
    def compute():
        graph = _cover_graph(t, g)
        z = t.trivial
        while True:
            layer = [h for h in graph.get(z, []) if is_prime(popcount(h) // popcount(z))]
            if not layer:
                return z
            nxt = z
            for h in layer:
                nxt = t.join(nxt, h)
            z = nxt
    return memo(t, ("ZU", g), compute)


def u_hypercenter(G: Group) -> Group:
    return Group._from_mask(G, u_hypercenter_mask(G.table, G.mask))


def u_hypercenter_oracle(G: Group) -> Group:
    """Brute force: the largest normal N reachable from 1 by prime-order chief steps."""
    t = G.table
    g = G.mask
    normals = normal_masks(t, g)
    reach = {t.trivial}
    for n in normals:  # ascending order, so every normal below n is settled
        if n in reach:
            continue
        for k in normals:
            if k in reach and k != n and k & n == k:
                idx = popcount(n) // popcount(k)
                if is_prime(idx) and not any(m != k and m != n and k & m == k and m & n == m for m in normals):
                    reach.add(n)
                    break
    best = max(reach, key=popcount)
    if any(r & best != r for r in reach):
        raise AssertionError("reachable normal subgroups have no largest element")
    return Group._from_mask(G, best)


def is_u_central_factor(f: ChiefFactor) -> bool:
    """Chief factors of prime order are exactly the U-central ones."""
    return is_prime(f.factor_order)

