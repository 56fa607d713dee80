"""Embedding predicates built on ``H ∩ [H, G]``: ICΦ, ICPC, ICSC, supplements.

``H`` is ICPC in ``G`` (for a prime p) when some p-CAP subgroup ``T`` of ``G``
satisfies ``H ∩ [H, G] <= T <= H``; ICSC is the same with semi-CAP.  The
existential is settled by scanning the subgroups of ``H`` above the
intersection, smallest first, so the witness is the least one in lattice order.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .chief import ChiefFactor, ChiefSeries, pcap_violation_mask, semicap_series_mask
from .errors import GroupError
from .group import ElementTable, Group, bits, mask_in, popcount
from .lattice import frattini_mask, is_supersolvable_mask, memo, subgroup_masks
from .util import p_part, require_prime


def intersection_mask(t: ElementTable, h: int, g: int) -> int:
    """``H ∩ [H, G]``."""
    return memo(t, ("HcapHG", h, g), lambda: h & t.commutator_subgroup(h, g))


def _between(t: ElementTable, lo: int, hi: int) -> list[int]:
    return [m for m in subgroup_masks(t, hi) if m & lo == lo]


def icpc_witness_mask(t: ElementTable, h: int, g: int, p: int) -> int | None:
    key = ("icpc", h, g, p)
    if key in t.cache:
        return t.cache[key]
    inter = intersection_mask(t, h, g)
    found = None
    if pcap_violation_mask(t, inter, g, p) is None:
        found = inter
    else:
        for m in _between(t, inter, h):
            if pcap_violation_mask(t, m, g, p) is None:
                found = m
                break
    t.cache[key] = found
    return found


def icsc_witness_mask(t: ElementTable, h: int, g: int) -> tuple[int, tuple] | None:
    key = ("icsc", h, g)
    if key in t.cache:
        return t.cache[key]
    inter = intersection_mask(t, h, g)
    found = None
    for m in _between(t, inter, h):
        s = semicap_series_mask(t, m, g)
        if s is not None:
            found = (m, s)
            break
    t.cache[key] = found
    return found


def supplement_mask(t: ElementTable, h: int, g: int) -> int | None:
    """Smallest supersolvable ``A <= G`` with ``HA = G`` as a set product."""
    key = ("ssupp", h, g)
    if key in t.cache:
        return t.cache[key]
    n_g, n_h = popcount(g), popcount(h)
    found = None
    for a in subgroup_masks(t, g):
        n_a = popcount(a)
        if n_h * n_a < n_g:
            continue
        if n_h * n_a // popcount(h & a) != n_g:
            continue
        if is_supersolvable_mask(t, a):
            found = a
            break
    t.cache[key] = found
    return found


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------

@dataclass
class ICPCCheck:
    """Outcome of an ICPC test with its evidence."""
    holds: bool
    intersection: Group
    witness: Group | None = None
    # each candidate T with a pd-chief factor it neither covers nor avoids
    failures: list[tuple[Group, ChiefFactor]] = field(default_factory=list)

    @property
    def certificate(self) -> ChiefFactor | None:
        return self.failures[-1][1] if self.failures else None

    def __bool__(self) -> bool:
        return self.holds


def _check_sub(H: Group, G: Group) -> tuple[ElementTable, int, int]:
    t = G.table
    return t, mask_in(G, H), G.mask


def is_ICPhi(H: Group, G: Group) -> bool:
    t, h, g = _check_sub(H, G)
    inter = intersection_mask(t, h, g)
    return inter & ~frattini_mask(t, h) == 0


def check_ICPC(H: Group, G: Group, p: int) -> ICPCCheck:
    require_prime(p)
    t, h, g = _check_sub(H, G)
    inter = intersection_mask(t, h, g)
    w = icpc_witness_mask(t, h, g, p)
    result = ICPCCheck(w is not None, Group._from_mask(G, inter),
                       None if w is None else Group._from_mask(G, w))
    if w is None:
        for m in _between(t, inter, h):
            k, hh = pcap_violation_mask(t, m, g, p)
            result.failures.append((Group._from_mask(G, m), ChiefFactor(G, k, hh)))
    return result


def is_ICPC(H: Group, G: Group, p: int) -> bool:
    require_prime(p)
    t, h, g = _check_sub(H, G)
    return icpc_witness_mask(t, h, g, p) is not None


def icpc_witness(H: Group, G: Group, p: int) -> Group | None:
    require_prime(p)
    t, h, g = _check_sub(H, G)
    w = icpc_witness_mask(t, h, g, p)
    return None if w is None else Group._from_mask(G, w)


def icsc_witness(H: Group, G: Group) -> tuple[Group, ChiefSeries] | None:
    t, h, g = _check_sub(H, G)
    w = icsc_witness_mask(t, h, g)
    if w is None:
        return None
    return Group._from_mask(G, w[0]), ChiefSeries(G, w[1])


def is_ICSC(H: Group, G: Group) -> bool:
    return icsc_witness(H, G) is not None


def supersolvable_supplement(H: Group, G: Group) -> Group | None:
    t, h, g = _check_sub(H, G)
    a = supplement_mask(t, h, g)
    return None if a is None else Group._from_mask(G, a)


def has_supersolvable_supplement(H: Group, G: Group) -> bool:
    return supersolvable_supplement(H, G) is not None


def target_masks(t: ElementTable, pm: int, p: int) -> list[int]:
    """Cyclic subgroups of order p, plus order 4 when p = 2 and P is nonabelian."""
    def compute():
        n = popcount(pm)
        if p_part(n, p) != n:
            raise GroupError(f"subgroup of order {n} is not a {p}-group")
        orders = t.orders
        want = {p}
        if p == 2:
            gens = t.gens_of(pm)
            if any(t.commutator(a, b) != t.identity for a in gens for b in gens):
                want.add(4)
        seen = {}
        for x in bits(pm):
            if orders[x] in want:
                seen.setdefault(t.cyclic(x), x)
        return sorted(seen, key=lambda m: (popcount(m), m))
    return memo(t, ("targets", pm, p), compute)


def hypothesis_targets(P: Group, p: int) -> list[Group]:
    require_prime(p)
    t = P.table
    return [Group._from_mask(P, m) for m in target_masks(t, P.mask, p)]
