"""Subgroup lattices, characteristic subgroups and group-class predicates.

Everything here works on masks inside the root's :class:`ElementTable` and
memoises per mask in ``table.cache``; the public functions wrap masks back into
:class:`Group` objects whose parent is the group they were computed in.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import config
from .errors import GroupError
from .group import ElementTable, Group, bits, mask_in, mask_of, popcount
from .util import is_prime, is_prime_power, p_part, prime_factors, require_prime


def memo(t: ElementTable, key, compute):
    v = t.cache.get(key)
    if v is None:
        v = compute()
        t.cache[key] = v
    return v


def _by_order(masks):
    return sorted(masks, key=lambda m: (popcount(m), m))


# ---------------------------------------------------------------------------
# mask-level algorithms
# ---------------------------------------------------------------------------

def cyclic_seeds(t: ElementTable, g: int) -> list[tuple[int, int]]:
    """Distinct cyclic subgroups of prime-power order in ``g`` as ``(mask, generator)``."""
    def compute():
        seeds: dict[int, int] = {}
        orders = t.orders
        for x in bits(g):
            if is_prime_power(orders[x]):
                seeds.setdefault(t.cyclic(x), x)
        return sorted(((m, x) for m, x in seeds.items()), key=lambda mx: (popcount(mx[0]), mx[0]))
    return memo(t, ("seeds", g), compute)


def subgroup_masks(t: ElementTable, g: int) -> list[int]:
    """All subgroups of ``g`` by cyclic extension, sorted by (order, mask).

    Every subgroup is generated by its elements of prime-power order, so joining
    found subgroups with prime-power cyclic subgroups one at a time reaches all
    of them.
    """
    def compute():
        full_key = ("subs", t.full)
        if g != t.full and full_key in t.cache:
            return [m for m in t.cache[full_key] if m & ~g == 0]
        if g != t.full and t.n <= config.get_caps().lattice_cap:
            return [m for m in subgroup_masks(t, t.full) if m & ~g == 0]
        config.check_lattice(popcount(g))
        seeds = cyclic_seeds(t, g)
        found = {t.trivial}
        queue = [t.trivial]
        for h in queue:
            for _, x in seeds:
                if (h >> x) & 1:
                    continue
                j = t.extend(h, [x])
                if j not in found:
                    found.add(j)
                    queue.append(j)
        return _by_order(found)
    return memo(t, ("subs", g), compute)


def class_reps(t: ElementTable, g: int) -> list[int]:
    def compute():
        gens = t.gens_of(g)
        maps = [t.conj_map(x) for x in gens]
        seen = 0
        reps = []
        for x in bits(g):
            if (seen >> x) & 1:
                continue
            reps.append(x)
            orbit = [x]
            seen |= 1 << x
            for y in orbit:
                for cm in maps:
                    z = cm[y]
                    if not (seen >> z) & 1:
                        seen |= 1 << z
                        orbit.append(z)
        return reps
    return memo(t, ("classreps", g), compute)


def normal_masks(t: ElementTable, g: int) -> list[int]:
    """Normal subgroups of ``g``: joins of normal closures of conjugacy classes."""
    def compute():
        config.check_order(popcount(g))
        closures = sorted({t.normal_closure(g, t.cyclic(x)) for x in class_reps(t, g)} - {t.trivial})
        found = {t.trivial}
        queue = [t.trivial]
        for a in queue:
            for c in closures:
                j = t.join(a, c)
                if j not in found:
                    found.add(j)
                    queue.append(j)
        return _by_order(found)
    return memo(t, ("normals", g), compute)


def chief_pair_masks(t: ElementTable, g: int) -> list[tuple[int, int]]:
    """Pairs ``(K, H)`` of normal subgroups of ``g`` with ``H/K`` minimal normal in ``g/K``."""
    def compute():
        normals = normal_masks(t, g)
        pairs = []
        for k in normals:
            minimal: list[int] = []
            for h in normals:
                if h == k or h & k != k:
                    continue
                if any(m & h == m for m in minimal):
                    continue
                minimal.append(h)
            pairs.extend((k, h) for h in minimal)
        return pairs
    return memo(t, ("chiefpairs", g), compute)


def maximal_masks(t: ElementTable, g: int) -> list[int]:
    def compute():
        proper = [m for m in subgroup_masks(t, g) if m != g]
        out = []
        for m in reversed(proper):  # decreasing order: only larger ones can contain m
            if not any(o != m and m & o == m for o in out):
                out.append(m)
        return _by_order(out)
    return memo(t, ("maximal", g), compute)


def sylow_mask(t: ElementTable, g: int, p: int) -> int:
    def compute():
        target = p_part(popcount(g), p)
        orders = t.orders
        cand = [x for x in bits(g) if orders[x] > 1 and p_part(orders[x], p) == orders[x]]
        P = t.trivial
        while popcount(P) < target:
            grew = False
            for x in cand:
                if (P >> x) & 1:
                    continue
                j = t.extend(P, [x])
                n = popcount(j)
                if p_part(n, p) == n:
                    P = j
                    grew = True
                    if n == target:
                        break
            if not grew:
                raise GroupError("Sylow search stalled")  # pragma: no cover - Sylow's theorem
        return P
    return memo(t, ("sylow", g, p), compute)


def p_core_mask(t: ElementTable, g: int, p: int) -> int:
    """``O_p``: intersection of the conjugates of a Sylow p-subgroup."""
    def compute():
        P = sylow_mask(t, g, p)
        gens = t.gens_of(g)
        orbit = [P]
        seen = {P}
        core = P
        for q in orbit:
            for x in gens:
                c = t.conjugate_mask(q, x)
                if c not in seen:
                    seen.add(c)
                    orbit.append(c)
                    core &= c
        return core
    return memo(t, ("Op", g, p), compute)


def p_prime_core_mask(t: ElementTable, g: int, p: int) -> int:
    def compute():
        return max((m for m in normal_masks(t, g) if popcount(m) % p), key=popcount)
    return memo(t, ("Op'", g, p), compute)


def p_residual_mask(t: ElementTable, g: int, p: int) -> int:
    """``O^p``: generated by all elements of order coprime to p."""
    def compute():
        orders = t.orders
        cur = t.trivial
        for x in bits(g):
            if orders[x] % p and not (cur >> x) & 1:
                cur = t.extend(cur, [x])
        return cur
    return memo(t, ("O^p", g, p), compute)


def fitting_mask(t: ElementTable, g: int) -> int:
    def compute():
        f = t.trivial
        for p in prime_factors(popcount(g)):
            f = t.join(f, p_core_mask(t, g, p))
        return f
    return memo(t, ("fitting", g), compute)


def centralizer_mask(t: ElementTable, g: int, s: int) -> int:
    def compute():
        sg = t.gens_of(s)
        return mask_of(x for x in bits(g) if all(t.conj(y, x) == y for y in sg))
    return memo(t, ("centralizer", g, s), compute)


def normalizer_mask(t: ElementTable, g: int, s: int) -> int:
    def compute():
        sg = t.gens_of(s)
        return mask_of(x for x in bits(g) if all((s >> t.conj(y, x)) & 1 for y in sg))
    return memo(t, ("normalizer", g, s), compute)


def center_mask(t: ElementTable, g: int) -> int:
    return centralizer_mask(t, g, g)


def derived_mask(t: ElementTable, g: int) -> int:
    return memo(t, ("derived", g), lambda: t.commutator_subgroup(g, g))


def hypercenter_mask(t: ElementTable, g: int) -> int:
    """Limit of the upper central series."""
    def compute():
        gens = t.gens_of(g)
        z = t.trivial
        while True:
            nxt = mask_of(x for x in bits(g) if all((z >> t.commutator(x, y)) & 1 for y in gens))
            if nxt == z:
                return z
            z = nxt
    return memo(t, ("hypercenter", g), compute)


def frattini_mask(t: ElementTable, g: int) -> int:
    def compute():
        out = g
        for m in maximal_masks(t, g):
            out &= m
        return out
    return memo(t, ("frattini", g), compute)


def is_solvable_mask(t: ElementTable, g: int) -> bool:
    def compute():
        cur = g
        while cur != t.trivial:
            nxt = derived_mask(t, cur)
            if nxt == cur:
                return False
            cur = nxt
        return True
    return memo(t, ("solvable", g), compute)


def is_supersolvable_mask(t: ElementTable, g: int) -> bool:
    def compute():
        return all(is_prime(popcount(h) // popcount(k)) for k, h in chief_pair_masks(t, g))
    return memo(t, ("supersolvable", g), compute)


def is_p_nilpotent_mask(t: ElementTable, g: int, p: int) -> bool:
    return popcount(p_residual_mask(t, g, p)) % p != 0


def is_nilpotent_mask(t: ElementTable, g: int) -> bool:
    return hypercenter_mask(t, g) == g


def is_subnormal_mask(t: ElementTable, s: int, g: int) -> bool:
    cur = g
    while True:
        if cur == s:
            return True
        nxt = t.normal_closure(cur, s)
        if nxt == cur:
            return False
        cur = nxt


def is_quasisimple_mask(t: ElementTable, s: int) -> bool:
    if s == t.trivial or derived_mask(t, s) != s:
        return False
    z = center_mask(t, s)
    above = [n for n in normal_masks(t, s) if n & z == z]
    return len(above) == 2


def layer_mask(t: ElementTable, g: int) -> int:
    def compute():
        out = t.trivial
        if is_solvable_mask(t, g):
            return out
        for s in subgroup_masks(t, g):
            if is_quasisimple_mask(t, s) and is_subnormal_mask(t, s, g):
                out = t.join(out, s)
        return out
    return memo(t, ("layer", g), compute)


def generalized_fitting_mask(t: ElementTable, g: int) -> int:
    def compute():
        f = fitting_mask(t, g)
        if is_solvable_mask(t, g):
            return f
        return t.join(f, layer_mask(t, g))
    return memo(t, ("Fstar", g), compute)


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubgroupLattice:
    ambient: Group
    subgroups: tuple[Group, ...]
    normal_index: tuple[bool, ...]
    maximal_index: tuple[bool, ...]
    masks: tuple[int, ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.subgroups)

    def __iter__(self):
        return iter(self.subgroups)

    def normal(self) -> list[Group]:
        return [s for s, f in zip(self.subgroups, self.normal_index) if f]

    def maximal(self) -> list[Group]:
        return [s for s, f in zip(self.subgroups, self.maximal_index) if f]

    def orders(self) -> list[int]:
        return [popcount(m) for m in self.masks]


def _wrap(G: Group, masks) -> list[Group]:
    return [Group._from_mask(G, m) for m in masks]


def all_subgroups(G: Group) -> SubgroupLattice:
    config.check_lattice(G.order)
    t = G.table
    g = G.mask
    masks = subgroup_masks(t, g)
    normals = set(normal_masks(t, g))
    maximal = set(maximal_masks(t, g))
    return SubgroupLattice(G, tuple(_wrap(G, masks)), tuple(m in normals for m in masks),
                           tuple(m in maximal for m in masks), tuple(masks))


def normal_subgroups(G: Group) -> list[Group]:
    return _wrap(G, normal_masks(G.table, G.mask))


def normal_subgroups_by_lattice(G: Group) -> list[Group]:
    """Lattice filter: subgroups invariant under conjugation by G's generators."""
    t = G.table
    g = G.mask
    gens = t.gens_of(g)
    return _wrap(G, [m for m in subgroup_masks(t, g) if t.normalizes(gens, m)])


def maximal_subgroups(G: Group) -> list[Group]:
    config.check_lattice(G.order)
    return _wrap(G, maximal_masks(G.table, G.mask))


def minimal_normal_subgroups(G: Group) -> list[Group]:
    if G.is_trivial():
        raise GroupError("the trivial group has no minimal normal subgroups")
    t = G.table
    return _wrap(G, [h for k, h in chief_pair_masks(t, G.mask) if k == t.trivial])


def sylow_subgroup(G: Group, p: int) -> Group:
    require_prime(p)
    return Group._from_mask(G, sylow_mask(G.table, G.mask, p))


_KINDS_WITH_P = {"p_core", "p_prime_core", "p_residual"}


def characteristic_mask(G: Group, kind: str, p: int | None = None) -> int:
    t = G.table
    g = G.mask
    if kind in _KINDS_WITH_P:
        if p is None:
            raise ValueError(f"{kind} needs a prime p")
        require_prime(p)
    if kind == "center":
        return center_mask(t, g)
    if kind == "derived":
        return derived_mask(t, g)
    if kind == "frattini":
        config.check_lattice(G.order)
        return frattini_mask(t, g)
    if kind == "fitting":
        return fitting_mask(t, g)
    if kind == "p_core":
        return p_core_mask(t, g, p)
    if kind == "p_prime_core":
        return p_prime_core_mask(t, g, p)
    if kind == "p_residual":
        return p_residual_mask(t, g, p)
    if kind == "hypercenter":
        return hypercenter_mask(t, g)
    if kind == "layer":
        if not is_solvable_mask(t, g):
            config.check_lattice(G.order)
        return layer_mask(t, g)
    if kind == "generalized_fitting":
        if not is_solvable_mask(t, g):
            config.check_lattice(G.order)
        return generalized_fitting_mask(t, g)
    raise ValueError(f"unknown characteristic subgroup kind {kind!r}")


def characteristic_subgroup(G: Group, kind: str, p: int | None = None) -> Group:
    return Group._from_mask(G, characteristic_mask(G, kind, p))


def center(G: Group) -> Group:
    return characteristic_subgroup(G, "center")


def derived_subgroup(G: Group) -> Group:
    return characteristic_subgroup(G, "derived")


def frattini_subgroup(G: Group) -> Group:
    return characteristic_subgroup(G, "frattini")


def fitting_subgroup(G: Group) -> Group:
    return characteristic_subgroup(G, "fitting")


def group_predicate(G: Group, kind: str, p: int | None = None) -> bool:
    t = G.table
    g = G.mask
    if kind == "nilpotent":
        return is_nilpotent_mask(t, g)
    if kind == "solvable":
        return is_solvable_mask(t, g)
    if kind == "supersolvable":
        return is_supersolvable_mask(t, g)
    if kind == "p_nilpotent":
        if p is None:
            raise ValueError("p_nilpotent needs a prime p")
        require_prime(p)
        return is_p_nilpotent_mask(t, g, p)
    if kind == "abelian":
        return G.is_abelian()
    raise ValueError(f"unknown predicate {kind!r}")


def is_nilpotent(G: Group) -> bool:
    return group_predicate(G, "nilpotent")


def is_solvable(G: Group) -> bool:
    return group_predicate(G, "solvable")


def is_supersolvable(G: Group) -> bool:
    return group_predicate(G, "supersolvable")


def is_p_nilpotent(G: Group, p: int) -> bool:
    return group_predicate(G, "p_nilpotent", p)


def has_normal_p_complement(G: Group, p: int) -> bool:
    """Brute-force p-nilpotency: some normal subgroup has order |G|/|G|_p."""
    require_prime(p)
    want = G.order // p_part(G.order, p)
    return any(N.order == want for N in normal_subgroups_by_lattice(G))


def centralizer_normalizer(G: Group, S: Group, kind: str) -> Group:
    t = G.table
    s = mask_in(G, S)
    if kind == "centralizer":
        return Group._from_mask(G, centralizer_mask(t, G.mask, s))
    if kind == "normalizer":
        return Group._from_mask(G, normalizer_mask(t, G.mask, s))
    raise ValueError(f"kind must be 'centralizer' or 'normalizer', got {kind!r}")


def centralizer(G: Group, S: Group) -> Group:
    return centralizer_normalizer(G, S, "centralizer")


def normalizer(G: Group, S: Group) -> Group:
    return centralizer_normalizer(G, S, "normalizer")


def exponent(G: Group) -> int:
    t = G.table
    return math.lcm(*(t.orders[x] for x in bits(G.mask)))

