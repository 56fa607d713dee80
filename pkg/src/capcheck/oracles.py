"""Slow, independent recomputations used to cross-check the fast paths.

None of these touch :class:`ElementTable` or the BSGS; they work directly on
image tuples so a bug in the engine cannot hide in both answers.
"""
from __future__ import annotations

from .group import Group
from .perm import compose_raw


def closure_elements(G: Group) -> frozenset[tuple]:
    """Every element of ``G`` by breadth-first closure under the generators."""
    ident = tuple(range(G.degree))
    gens = [g._img for g in G.generators]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = compose_raw(x, s)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def closure_order(G: Group) -> int:
    return len(closure_elements(G))


def _close(elems: frozenset[tuple], gens: list[tuple]) -> frozenset[tuple]:
    out = set(elems)
    frontier = list(out)
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = compose_raw(x, s)
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(out)


def _small_gens(sub: frozenset[tuple], ident: tuple) -> list[tuple]:
    """A generating set picked greedily; independent of the engine's choice."""
    gens: list[tuple] = []
    span = frozenset([ident])
    for x in sorted(sub):
        if x not in span:
            gens.append(x)
            span = _close(span, gens)
    return gens


def closure_pair_subgroups(G: Group) -> set[frozenset[tuple]]:
    """All subgroups: start from the cyclic ones and join pairs to a fixpoint."""
    elems = closure_elements(G)
    ident = tuple(range(G.degree))
    cyclic: dict[frozenset, tuple] = {}
    for x in sorted(elems):
        c = {ident}
        y = x
        while y != ident:
            c.add(y)
            y = compose_raw(y, x)
        cyclic.setdefault(frozenset(c), x)
    subs = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        new = set()
        for a in frontier:
            ga = _small_gens(a, ident)
            for b, x in cyclic.items():
                if x in a:
                    continue
                j = _close(a, ga + [x])
                if j not in subs:
                    new.add(j)
        subs |= new
        frontier = new
    return subs


def closure_pair_count(G: Group) -> int:
    return len(closure_pair_subgroups(G))
