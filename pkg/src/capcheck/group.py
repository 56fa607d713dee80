"""Permutation groups: BSGS construction, subgroup arithmetic, quotients.

Every group has a *root*: the topmost ancestor along ``parent`` links.  Once the
root is small enough (``max_order``), its elements are indexed in a
:class:`ElementTable` and each subgroup below it is identified with an integer
bitmask over those indices.  Intersections are then ``&``, containment is a
mask test, and joins/closures run Dimino's algorithm on table rows.
"""
from __future__ import annotations

import math
import threading
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from . import config
from .errors import DegreeMismatch, NotASubgroup, NotNormal
from .perm import Permutation, compose_raw, invert_raw


# ---------------------------------------------------------------------------
# Schreier-Sims
# ---------------------------------------------------------------------------

def _orbit_transversal(gens, point, ident):
    trans = {point: ident}
    queue = [point]
    for pt in queue:
        u = trans[pt]
        for s in gens:
            q = s[pt]
            if q not in trans:
                trans[q] = compose_raw(u, s)
                queue.append(q)
    return trans


def _sift(g, base, transversals, start=0):
    for level in range(start, len(base)):
        b = g[base[level]]
        u = transversals[level].get(b)
        if u is None:
            return g, level
        g = compose_raw(g, invert_raw(u))
    return g, len(base)


def schreier_sims(degree: int, gens: Iterable[tuple]):
    """Deterministic Schreier-Sims on 0-based image tuples.

    Returns ``(base, strong_gens_by_level, transversals)`` where
    ``transversals[i]`` maps each point of the i-th fundamental orbit to a
    coset representative sending ``base[i]`` there.
    """
    ident = tuple(range(degree))
    gens = [g for g in dict.fromkeys(gens) if g != ident]
    base: list[int] = []
    for g in gens:
        if all(g[b] == b for b in base):
            base.append(next(i for i in range(degree) if g[i] != i))
    levels = [[g for g in gens if all(g[b] == b for b in base[:i])] for i in range(len(base))]
    trans = [_orbit_transversal(levels[i], base[i], ident) for i in range(len(base))]

    i = len(base) - 1
    while i >= 0:
        restart = False
        for beta, u in list(trans[i].items()):
            for s in levels[i]:
                g1 = compose_raw(u, s)
                u1 = trans[i][s[beta]]
                if g1 == u1:
                    continue
                h, j = _sift(compose_raw(g1, invert_raw(u1)), base, trans, i + 1)
                if j == len(base) and h == ident:
                    continue
                if j == len(base):
                    base.append(next(x for x in range(degree) if h[x] != x))
                    levels.append([])
                    trans.append({})
                for lv in range(i + 1, j + 1):
                    levels[lv].append(h)
                    trans[lv] = _orbit_transversal(levels[lv], base[lv], ident)
                i = j
                restart = True
                break
            if restart:
                break
        if not restart:
            i -= 1
    return base, levels, trans


# ---------------------------------------------------------------------------
# mask helpers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=200_000)
def bits(mask: int) -> tuple[int, ...]:
    """Indices of set bits, ascending."""
    s = bin(mask)[:1:-1]
    return tuple(i for i, c in enumerate(s) if c == "1")


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def popcount(mask: int) -> int:
    return mask.bit_count()


class ElementTable:
    """Indexed elements of a root group with lazily built multiplication rows.

    ``row(j)[i]`` is the index of ``e_i * e_j``.  Rows and conjugation maps are
    filled on demand; a filled slot never changes, so concurrent readers only
    ever race to store equal values.
    """

    def __init__(self, group: "Group"):
        config.check_order(group.order)
        self.degree = group.degree
        self.elements: list[tuple] = sorted(group._enumerate_raw())
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.n = len(self.elements)
        self.identity = self.index[tuple(range(self.degree))]
        self.inv = [self.index[invert_raw(e)] for e in self.elements]
        self.full = (1 << self.n) - 1
        self.trivial = 1 << self.identity
        self._rows: list = [None] * self.n
        self._conj: list = [None] * self.n
        self._gens: dict[int, list[int]] = {self.trivial: []}
        self.cache: dict = {}
        self.lock = threading.RLock()

    # element arithmetic -------------------------------------------------
    def row(self, j: int) -> list[int]:
        r = self._rows[j]
        if r is None:
            q = self.elements[j]
            idx = self.index
            r = [idx[tuple([q[x] for x in e])] for e in self.elements]
            self._rows[j] = r
        return r

    def mul(self, i: int, j: int) -> int:
        return self.row(j)[i]

    def conj_map(self, g: int) -> list[int]:
        """``conj_map(g)[i]`` is the index of ``g^-1 e_i g``."""
        c = self._conj[g]
        if c is None:
            ge = self.elements[g]
            idx = self.index
            out = []
            for e in self.elements:
                img = [0] * self.degree
                for pt in range(self.degree):
                    img[ge[pt]] = ge[e[pt]]
                out.append(idx[tuple(img)])
            c = out
            self._conj[g] = c
        return c

    def conj(self, x: int, g: int) -> int:
        c = self._conj[g]
        if c is not None:
            return c[x]
        ge, e = self.elements[g], self.elements[x]
        img = [0] * self.degree
        for pt in range(self.degree):
            img[ge[pt]] = ge[e[pt]]
        return self.index[tuple(img)]

    def prod(self, *xs: int) -> int:
        """Index of the product of the given elements, left to right."""
        acc = self.elements[xs[0]]
        for x in xs[1:]:
            e = self.elements[x]
            acc = tuple([e[v] for v in acc])
        return self.index[acc]

    def commutator(self, x: int, y: int) -> int:
        """``x^-1 y^-1 x y``."""
        return self.prod(self.inv[x], self.inv[y], x, y)

    def cyclic(self, x: int) -> int:
        """Mask of the cyclic subgroup generated by ``x``."""
        key = ("cyclic", x)
        m = self.cache.get(key)
        if m is None:
            e = self.elements[x]
            cur = e
            m = self.trivial
            while True:
                i = self.index[cur]
                if i == self.identity:
                    break
                m |= 1 << i
                cur = tuple([e[v] for v in cur])
            with self.lock:
                self._gens.setdefault(m, [x])
            self.cache[key] = m
        return m

    def power(self, x: int, k: int) -> int:
        e = self.elements[x]
        result = tuple(range(self.degree))
        base = e if k >= 0 else invert_raw(e)
        for _ in range(abs(k)):
            result = compose_raw(result, base)
        return self.index[result]

    @cached_property
    def orders(self) -> list[int]:
        out = []
        for e in self.elements:
            seen = [False] * self.degree
            lens = []
            for s in range(self.degree):
                if not seen[s]:
                    k, j = 0, s
                    while not seen[j]:
                        seen[j] = True
                        j = e[j]
                        k += 1
                    lens.append(k)
            out.append(math.lcm(*lens))
        return out

    def perm(self, i: int) -> Permutation:
        return Permutation._raw(self.elements[i])

    # subgroup arithmetic ---------------------------------------------
    def extend(self, base_mask: int, new: Sequence[int]) -> int:
        """Subgroup generated by the subgroup ``base_mask`` and elements ``new`` (Dimino)."""
        new = [g for g in dict.fromkeys(new) if not (base_mask >> g) & 1]
        if not new:
            return base_mask
        H = bits(base_mask)
        allgens = self.gens_of(base_mask) + new
        members = bytearray(self.n)
        for h in H:
            members[h] = 1
        result = list(H)
        reps = [self.identity]
        k = 0
        while k < len(reps):
            r = reps[k]
            k += 1
            for s in allgens:
                x = self.row(s)[r]
                if not members[x]:
                    rowx = self._rows[x]
                    if rowx is not None:
                        coset = [rowx[h] for h in H]
                    else:
                        ex = self.elements[x]
                        idx = self.index
                        els = self.elements
                        coset = [idx[tuple([ex[v] for v in els[h]])] for h in H]
                    for y in coset:
                        members[y] = 1
                    result.extend(coset)
                    reps.append(x)
        mask = mask_of(result)
        with self.lock:
            self._gens.setdefault(mask, allgens)
        return mask

    def generate(self, gens: Sequence[int]) -> int:
        return self.extend(self.trivial, list(gens))

    def gens_of(self, mask: int) -> list[int]:
        g = self._gens.get(mask)
        if g is not None:
            return list(g)
        # greedy: high-order elements first, then ascending index
        order = self.orders
        cur = self.trivial
        gens: list[int] = []
        for x in sorted(bits(mask), key=lambda i: (-order[i], i)):
            if not (cur >> x) & 1:
                cur = self.extend(cur, [x])
                gens.append(x)
            if cur == mask:
                break
        with self.lock:
            self._gens[mask] = gens
        return list(gens)

    def join(self, a: int, b: int) -> int:
        if a & b == b:
            return a
        if a & b == a:
            return b
        return self.extend(a, self.gens_of(b))

    def normalizes(self, g_gens: Sequence[int], n_mask: int) -> bool:
        ng = self.gens_of(n_mask)
        for g in g_gens:
            for x in ng:
                if not (n_mask >> self.conj(x, g)) & 1:
                    return False
        return True

    def normal_closure(self, g_mask: int, s_mask: int) -> int:
        maps = [self.conj_map(g) for g in self.gens_of(g_mask)]
        n = s_mask
        changed = True
        while changed:
            changed = False
            for x in self.gens_of(n):
                for cm in maps:
                    c = cm[x]
                    if not (n >> c) & 1:
                        n = self.extend(n, [c])
                        changed = True
        return n

    def commutator_subgroup(self, h_mask: int, g_mask: int) -> int:
        gg = self.gens_of(g_mask)
        comms = {self.commutator(h, g) for h in self.gens_of(h_mask) for g in gg}
        return self.normal_closure(g_mask, self.generate(sorted(comms)))

    def conjugate_mask(self, mask: int, g: int) -> int:
        cm = self.conj_map(g)
        return mask_of(cm[x] for x in bits(mask))

    def is_normal(self, n_mask: int, g_mask: int) -> bool:
        return self.normalizes(self.gens_of(g_mask), n_mask)


# ---------------------------------------------------------------------------
# Group
# ---------------------------------------------------------------------------

def _coerce_perm(g, degree: int) -> Permutation:
    if isinstance(g, Permutation):
        return g
    if isinstance(g, str):
        return Permutation.parse(g, degree)
    raise TypeError(f"expected Permutation or cycle string, got {type(g).__name__}")


class Group:
    """A permutation group of fixed degree, optionally a subgroup of ``parent``.

    Groups are immutable; derived data (BSGS, element table, masks) is computed
    on first use and cached.
    """

    def __init__(self, degree: int, generators: Iterable = (), *, parent: "Group | None" = None,
                 name: str | None = None):
        if not isinstance(degree, int) or degree < 1:
            raise ValueError(f"degree must be a positive integer, got {degree!r}")
        gens = tuple(_coerce_perm(g, degree) for g in generators)
        for g in gens:
            if g.degree != degree:
                raise DegreeMismatch(f"generator {g} has degree {g.degree}, expected {degree}")
        if parent is not None:
            if parent.degree != degree:
                raise DegreeMismatch(f"parent degree {parent.degree} != {degree}")
            for g in gens:
                if g not in parent:
                    raise NotASubgroup(f"generator {g} is not an element of the parent group")
        self.degree = degree
        self.generators = gens
        self.parent = parent
        self.name = name
        self._root = parent._root if parent is not None else self
        self._known_mask: int | None = None
        if parent is None:
            config.check_order(self.order)

    @classmethod
    def _from_mask(cls, ambient: "Group", mask: int, name: str | None = None) -> "Group":
        t = ambient._root.table
        g = object.__new__(cls)
        g.degree = ambient.degree
        g.generators = tuple(t.perm(i) for i in t.gens_of(mask))
        g.parent = ambient
        g.name = name
        g._root = ambient._root
        g._known_mask = mask
        return g

    # structure -----------------------------------------------------------
    @property
    def root(self) -> "Group":
        return self._root

    @cached_property
    def _bsgs(self):
        return schreier_sims(self.degree, [g._img for g in self.generators])

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(b + 1 for b in self._bsgs[0])

    @property
    def strong_generators(self) -> tuple[Permutation, ...]:
        seen = {}
        for level in self._bsgs[1]:
            for s in level:
                seen.setdefault(s, None)
        return tuple(Permutation._raw(s) for s in seen)

    @property
    def basic_orbit_sizes(self) -> tuple[int, ...]:
        return tuple(len(t) for t in self._bsgs[2])

    @cached_property
    def order(self) -> int:
        if self._known_mask is not None:
            return popcount(self._known_mask)
        if self._root is not self and self._root.order <= config.get_caps().max_order:
            return popcount(self.mask)
        return math.prod(self.basic_orbit_sizes)

    def __len__(self) -> int:
        return self.order

    @cached_property
    def table(self) -> ElementTable:
        if self._root is not self:
            return self._root.table
        return ElementTable(self)

    @cached_property
    def mask(self) -> int:
        """Bitmask of this group's elements in the root's element table."""
        if self._known_mask is not None:
            return self._known_mask
        t = self._root.table
        if self._root is self:
            return t.full
        return t.generate([t.index[g._img] for g in self.generators])

    def _enumerate_raw(self) -> list[tuple]:
        base, _, trans = self._bsgs
        elems = [tuple(range(self.degree))]
        for level in reversed(range(len(base))):
            us = list(trans[level].values())
            elems = [compose_raw(x, u) for x in elems for u in us]
        return elems

    # membership ----------------------------------------------------------
    def sift(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise DegreeMismatch(f"permutation degree {p.degree} != group degree {self.degree}")
        base, _, trans = self._bsgs
        h, j = _sift(p._img, base, trans)
        return j == len(base) and h == tuple(range(self.degree))

    def __contains__(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise DegreeMismatch(f"permutation degree {p.degree} != group degree {self.degree}")
        root = self._root
        if "table" in root.__dict__:
            i = root.table.index.get(p._img)
            return i is not None and bool((self.mask >> i) & 1)
        return self.sift(p)

    # elements ------------------------------------------------------------
    def elements(self) -> tuple[Permutation, ...]:
        t = self._root.table
        return tuple(t.perm(i) for i in bits(self.mask))

    def __iter__(self):
        return iter(self.elements())

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_abelian(self) -> bool:
        gs = self.generators
        return all(a * b == b * a for i, a in enumerate(gs) for b in gs[i + 1:])

    # comparisons ---------------------------------------------------------
    def is_subgroup_of(self, other: "Group") -> bool:
        if self.degree != other.degree:
            return False
        if self._root is other._root and "table" in self._root.__dict__:
            return self.mask & ~other.mask == 0
        return all(g in other for g in self.generators)

    __le__ = is_subgroup_of

    def __lt__(self, other: "Group") -> bool:
        return self.is_subgroup_of(other) and self.order < other.order

    def __eq__(self, other) -> bool:
        if not isinstance(other, Group):
            return NotImplemented
        if self is other:
            return True
        return (self.degree == other.degree and self.order == other.order
                and self.is_subgroup_of(other))

    def __hash__(self) -> int:
        return hash((self.degree, self.order))

    def label(self) -> str:
        if self.name:
            return self.name
        gens = ", ".join(g.cycle_string() for g in self.generators) or "()"
        return f"<{gens}>"

    def __repr__(self) -> str:
        return f"Group(order={self.order}, degree={self.degree}, gens=[{', '.join(map(str, self.generators))}])"


def group_from_generators(degree: int, gens: Iterable = (), name: str | None = None) -> Group:
    return Group(degree, gens, name=name)


def membership_test(G: Group, p: Permutation) -> bool:
    return G.sift(p)


def subgroup(G: Group, gens: Iterable, name: str | None = None) -> Group:
    """Subgroup of ``G`` generated by ``gens`` (Permutations or cycle strings)."""
    return Group(G.degree, gens, parent=G, name=name)


def mask_in(ambient: Group, S: Group) -> int:
    """Mask of ``S`` in ``ambient``'s root table; raises unless ``S <= ambient``."""
    if S.degree != ambient.degree:
        raise DegreeMismatch(f"degrees {S.degree} and {ambient.degree} differ")
    t = ambient._root.table
    if S._root is ambient._root:
        m = S.mask
    else:
        try:
            m = t.generate([t.index[g._img] for g in S.generators])
        except KeyError:
            raise NotASubgroup("subgroup is not contained in the ambient group") from None
    if m & ~ambient.mask:
        raise NotASubgroup("subgroup is not contained in the ambient group")
    return m


def join(G: Group, A: Group, B: Group) -> Group:
    t = G.table
    return Group._from_mask(G, t.join(mask_in(G, A), mask_in(G, B)))


def _common_ambient(A: Group, B: Group) -> Group:
    if A.degree != B.degree:
        raise DegreeMismatch(f"degrees {A.degree} and {B.degree} differ")
    if A._root is B._root:
        return A._root
    if A.is_subgroup_of(B):
        return B
    if B.is_subgroup_of(A):
        return A
    raise NotASubgroup("groups share no common parent")


def intersect(A: Group, B: Group) -> Group:
    amb = _common_ambient(A, B)
    parent = A.parent if A.parent is not None and A.parent is B.parent else amb
    return Group._from_mask(parent, mask_in(amb, A) & mask_in(amb, B))


def normal_closure(G: Group, S: Group) -> Group:
    t = G.table
    return Group._from_mask(G, t.normal_closure(G.mask, mask_in(G, S)))


def commutator_subgroup(H: Group, G: Group) -> Group:
    """``[H, G]``, generated by all ``h^-1 g^-1 h g``; normal in ``G``."""
    t = G.table
    return Group._from_mask(G, t.commutator_subgroup(mask_in(G, H), G.mask))


def is_normal(N: Group, G: Group) -> bool:
    return G.table.is_normal(mask_in(G, N), G.mask)


def conjugacy_classes(G: Group) -> list[tuple[Permutation, ...]]:
    t = G.table
    gens = t.gens_of(G.mask)
    seen = 0
    classes = []
    for x in bits(G.mask):
        if (seen >> x) & 1:
            continue
        orbit = [x]
        om = 1 << x
        for y in orbit:
            for g in gens:
                z = t.conj(y, g)
                if not (om >> z) & 1:
                    om |= 1 << z
                    orbit.append(z)
        seen |= om
        classes.append(tuple(t.perm(i) for i in sorted(orbit)))
    classes.sort(key=lambda c: (len(c), c[0]))
    return classes


# ---------------------------------------------------------------------------
# quotients
# ---------------------------------------------------------------------------

class Morphism:
    """The natural epimorphism ``G -> G/N`` realised on the right cosets of ``N``."""

    def __init__(self, source: Group, kernel: Group):
        t = source.table
        g_mask = source.mask
        n_mask = mask_in(source, kernel)
        if not t.is_normal(n_mask, g_mask):
            raise NotNormal("kernel is not normal in the source group")
        n_elems = bits(n_mask)
        coset_of: dict[int, int] = {}
        reps: list[int] = []
        for x in bits(g_mask):
            if x in coset_of:
                continue
            c = len(reps)
            reps.append(x)
            rx = t.row(x)
            for n in n_elems:
                coset_of[rx[n]] = c
        m = len(reps)
        images = []
        for r in reps:
            rr = t.row(r)
            images.append(tuple(coset_of[rr[reps[d]]] for d in range(m)))
        self.source = source
        self.kernel = Group._from_mask(source, n_mask)
        self._coset_of = coset_of
        self._coset_images = images
        gens = [Permutation._raw(images[coset_of[t.index[g._img]]]) for g in source.generators]
        src_name = source.name or "G"
        self.target = Group(m, gens, name=f"{src_name}/N{popcount(n_mask)}")
        self.generator_images = tuple(self.target.generators)

    def image(self, p: Permutation) -> Permutation:
        t = self.source.table
        i = t.index.get(p._img)
        if i is None or i not in self._coset_of:
            raise NotASubgroup(f"{p} is not an element of the source group")
        return Permutation._raw(self._coset_images[self._coset_of[i]])

    __call__ = image

    def project_mask(self, sm: int) -> int:
        """Image in the target's table of a subgroup mask of the source."""
        t = self.source.table
        tt = self.target.table
        return tt.generate([tt.index[self._coset_images[self._coset_of[i]]] for i in t.gens_of(sm)])

    def project(self, S: Group, name: str | None = None) -> Group:
        return Group._from_mask(self.target, self.project_mask(mask_in(self.source, S)), name=name)

    def lift(self, T: Group, name: str | None = None) -> Group:
        tm = mask_in(self.target, T)
        tt = self.target.table
        ok = {c for c, im in enumerate(self._coset_images) if (tm >> tt.index[im]) & 1}
        mask = mask_of(i for i, c in self._coset_of.items() if c in ok)
        return Group._from_mask(self.source, mask, name=name)

    def __repr__(self) -> str:
        return f"Morphism(|source|={self.source.order}, |kernel|={self.kernel.order}, |target|={self.target.order})"


def quotient_by(G: Group, N: Group) -> Morphism:
    return Morphism(G, N)


def transport(m: Morphism, S: Group, direction: str) -> Group:
    if direction == "project":
        return m.project(S)
    if direction == "lift":
        return m.lift(S)
    raise ValueError(f"direction must be 'project' or 'lift', got {direction!r}")
