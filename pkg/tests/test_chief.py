from __future__ import annotations

import pytest

from capcheck.catalogue import builtin_group
from capcheck.chief import (
    ChiefFactor, CoverAvoid, chief_factor_pairs, chief_series, chief_series_enumerate, cover_avoid,
    is_pCAP, is_semiCAP, is_u_central_factor, pcap_violation, semicap_witness, u_hypercenter,
    u_hypercenter_oracle,
)
from capcheck.group import subgroup
from capcheck.lattice import all_subgroups, normal_subgroups


def factor_by_orders(G, above, below):
    return next(f for f in chief_factor_pairs(G) if f.above.order == above and f.below.order == below)


def test_chief_pairs(S4, SL23):
    assert sorted(f.factor_order for f in chief_factor_pairs(S4)) == [2, 3, 4]
    assert [(f.below.order, f.above.order) for f in chief_factor_pairs(SL23)] == [(1, 2), (2, 8), (8, 24)]
    A5 = builtin_group("A5")
    assert [f.label() for f in chief_factor_pairs(A5)] == ["60/1"]


def test_chief_pairs_match_normal_pair_filter():
    for name in ("S4", "C2xS3", "D8", "C3xA4"):
        G = builtin_group(name)
        normals = normal_subgroups(G)
        brute = set()
        for K in normals:
            for H in normals:
                if K.mask & H.mask == K.mask and K != H and not any(
                        M != K and M != H and K.mask & M.mask == K.mask and M.mask & H.mask == M.mask for M in normals):
                    brute.add((K.mask, H.mask))
        assert {(f.below_mask, f.above_mask) for f in chief_factor_pairs(G)} == brute


def test_series_counts(SL23):
    assert len(chief_series_enumerate(builtin_group("C5"))) == 1
    assert len(chief_series_enumerate(SL23)) == 1
    assert len(chief_series_enumerate(builtin_group("C2xC2"))) == 3
    assert chief_series(SL23).factor_orders() == (2, 4, 3)


def test_series_limit():
    series = chief_series_enumerate(builtin_group("E8"), limit=5)
    assert len(series) == 5


def test_cover_avoid(S4, A4, V4_in_S4):
    t = subgroup(S4, ["(1 2)"])
    assert cover_avoid(t, factor_by_orders(S4, 4, 1)) is CoverAvoid.AVOIDS
    assert cover_avoid(t, factor_by_orders(S4, 24, 12)) is CoverAvoid.COVERS
    assert cover_avoid(subgroup(A4, ["(1 2)(3 4)"]), factor_by_orders(A4, 4, 1)) is CoverAvoid.NEITHER
    for f in chief_factor_pairs(S4):
        assert cover_avoid(S4, f) is CoverAvoid.COVERS
        assert cover_avoid(subgroup(S4, []), f) is CoverAvoid.AVOIDS


def test_cover_avoid_by_set_arithmetic(S4):
    # covers: H <= AK as element sets; avoids: A ∩ H <= K
    els = {e._img: e for e in S4.elements()}
    for A in all_subgroups(S4).subgroups:
        a = set(x._img for x in A.elements())
        for f in chief_factor_pairs(S4):
            k = set(x._img for x in f.below.elements())
            h = set(x._img for x in f.above.elements())
            ak = {(els[x] * els[y])._img for x in a for y in k}
            expect = CoverAvoid.AVOIDS if a & h <= k else CoverAvoid.COVERS if h <= ak else CoverAvoid.NEITHER
            assert cover_avoid(A, f) is expect


def test_pcap(S4, SL23, order4_in_SL23):
    assert is_pCAP(subgroup(S4, ["(1 2)"]), S4, 2)
    v = pcap_violation(order4_in_SL23, SL23, 2)
    assert v is not None and (v.above.order, v.below.order) == (8, 2)
    for G in (S4, SL23):
        for N in normal_subgroups(G):
            assert all(is_pCAP(N, G, p) for p in (2, 3))


def test_semicap(A4):
    C6 = builtin_group("C6")
    assert all(is_semiCAP(H, C6) for H in all_subgroups(C6).subgroups)
    for N in normal_subgroups(A4):
        assert is_semiCAP(N, A4)
    assert not is_semiCAP(subgroup(A4, ["(1 2)(3 4)"]), A4)
    w = semicap_witness(subgroup(A4, ["(1 2 3)"]), A4)
    assert w is not None and w.factor_orders() == (4, 3)


@pytest.mark.parametrize("name,order", [("S3", 6), ("D8", 8), ("Q8", 8), ("S4", 1), ("A4", 1),
                                        ("C6xS4", 6), ("C30", 30), ("A4xC3", 3), ("SL23", 2)])
def test_u_hypercenter(name, order):
    G = builtin_group(name)
    Z = u_hypercenter(G)
    assert Z == u_hypercenter_oracle(G)
    assert Z.order == order


def test_u_central_factor(S4):
    assert [is_u_central_factor(f) for f in sorted(chief_factor_pairs(S4), key=lambda f: f.factor_order)] == [True, True, False]


def test_factor_as_dict(SL23):
    f = ChiefFactor(SL23, *next((x.below_mask, x.above_mask) for x in chief_factor_pairs(SL23) if x.factor_order == 4))
    d = f.as_dict()
    assert d["factor_order"] == 4 and d["above_order"] == 8
