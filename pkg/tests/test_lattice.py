from __future__ import annotations

import pytest

from capcheck.catalogue import builtin_group
from capcheck.group import subgroup
from capcheck.lattice import (
    all_subgroups, center, centralizer, characteristic_subgroup, exponent, fitting_subgroup,
    frattini_subgroup, group_predicate, has_normal_p_complement, is_p_nilpotent, is_supersolvable,
    maximal_subgroups, minimal_normal_subgroups, normal_subgroups, normal_subgroups_by_lattice,
    normalizer, sylow_subgroup,
)
from capcheck.oracles import closure_pair_count


@pytest.mark.parametrize("name", ["C6", "S4", "Q8", "D8", "C2xC2", "SL23", "C3:C4"])
def test_subgroup_count_matches_closure_pairs(name):
    G = builtin_group(name)
    assert len(all_subgroups(G).subgroups) == closure_pair_count(G)


def test_subgroup_counts_frozen():
    # values taken from the closure-pair oracle above
    assert {n: len(all_subgroups(builtin_group(n)).subgroups) for n in ("C6", "S4", "Q8")} == {"C6": 4, "S4": 30, "Q8": 6}


def test_lattice_views(S4):
    L = all_subgroups(S4)
    assert L.orders() == sorted(L.orders())
    assert [N.order for N in L.normal()] == [1, 4, 12, 24]
    assert sorted(M.order for M in L.maximal()) == [6, 6, 6, 6, 8, 8, 8, 12]


@pytest.mark.parametrize("name", ["S4", "SL23", "C2xC2", "D12", "S3xS3", "C2xA4"])
def test_normals_match_lattice_filter(name):
    G = builtin_group(name)
    assert normal_subgroups(G) == normal_subgroups_by_lattice(G)


def test_normal_subgroups(S4, SL23):
    assert [N.order for N in normal_subgroups(S4)] == [1, 4, 12, 24]
    assert [N.order for N in normal_subgroups(SL23)] == [1, 2, 8, 24]
    C12 = builtin_group("C12")
    assert len(normal_subgroups(C12)) == len(all_subgroups(C12).subgroups)


def test_maximal_and_minimal_normal(S4, Q8):
    assert {M.order for M in maximal_subgroups(S4)} == {12, 8, 6}
    assert [M.order for M in maximal_subgroups(Q8)] == [4, 4, 4]
    assert [M.order for M in maximal_subgroups(builtin_group("C7"))] == [1]
    assert [N.order for N in minimal_normal_subgroups(S4)] == [4]
    assert [N.order for N in minimal_normal_subgroups(builtin_group("C2xC2"))] == [2, 2, 2]
    A5 = builtin_group("A5")
    assert minimal_normal_subgroups(A5) == [A5]


def test_sylow(S4, SL23):
    assert sylow_subgroup(S4, 2).order == 8
    assert sylow_subgroup(SL23, 3).order == 3
    assert sylow_subgroup(S4, 5).order == 1


def test_characteristic_subgroups(S3, S4, Q8):
    assert center(S3).order == 1
    assert fitting_subgroup(S3).order == 3
    assert frattini_subgroup(Q8) == center(Q8) and center(Q8).order == 2
    assert characteristic_subgroup(S4, "p_residual", 2).order == 12
    assert fitting_subgroup(S4).order == 4
    assert characteristic_subgroup(S4, "hypercenter").order == 1
    assert characteristic_subgroup(S4, "derived").order == 12
    assert characteristic_subgroup(builtin_group("S5"), "generalized_fitting").order == 60
    with pytest.raises(ValueError):
        characteristic_subgroup(S4, "p_core")
    with pytest.raises(ValueError):
        characteristic_subgroup(S4, "nonsense")


def test_frattini_is_intersection_of_maximals(Q8, S4):
    for G in (Q8, S4, builtin_group("C8"), builtin_group("D16")):
        inter = G.mask
        for M in maximal_subgroups(G):
            inter &= M.mask
        assert frattini_subgroup(G).mask == inter


def test_predicates(S3, S4, SL23):
    assert is_p_nilpotent(S3, 2)
    assert not is_p_nilpotent(S4, 2)
    assert is_p_nilpotent(SL23, 3)
    assert not is_supersolvable(S4)
    assert group_predicate(builtin_group("D8"), "nilpotent")
    assert not group_predicate(builtin_group("A5"), "solvable")
    with pytest.raises(ValueError):
        group_predicate(S4, "p_nilpotent")


@pytest.mark.parametrize("name", ["S3", "S4", "SL23", "A4", "C3:C4", "C7:C3", "S3xS3", "A5"])
def test_p_nilpotent_matches_complement_search(name):
    G = builtin_group(name)
    for p in (2, 3, 5, 7):
        if G.order % p == 0:
            assert is_p_nilpotent(G, p) == has_normal_p_complement(G, p)


def test_centralizer_normalizer(S4, Q8):
    A4 = normal_subgroups(S4)[2]
    assert normalizer(S4, A4) == S4
    Z = center(Q8)
    assert centralizer(Q8, Z) == Q8
    P3 = subgroup(S4, ["(1 2 3)"])
    assert normalizer(S4, P3).order == 6


def test_exponent():
    assert exponent(builtin_group("Q8")) == 4
    assert exponent(builtin_group("E8")) == 2
    assert exponent(builtin_group("S4")) == 12
