from __future__ import annotations

import pytest

from capcheck import config
from capcheck.catalogue import builtin_spec, builtin_group
from capcheck.theorems import (
    CampaignOptions, TheoremInstance, check_corollary_U, check_theorem_31, check_theorem_pnilpotent,
    expand_selection, lemma_suite, LemmaOptions, mine_min_non_p_nilpotent, run_campaign, status_of,
)


def find(instances, **params):
    out = []
    for i in instances:
        ok = True
        for k, v in params.items():
            got = i.parameters.get(k)
            if isinstance(got, dict):
                got = got.get("order")
            ok &= got == v
        if ok:
            out.append(i)
    return out


def test_status_rule():
    assert status_of(True, False) == "violation"
    assert status_of(False, False) == "vacuous"
    assert status_of(False, True) == "vacuous"
    assert status_of(True, True) == "ok"
    assert status_of(None, True) == "indeterminate"
    i = TheoremInstance("thm31", "X", {}, False, False)
    assert i.status == "vacuous" and i.sharp


def test_thm31_examples(S3, S4):
    [i] = find(check_theorem_31(S3), p=3, P=3)
    assert (i.hypothesis, i.conclusion, i.status) == (True, True, "ok")
    [i] = find(check_theorem_31(S4), p=2, P=4)
    assert (i.hypothesis, i.conclusion, i.status) == (False, False, "vacuous")


def test_thm31_abelian_all_ok():
    for name in ("C12", "C2xC2xC4", "E9"):
        assert {i.status for i in check_theorem_31(builtin_group(name))} == {"ok"}


def test_corollary_examples(S4, A4):
    assert {i.status for i in check_corollary_U(builtin_group("D12"))} == {"ok"}
    [i] = find(check_corollary_U(S4), N=12)
    assert (i.hypothesis, i.conclusion) == (False, False)
    [i] = find(check_corollary_U(A4), N=4)
    assert (i.hypothesis, i.conclusion) == (False, False)


def test_pnilpotent_examples(S3, SL23, A4):
    [i] = find(check_theorem_pnilpotent(S3), E=6)
    assert (i.parameters["p"], i.status) == (2, "ok") and i.hypothesis
    for G in (SL23, A4):
        [i] = find(check_theorem_pnilpotent(G), E=G.order)
        assert (i.hypothesis, i.conclusion, i.status) == (False, False, "vacuous")


def test_mine_min_non_p_nilpotent(S3, S4, SL23):
    assert mine_min_non_p_nilpotent(S3, 2) == []
    [(K, rep)] = mine_min_non_p_nilpotent(S4, 2)
    assert K.order == 12 and rep["exponent_Kp"] == 2
    [(K, rep)] = mine_min_non_p_nilpotent(SL23, 2)
    assert K == SL23 and rep["exponent_Kp"] == 4 and rep["q"] == 3
    for report in (rep, mine_min_non_p_nilpotent(S4, 2)[0][1]):
        assert all(v for k, v in report.items() if k not in ("order", "q", "exponent_Kp"))


def test_lemma_examples(S3, S4):
    out = {(i.theorem_id, i.parameters.get("p")): i for i in lemma_suite(S4)}
    assert out[("lemma7", 2)].status == "ok" and out[("lemma7", 2)].parameters["qualifying"] > 0
    assert out[("lemma21a", 2)].status == "ok"
    out = {(i.theorem_id, i.parameters.get("p")): i for i in lemma_suite(S3)}
    assert out[("lemma6U", None)].status == "ok"


def test_lemma_sampling_is_recorded():
    opts = LemmaOptions(exhaustive_order=10, sample_threshold=5, seed=7)
    inst = lemma_suite(builtin_group("C2xD8"), ("lemma21b",), opts)
    assert inst and all(i.parameters["sampled"] and i.parameters["sample_seed"] == 7 for i in inst)
    assert all(i.parameters["candidates"] > 5 and i.parameters["qualifying"] <= 5 for i in inst)
    again = lemma_suite(builtin_group("C2xD8"), ("lemma21b",), opts)
    assert [i.as_dict() for i in inst] == [i.as_dict() for i in again]


def test_selection():
    assert expand_selection("all")[0] == "thm31"
    assert expand_selection(["lemma7", "thm31"]) == ("thm31", "lemma7")
    with pytest.raises(ValueError):
        expand_selection([])
    with pytest.raises(ValueError):
        expand_selection(["nope"])


def test_campaign_small():
    r = run_campaign([builtin_spec("SL23")], CampaignOptions(selection=("thmPnil",)))
    assert any(i.status == "vacuous" and i.parameters["E"]["order"] == 24 for i in r.instances)
    assert r.to_dict(include_timing=False)["catalogue"][0]["chief_factor_orders"] == [2, 4, 3]
    with pytest.raises(ValueError):
        run_campaign([])


def test_campaign_ordering_and_recount():
    specs = [builtin_spec(n) for n in ("S4", "C6", "Q8")]
    r = run_campaign(specs)
    keys = [i.sort_key() for i in r.instances]
    assert keys == sorted(keys)
    per_group = sum(len(run_campaign([s]).instances) for s in specs)
    assert per_group == len(r.instances)


def test_cap_makes_instances_indeterminate():
    with config.caps_override(lattice_cap=10):
        r = run_campaign([builtin_spec("S4")], CampaignOptions(selection=("minNonPnil", "lemma22")))
    assert r.indeterminate and not r.violations
    assert all(i.status == "indeterminate" for i in r.instances)


def test_parallel_matches_serial():
    specs = [builtin_spec(n) for n in ("S3", "A4", "D8")]
    a = run_campaign(specs, CampaignOptions(jobs=1)).to_dict(include_timing=False)
    b = run_campaign(specs, CampaignOptions(jobs=2)).to_dict(include_timing=False)
    a["options"].pop("jobs"), b["options"].pop("jobs")
    assert a == b
