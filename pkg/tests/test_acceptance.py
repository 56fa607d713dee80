"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

The lines are printed immediately (visible with ``-s``) and repeated in the
pytest terminal summary.  Run directly with ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import functools
import json
import math
import subprocess
import sys
import time
from collections import Counter

import pytest

from capcheck.catalogue import default_manifest
from capcheck.chief import chief_series_masks, is_pCAP, u_hypercenter, u_hypercenter_oracle
from capcheck.group import Group, Morphism, popcount
from capcheck.icpc import icpc_witness_mask
from capcheck.lattice import has_normal_p_complement, is_p_nilpotent, normal_masks, normal_subgroups, subgroup_masks
from capcheck.oracles import closure_order, closure_pair_count
from capcheck.util import prime_factors

RESULTS: dict[int, tuple[str, str, str]] = {}
TIME_LIMIT = 600.0


def criterion(number: int, title: str):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs) or ""
            except BaseException as exc:
                RESULTS[number] = ("FAIL", title, f"{type(exc).__name__}: {exc}".splitlines()[0][:160])
                print(f"\nACCEPTANCE {number} FAIL  {title}: {RESULTS[number][2]}")
                raise
            RESULTS[number] = ("PASS", title, detail)
            print(f"\nACCEPTANCE {number} PASS  {title}  {detail}")
        return run
    return wrap


def _sweep(tmp_dir) -> tuple[dict, float, int]:
    out = tmp_dir / "report.json"
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "capcheck.cli", "theorem", "all", "--catalogue", "default",
                           "--out", str(out)], capture_output=True, text=True)
    elapsed = time.perf_counter() - start
    return json.loads(out.read_text()), elapsed, proc.returncode


@pytest.fixture(scope="module")
def sweep(tmp_path_factory):
    return _sweep(tmp_path_factory.mktemp("sweep"))


@pytest.fixture(scope="module")
def catalogue():
    m = default_manifest()
    return [(e, m.build(e)) for e in m.entries]


def _strip_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timing"}


@criterion(1, "theorem sweep over the default catalogue: zero violations, under 10 minutes")
def test_criterion_1_sweep(sweep):
    report, elapsed, code = sweep
    statuses = Counter(i["status"] for i in report["instances"])
    assert code == 0, f"exit code {code}"
    assert statuses["violation"] == 0
    assert statuses["indeterminate"] == 0
    ids = {i["theorem"] for i in report["instances"]}
    assert ids >= {"thm31", "corU", "thmPnil", "lemma21a", "lemma21b", "lemma21c", "lemma22",
                   "lemma5U", "lemma6U", "lemma7", "minNonPnil"}
    assert elapsed < TIME_LIMIT
    return f"({len(report['instances'])} instances, {len(report['catalogue'])} groups, {elapsed:.1f}s)"


@criterion(2, "non-vacuity and sharpness instances")
def test_criterion_2_nonvacuity(sweep):
    report = sweep[0]
    inst = report["instances"]

    def pick(tid, group, key, order):
        return [i for i in inst if i["theorem"] == tid and i["group"] == group and i["params"][key]["order"] == order]

    for tid in ("thm31", "thmPnil"):
        assert any(i["theorem"] == tid and i["hypothesis"] and i["conclusion"] for i in inst), tid
    [s3] = pick("thm31", "S3", "P", 3)
    assert (s3["hypothesis"], s3["conclusion"], s3["status"]) == (True, True, "ok")
    [s3e] = pick("thmPnil", "S3", "E", 6)
    assert (s3e["hypothesis"], s3e["conclusion"], s3e["status"]) == (True, True, "ok")
    [s4] = pick("thm31", "S4", "P", 4)
    assert (s4["hypothesis"], s4["conclusion"], s4["status"]) == (False, False, "vacuous")
    for group in ("SL23", "A4"):
        [e] = pick("thmPnil", group, "E", {"SL23": 24, "A4": 12}[group])
        assert (e["hypothesis"], e["conclusion"], e["status"]) == (False, False, "vacuous"), group
    return "(S3 ok; S4/V4, SL23, A4 vacuous with both sides false)"


@criterion(3, "oracle equivalences for every catalogue group of order <= 100")
def test_criterion_3_oracles(catalogue):
    checked = 0
    for entry, G in catalogue:
        if G.order > 100:
            continue
        assert closure_order(G) == G.order, f"{entry.name}: order"
        assert u_hypercenter(G) == u_hypercenter_oracle(G), f"{entry.name}: Z_U"
        for p in prime_factors(G.order):
            assert is_p_nilpotent(G, p) == has_normal_p_complement(G, p), f"{entry.name}: {p}-nilpotent"
        assert len(subgroup_masks(G.table, G.mask)) == closure_pair_count(G), f"{entry.name}: subgroups"
        checked += 1
    return f"({checked} groups)"


@criterion(4, "chief factor multisets agree across enumerated chief series")
def test_criterion_4_jordan_holder(catalogue):
    multi = 0
    for entry, G in catalogue:
        series, _ = chief_series_masks(G.table, G.mask, 1000)
        if len(series) < 2:
            continue
        multi += 1
        shapes = {tuple(sorted(popcount(b) // popcount(a) for a, b in zip(s, s[1:]))) for s in series}
        assert len(shapes) == 1, entry.name
    return f"({multi} groups with two or more series)"


@criterion(5, "every normal subgroup is p-CAP for every prime divisor")
def test_criterion_5_normals_pcap(catalogue):
    pairs = 0
    for entry, G in catalogue:
        for N in normal_subgroups(G):
            for p in prime_factors(G.order):
                assert is_pCAP(N, G, p), (entry.name, N.order, p)
                pairs += 1
    return f"({pairs} (N, p) pairs)"


@criterion(6, "ICPC passes to quotients by coprime normal subgroups, |G| <= 100")
def test_criterion_6_icpc_quotients(catalogue):
    tuples = 0
    for entry, G in catalogue:
        if G.order > 100:
            continue
        t = G.table
        g = G.mask
        subs = subgroup_masks(t, g)
        for n in normal_masks(t, g):
            if n == t.trivial:
                continue
            coprime = [h for h in subs if math.gcd(popcount(h), popcount(n)) == 1]
            if not coprime:
                continue
            m = Morphism(G, Group._from_mask(G, n))
            tt = m.target.table
            for p in prime_factors(G.order):
                for h in coprime:
                    if icpc_witness_mask(t, h, g, p) is None:
                        continue
                    tuples += 1
                    assert icpc_witness_mask(tt, m.project_mask(h), tt.full, p) is not None, \
                        (entry.name, popcount(h), popcount(n), p)
    return f"({tuples} tuples)"


@criterion(7, "pinned vectors in the JSON report")
def test_criterion_7_pinned(sweep):
    report = sweep[0]
    cat = {c["name"]: c for c in report["catalogue"]}
    assert cat["S4"]["normal_orders"] == [1, 4, 12, 24]
    assert cat["SL23"]["chief_factor_orders"] == [2, 4, 3]
    probes = {(p["group"], p["probe"]): p for p in report["probes"]}
    pcap = probes[("S4", "pcap")]
    assert (pcap["subgroup"], pcap["p"], pcap["result"]) == (["(1 2)"], 2, True)
    icpc = probes[("SL23", "icpc")]
    assert icpc["result"] is False and icpc["certificate"]["factor_order"] == 4
    mined = probes[("S4", "minNonPnil")]["result"]
    assert len(mined) == 1 and mined[0]["order"] == 12
    s = mined[0]["structure"]
    assert all(s[k] for k in ("two_primes", "sylow_p_normal", "sylow_q_cyclic", "Kp_is_nilpotent_residual",
                              "frattini_Kp_central", "Kp_mod_frattini_chief", "exponent_ok"))
    return "(S4 normals, SL23 factors, pCAP/ICPC probes, A4 mined)"


@criterion(8, "two consecutive runs give identical reports apart from timing")
def test_criterion_8_determinism(sweep, tmp_path):
    again, _, _ = _sweep(tmp_path)
    first = json.dumps(_strip_timing(sweep[0]), sort_keys=True)
    second = json.dumps(_strip_timing(again), sort_keys=True)
    assert first == second
    return f"({len(first)} bytes compared)"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
