"""Hypothesis => conclusion checks swept over a catalogue of groups.

Theorem ids::

    thm31       normal p-subgroup P whose order-p (and order-4) cyclic subgroups
                are ICPC or have a supersolvable supplement lies in Z_U(G)
    corU        U-instance of the corollary: G/N supersolvable, N solvable,
                targets of non-cyclic Sylows of F(N) ICPC/supplemented => G in U
    thmPnil     targets of a Sylow p-subgroup of E (p = min pi(E)) ICPC => E p-nilpotent
    minNonPnil  structure of minimal non-p-nilpotent subgroups
    lemma21a    normal subgroups are p-CAP
    lemma21b    N <= H, H p-CAP  =>  H/N p-CAP in G/N
    lemma21c    H p-CAP, (|H|,|N|) = 1  =>  HN/N p-CAP in G/N
    lemma22     H ICPC, (|H|,|N|) = 1  =>  HN/N ICPC in G/N
    lemma5U     F*(E) <= Z_U(G)  =>  E <= Z_U(G)
    lemma6U     G/N in U and N <= Z_U(G)  =>  G in U
    lemma7      M maximal, Q a normal p-subgroup, MQ = G  =>  Q ∩ M normal

Theorem checks never sample.  Lemma checks are aggregated per (group, lemma,
prime): the hypothesis records whether any qualifying tuple exists and the
conclusion whether all of them satisfy the lemma.  Above ``exhaustive_order``
a lemma with more than ``sample_threshold`` candidate tuples is sampled with a
seeded RNG, and the sampling is recorded in the instance parameters.
"""
from __future__ import annotations

import json
import math
import random
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from . import __version__, config
from .catalogue import GroupSpec
from .chief import chief_series_masks, pcap_violation_mask, u_hypercenter_mask
from .errors import CapExceeded
from .group import ElementTable, Group, Morphism, bits, popcount
from .icpc import icpc_witness_mask, supplement_mask, target_masks
from .lattice import (
    center_mask, chief_pair_masks, frattini_mask, generalized_fitting_mask, fitting_mask,
    is_p_nilpotent_mask, is_solvable_mask, is_supersolvable_mask, maximal_masks, normal_masks,
    p_core_mask, sylow_mask, subgroup_masks,
)
from .util import is_prime, p_part, prime_factors

THEOREM_IDS = ("thm31", "corU", "thmPnil", "minNonPnil")
LEMMA_IDS = ("lemma21a", "lemma21b", "lemma21c", "lemma22", "lemma5U", "lemma6U", "lemma7")
ALL_IDS = THEOREM_IDS + LEMMA_IDS

OK, VIOLATION, VACUOUS, INDETERMINATE = "ok", "violation", "vacuous", "indeterminate"


def status_of(hypothesis, conclusion) -> str:
    if hypothesis is None or conclusion is None:
        return INDETERMINATE
    if not hypothesis:
        return VACUOUS
    return OK if conclusion else VIOLATION


@dataclass
class TheoremInstance:
    theorem_id: str
    group_name: str
    parameters: dict
    hypothesis: bool | None
    conclusion: bool | None
    status: str = ""
    witness: dict | None = None
    certificate: dict | None = None

    def __post_init__(self):
        if not self.status:
            self.status = status_of(self.hypothesis, self.conclusion)

    @property
    def sharp(self) -> bool:
        """Hypothesis and conclusion both false: the check is not tautological here."""
        return self.hypothesis is False and self.conclusion is False

    def as_dict(self) -> dict:
        d = {"theorem": self.theorem_id, "group": self.group_name, "params": self.parameters,
             "hypothesis": self.hypothesis, "conclusion": self.conclusion, "status": self.status}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.certificate is not None:
            d["certificate"] = self.certificate
        return d

    def sort_key(self):
        return (self.group_name, ALL_IDS.index(self.theorem_id) if self.theorem_id in ALL_IDS else 99,
                json.dumps(self.parameters, sort_keys=True))


def describe(t: ElementTable, m: int) -> dict:
    """Stable description of a subgroup mask: order and a generating set."""
    return {"order": popcount(m), "gens": [t.perm(i).cycle_string() for i in t.gens_of(m)]}


def _name(G: Group) -> str:
    return G.name or G.label()


def _is_p_group(m: int, p: int) -> bool:
    n = popcount(m)
    return n > 1 and p_part(n, p) == n


def _indeterminate(theorem_id: str, G: Group, exc: Exception, params: dict | None = None) -> TheoremInstance:
    return TheoremInstance(theorem_id, _name(G), dict(params or {}, error=str(exc)), None, None)


# ---------------------------------------------------------------------------
# theorems
# ---------------------------------------------------------------------------

def _target_ok(t, x, g, p, allow_supplement: bool) -> str | None:
    """How target ``x`` meets the hypothesis: 'icpc', 'supplement' or None."""
    if icpc_witness_mask(t, x, g, p) is not None:
        return "icpc"
    if allow_supplement and supplement_mask(t, x, g) is not None:
        return "supplement"
    return None


def check_theorem_31(G: Group) -> list[TheoremInstance]:
    t = G.table
    g = G.mask
    out = []
    zu = u_hypercenter_mask(t, g)
    for p in prime_factors(G.order):
        for P in normal_masks(t, g):
            if not _is_p_group(P, p):
                continue
            params = {"p": p, "P": describe(t, P)}
            try:
                targets = target_masks(t, P, p)
                how = {"icpc": 0, "supplement": 0}
                failing = None
                for x in targets:
                    r = _target_ok(t, x, g, p, allow_supplement=True)
                    if r is None:
                        failing = failing if failing is not None else x
                    else:
                        how[r] += 1
            except CapExceeded as exc:
                out.append(_indeterminate("thm31", G, exc, params))
                continue
            params["targets"] = len(targets)
            out.append(TheoremInstance(
                "thm31", _name(G), params, failing is None, P & ~zu == 0,
                witness=how, certificate=None if failing is None else {"target": describe(t, failing)}))
    return out


def _quotient_supersolvable(t, g, n) -> bool:
    """G/N is supersolvable iff every chief factor of G above N has prime order."""
    return all(is_prime(popcount(h) // popcount(k)) for k, h in chief_pair_masks(t, g) if k & n == n)


def _is_cyclic_mask(t, m) -> bool:
    n = popcount(m)
    return any(t.orders[x] == n for x in bits(m))


def check_corollary_U(G: Group) -> list[TheoremInstance]:
    t = G.table
    g = G.mask
    out = []
    concl = is_supersolvable_mask(t, g)
    for N in normal_masks(t, g):
        if not is_solvable_mask(t, N) or not _quotient_supersolvable(t, g, N):
            continue
        F = fitting_mask(t, N)
        params = {"N": describe(t, N), "F(N)": popcount(F)}
        checked = []
        failing = None
        try:
            for p in prime_factors(popcount(F)):
                P = p_core_mask(t, F, p)
                if _is_cyclic_mask(t, P):
                    continue
                checked.append(p)
                for x in target_masks(t, P, p):
                    if _target_ok(t, x, g, p, allow_supplement=True) is None:
                        failing = failing if failing is not None else (p, x)
        except CapExceeded as exc:
            out.append(_indeterminate("corU", G, exc, params))
            continue
        params["noncyclic_sylow_primes"] = checked
        cert = None if failing is None else {"p": failing[0], "target": describe(t, failing[1])}
        out.append(TheoremInstance("corU", _name(G), params, failing is None, concl, certificate=cert))
    return out


def check_theorem_pnilpotent(G: Group) -> list[TheoremInstance]:
    t = G.table
    g = G.mask
    out = []
    for E in normal_masks(t, g):
        if E == t.trivial:
            continue
        p = min(prime_factors(popcount(E)))
        P = sylow_mask(t, E, p)
        params = {"E": describe(t, E), "p": p, "P": describe(t, P)}
        try:
            targets = target_masks(t, P, p)
            failing = next((x for x in targets if icpc_witness_mask(t, x, g, p) is None), None)
        except CapExceeded as exc:
            out.append(_indeterminate("thmPnil", G, exc, params))
            continue
        params["targets"] = len(targets)
        out.append(TheoremInstance(
            "thmPnil", _name(G), params, failing is None, is_p_nilpotent_mask(t, E, p),
            certificate=None if failing is None else {"target": describe(t, failing)}))
    return out


# ---------------------------------------------------------------------------
# minimal non-p-nilpotent subgroups
# ---------------------------------------------------------------------------

def nilpotent_residual_mask(t: ElementTable, k: int) -> int:
    cur = k
    while True:
        nxt = t.commutator_subgroup(cur, k)
        if nxt == cur:
            return cur
        cur = nxt


def min_non_p_nilpotent_masks(t: ElementTable, g: int, p: int) -> list[int]:
    """Subgroups that are not p-nilpotent but all of whose proper subgroups are."""
    minimal: list[int] = []
    for m in subgroup_masks(t, g):  # ascending order
        if is_p_nilpotent_mask(t, m, p):
            continue
        if not any(k & m == k for k in minimal):
            minimal.append(m)
    return minimal


def structure_report(t: ElementTable, k: int, p: int) -> dict:
    n = popcount(k)
    primes = prime_factors(n)
    others = [q for q in primes if q != p]
    report = {"order": n, "q": others[0] if len(others) == 1 else None}
    report["two_primes"] = p in primes and len(others) == 1
    kp = sylow_mask(t, k, p)
    report["sylow_p_normal"] = p_core_mask(t, k, p) == kp
    report["sylow_q_cyclic"] = bool(report["two_primes"]) and _is_cyclic_mask(t, sylow_mask(t, k, others[0]))
    report["Kp_is_nilpotent_residual"] = nilpotent_residual_mask(t, k) == kp
    phi = frattini_mask(t, kp)
    report["frattini_Kp_central"] = phi & ~center_mask(t, k) == 0
    report["Kp_mod_frattini_chief"] = (phi, kp) in set(chief_pair_masks(t, k))
    exp = math.lcm(*(t.orders[x] for x in bits(kp)))
    report["exponent_Kp"] = exp
    report["exponent_ok"] = exp == p or (p == 2 and exp == 4)
    return report


STRUCTURE_KEYS = ("two_primes", "sylow_p_normal", "sylow_q_cyclic", "Kp_is_nilpotent_residual",
                  "frattini_Kp_central", "Kp_mod_frattini_chief", "exponent_ok")


def mine_min_non_p_nilpotent(G: Group, p: int) -> list[tuple[Group, dict]]:
    t = G.table
    config.check_lattice(G.order)
    return [(Group._from_mask(G, k), structure_report(t, k, p))
            for k in min_non_p_nilpotent_masks(t, G.mask, p)]


def check_min_non_p_nilpotent(G: Group) -> list[TheoremInstance]:
    t = G.table
    out = []
    for p in prime_factors(G.order):
        for k in min_non_p_nilpotent_masks(t, G.mask, p):
            rep = structure_report(t, k, p)
            out.append(TheoremInstance("minNonPnil", _name(G), {"p": p, "K": describe(t, k)}, True,
                                       all(rep[key] for key in STRUCTURE_KEYS), witness=rep))
    return out


# ---------------------------------------------------------------------------
# lemma suites
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LemmaOptions:
    exhaustive_order: int = 100
    sample_threshold: int = 4000
    seed: int = 0


class _Agg:
    """Collects tuple outcomes for one (lemma, group, prime) instance."""

    def __init__(self, t: ElementTable, lemma: str, group: str, params: dict):
        self.t, self.lemma, self.group, self.params = t, lemma, group, params
        self.qualifying = 0
        self.failures = 0
        self.certificate = None

    def record(self, hypothesis: bool, conclusion: bool, cert=None):
        if not hypothesis:
            return
        self.qualifying += 1
        if not conclusion:
            self.failures += 1
            if self.certificate is None:
                self.certificate = cert() if callable(cert) else cert

    def instance(self) -> TheoremInstance:
        params = dict(self.params, qualifying=self.qualifying)
        return TheoremInstance(self.lemma, self.group, params, self.qualifying > 0,
                               self.failures == 0, certificate=self.certificate)


def _select(candidates: list, lemma: str, G: Group, opts: LemmaOptions, params: dict) -> list:
    params["candidates"] = len(candidates)
    if G.order <= opts.exhaustive_order or len(candidates) <= opts.sample_threshold:
        params["sampled"] = False
        return candidates
    rng = random.Random(opts.seed ^ zlib.crc32(f"{_name(G)}/{lemma}/{params.get('p')}".encode()))
    params["sampled"] = True
    params["sample_seed"] = opts.seed
    return rng.sample(candidates, opts.sample_threshold)


class _Quotients:
    def __init__(self, G: Group):
        self.G = G
        self._m: dict[int, Morphism] = {}

    def __call__(self, n: int) -> Morphism:
        m = self._m.get(n)
        if m is None:
            m = Morphism(self.G, Group._from_mask(self.G, n))
            self._m[n] = m
        return m


def lemma_suite(G: Group, selection=LEMMA_IDS, opts: LemmaOptions = LemmaOptions()) -> list[TheoremInstance]:
    t = G.table
    g = G.mask
    name = _name(G)
    primes = prime_factors(G.order)
    normals = normal_masks(t, g)
    nontrivial = [n for n in normals if n != t.trivial]
    proper_nt = [n for n in nontrivial if n != g]
    quot = _Quotients(G)
    out: list[TheoremInstance] = []

    def run(lemma, params, body):
        try:
            out.append(body(params))
        except CapExceeded as exc:
            out.append(_indeterminate(lemma, G, exc, params))

    if "lemma21a" in selection:
        for p in primes:
            def body(params, p=p):
                agg = _Agg(t, "lemma21a", name, params)
                for n in normals:
                    agg.record(True, pcap_violation_mask(t, n, g, p) is None,
                               lambda n=n: {"N": describe(t, n)})
                return agg.instance()
            run("lemma21a", {"p": p}, body)

    subs = subgroup_masks(t, g) if set(selection) & {"lemma21b", "lemma21c", "lemma22"} else []

    if "lemma21b" in selection:
        for p in primes:
            def body(params, p=p):
                cands = [(h, n) for n in proper_nt for h in subs if h & n == n]
                agg = _Agg(t, "lemma21b", name, params)
                for h, n in _select(cands, "lemma21b", G, opts, params):
                    if pcap_violation_mask(t, h, g, p) is not None:
                        continue
                    m = quot(n)
                    tt = m.target.table
                    img = m.project_mask(h)
                    agg.record(True, pcap_violation_mask(tt, img, tt.full, p) is None,
                               lambda h=h, n=n: {"H": describe(t, h), "N": describe(t, n)})
                return agg.instance()
            run("lemma21b", {"p": p}, body)

    for lemma in ("lemma21c", "lemma22"):
        if lemma not in selection:
            continue
        for p in primes:
            def body(params, p=p, lemma=lemma):
                cands = [(h, n) for n in proper_nt for h in subs
                         if math.gcd(popcount(h), popcount(n)) == 1]
                agg = _Agg(t, lemma, name, params)
                for h, n in _select(cands, lemma, G, opts, params):
                    m = quot(n)
                    tt = m.target.table
                    if lemma == "lemma21c":
                        if pcap_violation_mask(t, h, g, p) is not None:
                            continue
                        ok = pcap_violation_mask(tt, m.project_mask(h), tt.full, p) is None
                    else:
                        if icpc_witness_mask(t, h, g, p) is None:
                            continue
                        ok = icpc_witness_mask(tt, m.project_mask(h), tt.full, p) is not None
                    agg.record(True, ok, lambda h=h, n=n: {"H": describe(t, h), "N": describe(t, n)})
                return agg.instance()
            run(lemma, {"p": p}, body)

    zu = u_hypercenter_mask(t, g) if set(selection) & {"lemma5U", "lemma6U"} else None

    if "lemma5U" in selection:
        def body(params):
            agg = _Agg(t, "lemma5U", name, params)
            for e in nontrivial:
                fstar = generalized_fitting_mask(t, e)
                agg.record(fstar & ~zu == 0, e & ~zu == 0, lambda e=e: {"E": describe(t, e)})
            return agg.instance()
        run("lemma5U", {}, body)

    if "lemma6U" in selection:
        def body(params):
            agg = _Agg(t, "lemma6U", name, params)
            ss = is_supersolvable_mask(t, g)
            for n in normals:
                agg.record(_quotient_supersolvable(t, g, n) and n & ~zu == 0, ss,
                           lambda n=n: {"N": describe(t, n)})
            return agg.instance()
        run("lemma6U", {}, body)

    if "lemma7" in selection:
        for p in primes:
            def body(params, p=p):
                agg = _Agg(t, "lemma7", name, params)
                qs = [q for q in normals if _is_p_group(q, p)]
                for M in maximal_masks(t, g):
                    for q in qs:
                        prod = popcount(M) * popcount(q) // popcount(M & q)
                        agg.record(prod == popcount(g), t.is_normal(M & q, g),
                                   lambda M=M, q=q: {"M": describe(t, M), "Q": describe(t, q)})
                return agg.instance()
            run("lemma7", {"p": p}, body)
    return out


# ---------------------------------------------------------------------------
# campaign
# ---------------------------------------------------------------------------

_CHECKS = {
    "thm31": check_theorem_31,
    "corU": check_corollary_U,
    "thmPnil": check_theorem_pnilpotent,
    "minNonPnil": check_min_non_p_nilpotent,
}


def expand_selection(selection) -> tuple[str, ...]:
    if isinstance(selection, str):
        selection = [selection]
    chosen: list[str] = []
    for s in selection:
        if s == "all":
            chosen.extend(ALL_IDS)
        elif s == "lemmas":
            chosen.extend(LEMMA_IDS)
        elif s == "theorems":
            chosen.extend(THEOREM_IDS)
        elif s in ALL_IDS:
            chosen.append(s)
        else:
            raise ValueError(f"unknown theorem id {s!r}; choose from {', '.join(ALL_IDS)}, all")
    if not chosen:
        raise ValueError("empty theorem selection")
    return tuple(i for i in ALL_IDS if i in chosen)


def group_profile(G: Group, series_limit: int = 1000) -> dict:
    t = G.table
    g = G.mask
    series, exhausted = chief_series_masks(t, g, series_limit)
    first = series[0]
    return {
        "name": _name(G),
        "order": G.order,
        "degree": G.degree,
        "normal_orders": [popcount(n) for n in normal_masks(t, g)],
        "chief_factor_orders": [popcount(b) // popcount(a) for a, b in zip(first, first[1:])],
        "chief_series_count": len(series),
        "chief_series_exhausted": exhausted,
        "u_hypercenter_order": popcount(u_hypercenter_mask(t, g)),
        "supersolvable": is_supersolvable_mask(t, g),
        "solvable": is_solvable_mask(t, g),
    }


def standard_probes(G: Group) -> list[dict]:
    """Fixed spot checks attached to the report when their group is catalogued."""
    from .icpc import check_ICPC
    from .chief import pcap_violation
    from .group import subgroup

    name = G.name
    out = []
    if name == "S4":
        H = subgroup(G, ["(1 2)"])
        v = pcap_violation(H, G, 2)
        out.append({"probe": "pcap", "group": name, "subgroup": ["(1 2)"], "p": 2, "result": v is None,
                    "certificate": None if v is None else v.as_dict()})
        mined = mine_min_non_p_nilpotent(G, 2)
        out.append({"probe": "minNonPnil", "group": name, "p": 2,
                    "result": [{"order": K.order, "gens": [x.cycle_string() for x in K.generators],
                                "structure": rep} for K, rep in mined]})
    if name == "SL23":
        x = next(e for e in G.elements() if e.order() == 4)
        H = subgroup(G, [x])
        c = check_ICPC(H, G, 2)
        out.append({"probe": "icpc", "group": name, "subgroup": [x.cycle_string()], "p": 2,
                    "result": c.holds, "certificate": None if c.certificate is None else c.certificate.as_dict()})
    return out


@dataclass
class CampaignOptions:
    selection: tuple[str, ...] = ALL_IDS
    max_order: int | None = None
    jobs: int = 1
    seed: int = 0
    exhaustive_order: int = 100
    sample_threshold: int = 4000
    series_limit: int = 1000


@dataclass
class CampaignReport:
    catalogue: list[dict]
    instances: list[TheoremInstance]
    caps: dict
    options: dict
    seed: int
    probes: list[dict] = field(default_factory=list)
    engine_version: str = __version__
    timing: dict = field(default_factory=dict)

    @property
    def violations(self) -> list[TheoremInstance]:
        return [i for i in self.instances if i.status == VIOLATION]

    @property
    def indeterminate(self) -> list[TheoremInstance]:
        return [i for i in self.instances if i.status == INDETERMINATE]

    def counts(self) -> dict:
        out: dict[str, dict[str, int]] = {}
        for i in self.instances:
            row = out.setdefault(i.theorem_id, {OK: 0, VIOLATION: 0, VACUOUS: 0, INDETERMINATE: 0})
            row[i.status] += 1
        return out

    def to_dict(self, include_timing: bool = True) -> dict:
        d = {
            "engine_version": self.engine_version,
            "caps": self.caps,
            "seed": self.seed,
            "options": self.options,
            "catalogue": self.catalogue,
            "probes": self.probes,
            "summary": self.counts(),
            "instances": [i.as_dict() for i in self.instances],
        }
        if include_timing:
            d["timing"] = self.timing
        return d


def _run_one(spec: GroupSpec, options: CampaignOptions, caps: config.Caps):
    config.set_caps(caps)
    start = time.perf_counter()
    G = spec.to_group()
    instances: list[TheoremInstance] = []
    profile = {"name": spec.name, "order": G.order, "degree": G.degree}
    probes: list[dict] = []
    try:
        profile = group_profile(G, options.series_limit)
        probes = standard_probes(G)
        for tid in options.selection:
            if tid in _CHECKS:
                try:
                    instances.extend(_CHECKS[tid](G))
                except CapExceeded as exc:
                    instances.append(_indeterminate(tid, G, exc))
        lemmas = tuple(i for i in options.selection if i in LEMMA_IDS)
        if lemmas:
            lo = LemmaOptions(options.exhaustive_order, options.sample_threshold, options.seed)
            try:
                instances.extend(lemma_suite(G, lemmas, lo))
            except CapExceeded as exc:
                instances.extend(_indeterminate(tid, G, exc) for tid in lemmas)
    except CapExceeded as exc:
        profile["error"] = str(exc)
        instances.extend(_indeterminate(tid, G, exc) for tid in options.selection)
    return profile, instances, probes, time.perf_counter() - start


def run_campaign(specs: list[GroupSpec], options: CampaignOptions | None = None) -> CampaignReport:
    options = options or CampaignOptions()
    options.selection = expand_selection(options.selection)
    if not specs:
        raise ValueError("empty catalogue")
    caps = config.get_caps()
    start = time.perf_counter()
    if options.jobs > 1:
        with ProcessPoolExecutor(max_workers=options.jobs) as pool:
            results = list(pool.map(_run_one, specs, [options] * len(specs), [caps] * len(specs)))
    else:
        results = [_run_one(s, options, caps) for s in specs]
    catalogue, instances, probes, per_group = [], [], [], {}
    for spec, (profile, inst, pr, secs) in zip(specs, results):
        catalogue.append(profile)
        instances.extend(inst)
        probes.extend(pr)
        per_group[spec.name] = round(secs, 4)
    catalogue.sort(key=lambda d: d["name"])
    instances.sort(key=TheoremInstance.sort_key)
    probes.sort(key=lambda d: (d["group"], d["probe"]))
    opts = asdict(options)
    opts["selection"] = list(options.selection)
    return CampaignReport(catalogue, instances, caps.as_dict(), opts, options.seed, probes,
                          timing={"total_seconds": round(time.perf_counter() - start, 3), "per_group": per_group})
