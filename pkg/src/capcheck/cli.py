"""Command line entry point.

Exit codes: 0 ok, 1 a theorem instance was violated or a tested property is
false, 2 usage or input error, 3 a computation cap was hit.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__, config
from .catalogue import GroupFileError, default_manifest, load_manifest, resolve_groupspec
from .chief import chief_series_enumerate, pcap_violation, u_hypercenter
from .errors import CapExceeded, GroupError
from .group import Group, subgroup
from .icpc import check_ICPC
from .lattice import characteristic_subgroup, group_predicate, normal_subgroups
from .perm import Permutation
from .report import emit_report
from .theorems import ALL_IDS, CampaignOptions, run_campaign
from .util import prime_factors

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


def _gens(G: Group, raw: list[str]) -> list[Permutation]:
    out = []
    for chunk in raw:
        for piece in chunk.split(","):
            piece = piece.strip()
            if piece:
                out.append(Permutation.parse(piece, G.degree))
    return out


def _describe(H: Group) -> str:
    gens = ", ".join(g.cycle_string() for g in H.generators) or "()"
    return f"order {H.order}: <{gens}>"


def _dump(data: dict) -> None:
    print(json.dumps(data, indent=2, ensure_ascii=False))


def cmd_props(args) -> int:
    G = resolve_groupspec(args.group)
    series = chief_series_enumerate(G, limit=1)[0]
    primes = prime_factors(G.order)
    info = {
        "name": G.name or args.group,
        "degree": G.degree,
        "order": G.order,
        "normal_subgroups": [_describe(N) for N in normal_subgroups(G)],
        "chief_factor_orders": list(series.factor_orders()),
        "u_hypercenter": _describe(u_hypercenter(G)),
        "fitting": _describe(characteristic_subgroup(G, "fitting")),
        "center": _describe(characteristic_subgroup(G, "center")),
        "predicates": {k: group_predicate(G, k) for k in ("abelian", "nilpotent", "supersolvable", "solvable")},
        "p_nilpotent": {str(p): group_predicate(G, "p_nilpotent", p) for p in primes},
    }
    if args.json:
        _dump(info)
        return EXIT_OK
    print(f"{info['name']}: degree {G.degree}, order {G.order}")
    print("normal subgroups:")
    for line in info["normal_subgroups"]:
        print(f"  {line}")
    print("chief factor orders: " + " ".join(map(str, info["chief_factor_orders"])))
    for key in ("u_hypercenter", "fitting", "center"):
        print(f"{key}: {info[key]}")
    for k, v in info["predicates"].items():
        print(f"{k}: {v}")
    for p, v in info["p_nilpotent"].items():
        print(f"{p}-nilpotent: {v}")
    return EXIT_OK


def cmd_pcap(args) -> int:
    G = resolve_groupspec(args.group)
    H = subgroup(G, _gens(G, args.subgroup))
    v = pcap_violation(H, G, args.p)
    result = {"group": G.name or args.group, "subgroup": _describe(H), "p": args.p, "pcap": v is None,
              "certificate": None if v is None else v.as_dict()}
    if args.json:
        _dump(result)
    else:
        print(f"{result['subgroup']} is {'' if v is None else 'not '}{args.p}-CAP in {result['group']}")
        if v is not None:
            print(f"  neither covers nor avoids chief factor {v.label()} of order {v.factor_order}")
    return EXIT_OK if v is None else EXIT_FALSE


def cmd_icpc(args) -> int:
    G = resolve_groupspec(args.group)
    H = subgroup(G, _gens(G, args.subgroup))
    c = check_ICPC(H, G, args.p)
    cert = c.certificate
    result = {"group": G.name or args.group, "subgroup": _describe(H), "p": args.p, "icpc": c.holds,
              "intersection": _describe(c.intersection),
              "witness": None if c.witness is None else _describe(c.witness),
              "certificate": None if cert is None else cert.as_dict()}
    if args.json:
        _dump(result)
    else:
        print(f"{result['subgroup']} is {'' if c.holds else 'not '}{args.p}-ICPC in {result['group']}")
        print(f"  H ∩ [H,G]: {result['intersection']}")
        if c.witness is not None:
            print(f"  witness: {result['witness']}")
        if cert is not None:
            print(f"  certificate: chief factor {cert.label()} of order {cert.factor_order}")
    return EXIT_OK if c.holds else EXIT_FALSE


def cmd_chief(args) -> int:
    G = resolve_groupspec(args.group)
    limit = args.limit if args.series else 1
    series = chief_series_enumerate(G, limit=limit)
    if args.json:
        _dump({"group": G.name or args.group,
               "series": [{"term_orders": [T.order for T in s.terms], "factor_orders": list(s.factor_orders())}
                          for s in series]})
        return EXIT_OK
    for i, s in enumerate(series, 1):
        terms = " < ".join(str(T.order) for T in s.terms)
        print(f"series {i}: {terms}  factors {' '.join(map(str, s.factor_orders()))}")
    return EXIT_OK


def cmd_theorem(args) -> int:
    if args.catalogue == "default":
        manifest = default_manifest()
    else:
        manifest = load_manifest(args.catalogue)
    manifest = manifest.filtered(args.max_order)
    for entry in manifest.entries:
        manifest.build(entry)  # fail fast on order drift
    specs = manifest.specs()
    if not specs:
        raise GroupError("catalogue is empty after filtering")
    jobs = args.jobs if args.jobs is not None else config.get_caps().jobs
    opts = CampaignOptions(selection=tuple(args.ids), max_order=args.max_order, jobs=jobs, seed=args.seed)
    report = run_campaign(specs, opts)
    emit_report(report, args.format, args.out)
    if report.violations:
        print(f"{len(report.violations)} violation(s)", file=sys.stderr)
        return EXIT_FALSE
    if report.indeterminate:
        print(f"{len(report.indeterminate)} indeterminate instance(s)", file=sys.stderr)
        return EXIT_CAP
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="capcheck", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def group_cmd(name, helptext):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("group", help="builtin name such as S4 or C2xQ8, or @path to a group file")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    group_cmd("props", "orders, normal subgroups, chief factors, predicates").set_defaults(func=cmd_props)
    for name, fn in (("pcap", cmd_pcap), ("icpc", cmd_icpc)):
        p = group_cmd(name, f"test whether a subgroup is {name.upper()}")
        p.add_argument("--subgroup", action="append", required=True,
                       help="generators in cycle notation, comma separated; repeatable")
        p.add_argument("--p", type=int, required=True)
        p.set_defaults(func=fn)
    p = group_cmd("chief", "print a chief series")
    p.add_argument("--series", action="store_true", help="enumerate all chief series")
    p.add_argument("--limit", type=int, default=1000)
    p.set_defaults(func=cmd_chief)

    p = sub.add_parser("theorem", help="sweep theorem and lemma checks over a catalogue")
    p.add_argument("ids", nargs="+", metavar="id", help=f"one of {', '.join(ALL_IDS)}, 'lemmas' or 'all'")
    p.add_argument("--catalogue", default="default", help="'default' or a manifest path")
    p.add_argument("--max-order", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(func=cmd_theorem)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"capcheck: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (GroupError, GroupFileError, ValueError, OSError) as exc:
        print(f"capcheck: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


cli_dispatch = main

if __name__ == "__main__":
    sys.exit(main())
