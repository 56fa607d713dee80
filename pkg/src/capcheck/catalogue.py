"""Built-in groups, group files and catalogue manifests.

Builtin names::

    C{n}   cyclic, degree n            D{n}   dihedral of order n (n even)
    S{n}   symmetric, n <= 6           A{n}   alternating, n <= 6
    E{q}   elementary abelian, q = p^k Q8, Q16, SL23, M16, C3:C4, C7:C3
    XxY    direct product (also X×Y), acting on the disjoint union of points
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import CycleParseError, GroupError
from .group import Group
from .perm import Permutation
from .util import prime_factors


class GroupFileError(GroupError):
    pass


@lru_cache(maxsize=None)
def _data(name: str):
    return json.loads(resources.files("capcheck.data").joinpath(name).read_text(encoding="utf-8"))


def _factor_gens(name: str) -> tuple[int, list[list[list[int]]]]:
    """(degree, generators as lists of 1-based cycles) for one registry name."""
    special = _data("builtins.json")
    if name in special:
        entry = special[name]
        gens = [Permutation.parse(g, entry["degree"]).cycles() for g in entry["generators"]]
        return entry["degree"], [[list(c) for c in g] for g in gens]
    m = re.fullmatch(r"([CDSAE])(\d+)", name)
    if not m:
        raise GroupError(f"unknown builtin group {name!r}")
    kind, n = m.group(1), int(m.group(2))
    if n < 1:
        raise GroupError(f"bad size in {name!r}")
    if kind == "C":
        return n, ([[list(range(1, n + 1))]] if n > 1 else [])
    if kind == "D":
        if n % 2 or n < 4:
            raise GroupError(f"dihedral order must be even and at least 4, got {n}")
        k = n // 2
        if k == 2:
            return 4, [[[1, 2]], [[3, 4]]]
        refl = [[i, k + 2 - i] for i in range(2, (k + 3) // 2) if i != k + 2 - i]
        return k, [[list(range(1, k + 1))], refl]
    if kind == "S":
        if n > 6:
            raise GroupError("symmetric groups are limited to n <= 6")
        if n == 1:
            return 1, []
        return n, [[[1, 2]], [list(range(1, n + 1))]] if n > 2 else [[[1, 2]]]
    if kind == "A":
        if n > 6:
            raise GroupError("alternating groups are limited to n <= 6")
        if n < 3:
            return n, []
        return n, [[[1, 2, i]] for i in range(3, n + 1)]
    # elementary abelian
    primes = prime_factors(n)
    if len(primes) != 1:
        raise GroupError(f"E{n}: order must be a prime power")
    p = primes[0]
    k = 0
    while p ** k < n:
        k += 1
    return p * k, [[list(range(i * p + 1, (i + 1) * p + 1))] for i in range(k)]


def split_product(name: str) -> list[str]:
    parts = re.split(r"[x×]", name)
    if any(not p for p in parts):
        raise GroupError(f"malformed product expression {name!r}")
    return parts


def builtin_spec(name: str) -> "GroupSpec":
    name = name.strip()
    offset = 0
    gens: list[str] = []
    for part in split_product(name):
        degree, fgens = _factor_gens(part)
        for g in fgens:
            gens.append("".join("(" + " ".join(str(x + offset) for x in c) + ")" for c in g) or "()")
        offset += degree
    return GroupSpec(name, max(offset, 1), gens)


def builtin_group(name: str) -> Group:
    return builtin_spec(name).to_group()


# ---------------------------------------------------------------------------
# group files
# ---------------------------------------------------------------------------


@dataclass
class GroupSpec:
    name: str
    degree: int
    generators: list[str] = field(default_factory=list)

    def to_group(self) -> Group:
        return Group(self.degree, [Permutation.parse(g, self.degree) for g in self.generators], name=self.name)

    @classmethod
    def from_group(cls, G: Group, name: str | None = None) -> "GroupSpec":
        return cls(name or G.name or "G", G.degree, [g.cycle_string() for g in G.generators])

    def as_dict(self) -> dict:
        return {"name": self.name, "degree": self.degree, "generators": list(self.generators)}


def parse_group_json(text: str, source: str = "<string>") -> GroupSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GroupFileError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise GroupFileError(f"{source}: expected a JSON object")
    missing = {"degree", "generators"} - set(data)
    if missing:
        raise GroupFileError(f"{source}: missing field(s) {sorted(missing)}")
    degree = data["degree"]
    gens = data["generators"]
    if not isinstance(degree, int) or isinstance(degree, bool) or degree < 1:
        raise GroupFileError(f"{source}: degree must be a positive integer")
    if not isinstance(gens, list) or not all(isinstance(g, str) for g in gens):
        raise GroupFileError(f"{source}: generators must be a list of cycle strings")
    spec = GroupSpec(str(data.get("name", Path(source).stem)), degree, gens)
    for i, g in enumerate(gens):
        try:
            Permutation.parse(g, degree)
        except CycleParseError as exc:
            raise GroupFileError(f"{source}: generator {i}: {exc}") from None
    return spec


def load_group_file(path) -> Group:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise GroupFileError(f"{path}: {exc.strerror or exc}") from None
    return parse_group_json(text, str(path)).to_group()


def save_group_file(G: Group, path, name: str | None = None) -> None:
    spec = GroupSpec.from_group(G, name)
    Path(path).write_text(json.dumps(spec.as_dict(), indent=2) + "\n", encoding="utf-8")


def resolve_groupspec(text: str) -> Group:
    """A builtin name, or ``@path`` to a group file."""
    if text.startswith("@"):
        return load_group_file(text[1:])
    return builtin_group(text)


# ---------------------------------------------------------------------------
# manifests
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ManifestEntry:
    name: str
    source: str = "builtin"
    expected_order: int | None = None
    path: str | None = None

    def spec(self, base_dir: Path | None = None) -> GroupSpec:
        if self.source == "builtin":
            return builtin_spec(self.name)
        if self.source == "file":
            p = Path(self.path or self.name)
            if base_dir is not None and not p.is_absolute():
                p = base_dir / p
            try:
                text = p.read_text(encoding="utf-8")
            except OSError as exc:
                raise GroupFileError(f"{p}: {exc.strerror or exc}") from None
            spec = parse_group_json(text, str(p))
            spec.name = self.name
            return spec
        raise GroupError(f"unknown manifest source {self.source!r}")


@dataclass
class CatalogueManifest:
    entries: list[ManifestEntry]
    base_dir: Path | None = None

    def __post_init__(self):
        names = [e.name for e in self.entries]
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            raise GroupError(f"duplicate catalogue names: {sorted(dup)}")

    def specs(self) -> list[GroupSpec]:
        return [e.spec(self.base_dir) for e in self.entries]

    def build(self, entry: ManifestEntry) -> Group:
        G = entry.spec(self.base_dir).to_group()
        if entry.expected_order is not None and G.order != entry.expected_order:
            raise GroupError(f"{entry.name}: expected order {entry.expected_order}, constructed {G.order}")
        return G

    def filtered(self, max_order: int | None) -> "CatalogueManifest":
        if max_order is None:
            return self
        keep = [e for e in self.entries if e.expected_order is None or e.expected_order <= max_order]
        return CatalogueManifest(keep, self.base_dir)

    def as_list(self) -> list[dict]:
        return [{k: v for k, v in vars(e).items() if v is not None} for e in self.entries]


def parse_manifest(data, base_dir: Path | None = None) -> CatalogueManifest:
    raw = data["entries"] if isinstance(data, dict) else data
    entries = []
    for item in raw:
        if isinstance(item, str):
            entries.append(ManifestEntry(item))
        else:
            entries.append(ManifestEntry(item["name"], item.get("source", "builtin"),
                                         item.get("expected_order"), item.get("path")))
    return CatalogueManifest(entries, base_dir)


def load_manifest(path) -> CatalogueManifest:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise GroupFileError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise GroupFileError(f"{path}: {exc.strerror or exc}") from None
    return parse_manifest(data, path.parent)


def default_manifest() -> CatalogueManifest:
    return parse_manifest(_data("default_catalogue.json"))
