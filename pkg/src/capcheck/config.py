"""Size caps and worker count, overridable through the environment.

``CHIEF_MAX_ORDER``   largest ambient order accepted by element-level operations
``CHIEF_LATTICE_CAP`` largest order whose full subgroup lattice may be built
``CHIEF_JOBS``        worker processes used by a campaign
"""
from __future__ import annotations

import os
from contextlib import contextmanager
from dataclasses import asdict, dataclass, replace

from .errors import CapExceeded


@dataclass(frozen=True)
class Caps:
    max_order: int = 2000
    lattice_cap: int = 500
    jobs: int = 1

    @classmethod
    def from_env(cls, environ=None) -> "Caps":
        env = os.environ if environ is None else environ
        kw = {}
        for field, var in (("max_order", "CHIEF_MAX_ORDER"),
                           ("lattice_cap", "CHIEF_LATTICE_CAP"),
                           ("jobs", "CHIEF_JOBS")):
            if var in env:
                try:
                    kw[field] = int(env[var])
                except ValueError:
                    raise ValueError(f"{var} must be an integer, got {env[var]!r}") from None
        return cls(**kw)

    def as_dict(self) -> dict:
        return asdict(self)


_caps = Caps.from_env()


def get_caps() -> Caps:
    return _caps


def set_caps(caps: Caps | None = None, **changes) -> Caps:
    global _caps
    _caps = replace(caps or _caps, **changes)
    return _caps


@contextmanager
def caps_override(**changes):
    global _caps
    saved = _caps
    _caps = replace(_caps, **changes)
    try:
        yield _caps
    finally:
        _caps = saved


def check_order(order: int, what: str = "group") -> None:
    if order > _caps.max_order:
        raise CapExceeded(f"{what} order {order} exceeds max_order={_caps.max_order}")


def check_lattice(order: int) -> None:
    if order > _caps.lattice_cap:
        raise CapExceeded(f"subgroup lattice of order {order} exceeds lattice_cap={_caps.lattice_cap}")
