"""Serialising campaign reports as JSON or an aligned text table."""
from __future__ import annotations

import json
import sys
from pathlib import Path

from .theorems import CampaignReport

COLUMNS = ("group", "theorem", "params", "hypothesis", "conclusion", "status")


def report_json(r: CampaignReport, include_timing: bool = True) -> str:
    return json.dumps(r.to_dict(include_timing), indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def _fmt(v) -> str:
    if v is None:
        return "?"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def _short_params(params: dict) -> str:
    parts = []
    for k, v in params.items():
        if isinstance(v, dict) and "order" in v:
            v = f"<{v['order']}>"
        elif isinstance(v, (list, dict)):
            v = json.dumps(v, separators=(",", ":"))
        parts.append(f"{k}={v}")
    return " ".join(parts)


def report_table(r: CampaignReport) -> str:
    rows = [COLUMNS]
    for i in r.instances:
        rows.append((i.group_name, i.theorem_id, _short_params(i.parameters),
                     _fmt(i.hypothesis), _fmt(i.conclusion), i.status))
    widths = [max(len(row[c]) for row in rows) for c in range(len(COLUMNS))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    summary = ", ".join(f"{tid}: " + " ".join(f"{k}={v}" for k, v in c.items() if v)
                        for tid, c in r.counts().items())
    lines.append("")
    lines.append(f"{len(r.instances)} instances over {len(r.catalogue)} groups; {summary or 'nothing run'}")
    return "\n".join(lines) + "\n"


def emit_report(r: CampaignReport, fmt: str = "json", path=None) -> None:
    if fmt == "json":
        text = report_json(r)
    elif fmt == "table":
        text = report_table(r)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")
