from __future__ import annotations

import json

import pytest

from capcheck.catalogue import builtin_spec
from capcheck.report import emit_report, report_json, report_table
from capcheck.theorems import CampaignOptions, CampaignReport, TheoremInstance, run_campaign


def test_empty_report_is_valid_json(tmp_path):
    r = CampaignReport(catalogue=[], instances=[], caps={}, options={}, seed=0)
    data = json.loads(report_json(r))
    assert data["instances"] == []
    path = tmp_path / "r.json"
    emit_report(r, "json", path)
    assert json.loads(path.read_text())["instances"] == []


def test_schema_fields():
    r = run_campaign([builtin_spec("S3")], CampaignOptions(selection=("thm31",)))
    data = json.loads(report_json(r))
    for key in ("engine_version", "catalogue", "instances", "caps", "seed"):
        assert key in data
    for inst in data["instances"]:
        assert {"theorem", "group", "params", "hypothesis", "conclusion", "status"} <= set(inst)


def test_table_and_bad_format(capsys):
    r = CampaignReport([], [TheoremInstance("thm31", "G", {"p": 2}, True, False)], {}, {}, 0)
    emit_report(r, "table")
    out = capsys.readouterr().out
    assert "violation" in out and "p=2" in out
    assert report_table(r).splitlines()[1].split()[-1] == "violation"
    with pytest.raises(ValueError):
        emit_report(r, "xml")
