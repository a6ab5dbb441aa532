import json
import os
from pathlib import Path

import pytest

import tlg

DATA = Path(os.environ.get("TLG_DATA_DIR", Path(__file__).resolve().parents[2] / "data" / "fans"))


def fan_text(name):
    return (DATA / f"{name}.json").read_text()


def test_commands_listed():
    assert {"validate", "cohomology", "ifunction", "all"} <= set(tlg.commands())


def test_cohomology_p112():
    code, report, error = tlg.run("cohomology", fan_text("P112"))
    assert code == 0 and error is None
    assert report["status"] == "ok"
    assert report["results"]["dim"] == 4


def test_run_accepts_dict():
    code, report, _ = tlg.run("validate", json.loads(fan_text("P2")))
    assert code == 0
    assert report["command"] == "validate"


def test_box_elements_p112():
    boxes = tlg.box_elements(2, [[1, 0], [-1, -2], [0, 1]], [[1, 3], [2, 3], [1, 2]])
    nonzero = [(v, age) for v, age in boxes if any(v)]
    assert nonzero == [([0, -1], "1/1")]


def test_check_sl():
    p112 = json.loads(fan_text("P112"))
    p113 = json.loads(fan_text("P113"))
    assert tlg.check_sl(p112["rank"], p112["rays"], p112["max_cones"])
    assert not tlg.check_sl(p113["rank"], p113["rays"], p113["max_cones"])


def test_digest_vector():
    assert tlg.digest("") == "fnv1a64:cbf29ce484222325"


def test_schema_error_raises():
    with pytest.raises(tlg.TlgError):
        tlg.normalize_fan(fan_text("bad_length"))


def test_broken_fan_exit_code():
    code, _, error = tlg.run("validate", fan_text("broken"))
    assert code == 1
    assert error["error"]["exit_code"] == 1
