"""Smoke test for the pygeograph bindings.

Build and install first:  pip install --no-build-isolation -e crates/python
Then run:                 python -m pytest python/smoke_test.py
"""

import json
import math

import pytest

import pygeograph


def test_catalog_lists_builtins():
    names = pygeograph.catalog()
    assert "h3" in names and "h3xR-two-forms" in names


def test_heisenberg_graph_and_norm():
    s = pygeograph.Space.catalog("h3", {"c": "3/2"})
    assert s.m_labels == ["E1", "E2", "E3"]
    assert math.isclose(s.norm([0.0, 0.0, 2.0]), 2.0 * math.sqrt(1.5))
    assert s.graph([0.3, 0.1, 2.0]) == pytest.approx([3.0])


def test_qpower_closed_form_value():
    s = pygeograph.Space.catalog("h3-qpower")
    assert s.graph_kind() == "theorem1"
    assert s.graph([0.0, 0.0, 1.0])[0] == pytest.approx(3.0, abs=1e-12)


def test_verdicts():
    assert pygeograph.Space.catalog("h3").verdict()["verdict"] == "naturally_reductive"
    v = pygeograph.Space.catalog("h3-qpower").verdict(seed=3, samples=200)
    assert v["verdict"] == "go_not_naturally_reductive"
    assert any(e["test"] == "linearity_probe" and e["pass"] is False for e in v["evidence"])


def test_verify_reports_pass():
    reports = pygeograph.Space.catalog("h3-alphabeta").verify(samples=200)
    assert {r["check"] for r in reports} >= {"geodesic_residual", "equivariance_residual"}
    assert all(r["pass"] for r in reports)


def test_json_round_trip_and_errors():
    s = pygeograph.Space.catalog("h3xR-beta")
    again = pygeograph.Space.from_json(s.to_json())
    assert again.name == s.name and again.parameters == s.parameters
    with pytest.raises(ValueError):
        pygeograph.Space.catalog("h3", {"c": "1/0"})
    with pytest.raises(ValueError):
        pygeograph.Space.catalog("no-such-space")


def test_cli_in_process():
    code, out, _ = pygeograph.run(["verdict", "--space", "h3-qpower", "--json"])
    assert code == 1
    assert json.loads(out)["result"]["verdict"] == "go_not_naturally_reductive"
    code, _, err = pygeograph.run(["solve"])
    assert code == 2 and "error" in err
