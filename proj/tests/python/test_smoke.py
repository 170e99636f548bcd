import pathlib

import pytest

import valnet

ROOT = pathlib.Path(__file__).resolve().parents[2]
DRESS = ROOT / "scenarios" / "dress"


def dress_network():
    net = valnet.Network()
    net.add_variable("Dress", ["B", "W", "P"])
    net.add_variable("Philco", ["ok", "out"])
    net.add_variable("Speech", ["uttered", "unuttered"])
    net.add_relation("washing", ["Philco", "Dress"])
    net.add_relation("coherence", ["Speech", "Dress"])
    return net


def test_calculi_registered():
    assert valnet.calculi() == ["belief", "boolean", "possibility", "probability"]


def test_probability_states():
    net = dress_network()
    net.propagate()
    assert net.marginal("Dress")["rows"]["B"] == pytest.approx(1 / 3)

    net.set_table("washing", "probability", [1 / 6, 1 / 6, 1 / 6, 0.2, 0.1, 0.2])
    net.observe("Philco", "out")
    net.propagate()
    rows = net.marginal("Dress")["rows"]
    assert [rows[v] for v in "BWP"] == pytest.approx([0.4, 0.2, 0.4])

    net.set_table("coherence", "probability", [0.025, 0.025, 0.45, 1 / 6, 1 / 6, 1 / 6])
    net.observe("Speech", "uttered")
    net.propagate(normalized=False)
    m = net.marginal("Dress")
    assert m["total"] == pytest.approx(0.0975)
    assert not m["normalized"]


def test_belief_masses():
    net = dress_network()
    net.use("belief")
    net.set_masses("washing", "belief",
                   [(0.8, [["ok", "B"], ["ok", "W"], ["ok", "P"], ["out", "B"], ["out", "P"]])])
    net.observe("Philco", "out")
    net.propagate()
    m = net.marginal("Dress")
    assert m["columns"] == ["bel", "pl"]
    assert m["rows"]["W"] == pytest.approx((0.0, 0.2))


def test_script_execution_matches_cli_tables():
    net = valnet.Network()
    out = net.execute((DRESS / "possibility.vn").read_text())
    assert "Dress [possibility, normalized]" in out
    assert net.marginal("Dress")["rows"]["P"] == pytest.approx((0.9, 1.0))


def test_boolean_truth_values():
    net = valnet.Network(calculus="boolean")
    net.execute((DRESS / "boolean.vn").read_text())
    rows = net.marginal("Dress")["rows"]
    assert rows == {"B": False, "W": False, "P": True}


def test_errors_raise_value_error():
    net = dress_network()
    with pytest.raises(ValueError, match="parse error"):
        net.execute("var X { a a }")
    with pytest.raises(ValueError):
        net.query("Dress")  # nothing propagated yet
    with pytest.raises(ValueError):
        net.set_table("washing", "probability", [0.1, 0.2])
    with pytest.raises(ValueError):
        net.observe("Dress", "red")


def test_tree_and_axioms():
    net = dress_network()
    tree = net.tree("probability")
    assert tree["clusters"] == [["Dress", "Philco"], ["Dress", "Speech"]]
    assert tree["edges"] == [(0, 1, ["Dress"])]
    assert tree["violations"] == []
    report = valnet.check_axioms("possibility", instances=100, tolerance=0.0)
    assert report["passed"] and report["instances"] == 100


def test_format_helpers():
    text = "var A { x y }\nval A belief { 0.7 : { (x) } }\n"
    printed = valnet.format_script(text)
    assert valnet.format_script(printed) == printed
    assert valnet.format_fixed3(0.0025) == "0.002"
