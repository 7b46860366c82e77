import itertools
import json
import os

import pytest

import emergence as em

DATA = os.environ.get("TEST_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "data"))
CLI = os.path.join(DATA, "cli.emg")


def by_name(battery, name):
    return next(e for e in battery if e.name == name)


def test_product_counts_and_verdict():
    bat = em.standard_battery()
    a, b = bat[0], bat[5]
    p, legs = em.product([a, b])
    assert len(p.objects) == len(a.objects) * len(b.objects)
    assert p.order == a.order + b.order
    v = em.verify_product(p, legs)
    assert v["holds"] and v["mediators"]["missing"] == 0 and v["mediators"]["ambiguous"] == 0


def test_pullback_contains_diagonal():
    for a in em.standard_battery()[:4]:
        p, ta, tb = em.pullback(a, a)
        pairs = set(zip(ta.object_map, tb.object_map))
        assert len(pairs) == len(p.objects)
        assert {(x, x) for x in range(len(a.objects))} <= pairs


def test_equalizer_of_endofunctors():
    ws = em.Workspace.load([CLI])
    e = ws.emergence("G")
    f, g = ws.functor("IdG"), ws.functor("Flat")
    eq, incl = em.equalizer(e, [f, g])
    assert f.compose(incl) == g.compose(incl)
    assert em.verify_equalizer(incl, [f, g])["holds"]


def test_iso_and_homs():
    bat = em.emergence_battery()
    z2, z2c = by_name(bat, "Z2"), by_name(bat, "Z2copy")
    assert em.check_iso(z2, z2c)["holds"]
    assert len(em.homomorphisms(z2, z2)) >= 1
    assert em.opposite(z2).order == z2.order


def test_terminal_example():
    status = em.extremal(em.terminal_example(), em.singleton_battery())
    assert status["terminal"]["holds"]
    assert not status["zero"]["holds"]


def test_factorable_count():
    tables = [[(bits >> k) & 1 for k in range(4)] for bits in range(16)]
    assert sum(em.is_factorable([2, 2], t) is not None for t in tables) == 6
    assert em.support([2, 2], [0, 1, 0, 1]) == [1]


def test_workspace_round_trip_and_internal():
    ws = em.Workspace.load([CLI])
    again = em.Workspace.from_text(ws.serialize())
    assert again.serialize() == ws.serialize()
    assert "E" in again.emergences
    assert isinstance(em.internal(ws, "K")["thin"], bool)


def test_cli_json_and_errors():
    code, report = em.run_json("-w", CLI, "construct", "product", "E", "G", "--verify")
    assert code == 0 and report["verdict"]["holds"]
    code, out, err = em.run("-w", CLI, "construct", "product", "E", "Nope")
    assert code == 1 and err
    with pytest.raises(em.WorkspaceError):
        em.Workspace.from_text("category {")


def test_budget_exception():
    a = em.standard_battery()[0]
    with pytest.raises(em.BudgetExceeded):
        em.product([a, a, a], budget=1)
