import pytest

from ospmin.liealg import tkk_algebra
from ospmin.minrep import (act, gk_dimension, phi_iso, verify_bessel_action, verify_le_action, verify_w_action,
                           w_dimension, w_dimension_product, w_hypothesis, w_module)
from ospmin.superpoly import ModelParams

P = ModelParams(4, 4, 1)


def test_w0_dimension():
    assert w_dimension(P, 0) == 6
    assert w_dimension_product(P, 0) == 6
    assert w_module(P, 0).dim(0) == 6


@pytest.mark.parametrize("j", range(4))
def test_dimension_identity(j):
    assert w_dimension(P, j) == w_dimension_product(P, j)


def test_hypothesis_names():
    assert w_hypothesis(P) is None
    assert "-2N" in w_hypothesis(ModelParams(3, 5, 0))
    assert "odd" in w_hypothesis(ModelParams(6, 5, 1))


def test_generic_bessel_action():
    for i in range(P.space.nvars):
        row = verify_bessel_action(P, 2, 1, 1, i)
        assert row["status"] == "PASS", row


def test_le_action_j0():
    assert verify_le_action(P, 0, 0, 1)["status"] == "PASS"


def test_skip_names_hypothesis():
    row = verify_bessel_action(ModelParams(3, 5, 0), 1, 0, 0, 0)
    assert row["status"] == "SKIPPED" and row["reason"]


def test_w_action_sweep_j1(params):
    rows = verify_w_action(params, 1)
    assert rows
    assert all(r["status"] != "FAIL" for r in rows)
    assert any(r["status"] == "PASS" for r in rows)


def test_action_respects_levels():
    mod = w_module(P, 2)
    g = tkk_algebra(P)
    for X in g.elements():
        for idx in mod.levels[1][:3]:
            assert act(X, mod.vector(idx)).levels() <= {0, 1, 2}


def test_intertwiner():
    for j in range(2):
        rep = phi_iso(P, j)
        assert rep["status"] == "PASS", [c for c in rep["checks"] if c["status"] != "PASS"][:1]


def test_gk_dimension(params):
    rep = gk_dimension(params)
    assert rep["degree"] == params.p + params.q - 3
