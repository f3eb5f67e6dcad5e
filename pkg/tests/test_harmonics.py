import pytest
from hypothesis import given
from hypothesis import strategies as st

from ospmin.harmonics import (Block, dim_formula, fischer_check, harmonic_basis, lower_harmonic, model_blocks,
                              osp_preserves_harmonics, raise_harmonic)
from ospmin.superpoly import ModelParams


def test_dim_formula_values():
    assert dim_formula(6, 2, 2) == 33
    assert dim_formula(3, 2, 1) == 5
    assert dim_formula(3, 0, 2) == 5


def test_kernel_rank_r62():
    block = Block.euclidean(6, 2)
    assert len(harmonic_basis(block, 2)) == 33
    assert fischer_check(block, 2)["dim_pk"] == 34


@pytest.mark.parametrize("k", range(5))
def test_dimensions_on_model_blocks(params, k):
    for block in model_blocks(params):
        assert len(harmonic_basis(block, k)) == dim_formula(block.m, block.n_odd, k)


def test_fischer_decomposition(params):
    for block in model_blocks(params):
        for k in range(4):
            assert fischer_check(block, k)["status"] in ("PASS", "SKIPPED")


def test_fischer_skips_negative_even_superdimension():
    rep = fischer_check(Block.euclidean(2, 4), 2)
    assert rep["status"] == "SKIPPED" and "superdimension" in rep["reason"]


@given(st.integers(0, 3), st.data())
def test_raise_and_lower_stay_harmonic(k, data):
    P = ModelParams(4, 4, 1)
    for block in model_blocks(P):
        basis = harmonic_basis(block, k)
        phi = basis[data.draw(st.integers(0, len(basis) - 1))]
        i = data.draw(st.sampled_from(block.indices))
        up = raise_harmonic(phi, k, i, block)
        assert not block.laplacian(up)
        assert up.is_homogeneous() and (not up or up.degree() == k + 1)
        if k:
            down = lower_harmonic(phi, k, i, block)
            assert not block.laplacian(down)


def test_osp_preserves_harmonics(params):
    for block in model_blocks(params):
        assert osp_preserves_harmonics(block, 2)


def test_unclosed_block_rejected():
    P = ModelParams(4, 4, 1)
    with pytest.raises(ValueError):
        Block(P.space, [P.theta_index(1)])
