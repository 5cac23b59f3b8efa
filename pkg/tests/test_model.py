import cmath
import itertools
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dwsolve.bracket import bracket
from dwsolve.model import (
    C_PLUS,
    ModelParams,
    VertexState,
    assemble_r_matrix,
    bar,
    c_plus_state,
    conjugate,
    family,
    overall_factor,
    structure,
    tilde,
    w1,
    w2,
    w3,
    w_cplus,
    weight_additive,
    weight_degree,
    weight_multiplicative,
    weight_tensor,
    ybe_residual,
)
from oracle import weight as oracle_weight

P3 = ModelParams.continuous(3, 0.37)

# additive weights of the n = 3 model at u = 0.3, lam = 0.37 (mpmath oracle, 30 digits)
FROZEN_N3 = {
    (1, 1, 1, 1): 0.34789703229261847166,
    (1, 1, 2, 2): 0.051250524845343093301,
    (1, 1, 3, 3): -0.028370315427103783536,
    (2, 2, 2, 2): 0.29508343927750688058,
    (1, 2, 2, 1): 0.31197005007761207907,
    (2, 1, 1, 2): 0.31197005007761207907,
    (1, 2, 3, 2): -0.074692356672336518299,
    (2, 1, 2, 3): -0.074692356672336518299,
    (1, 3, 3, 1): 0.24383291443216378728,
}


def all_params():
    out = [P3, ModelParams.continuous(4, 0.3)]
    for n in (4, 5, 6):
        for m in (1, 2, 3):
            out.append(ModelParams.discrete(n, m))
    return out


def test_colour_maps():
    assert conjugate(1, 5) == 5 and conjugate(3, 5) == 3
    assert [bar(a, 4) for a in range(1, 5)] == [1.5, 2.5, 2.5, 3.5]
    assert [tilde(a, 5) for a in range(1, 6)] == [-0.5, -0.5, 0.0, 0.5, 0.5]


@pytest.mark.parametrize("state,value", sorted(FROZEN_N3.items()))
def test_frozen_weights_n3(state, value):
    got = weight_additive(VertexState(*state), 0.3, P3)
    assert abs(got - value) < 1e-14
    assert abs(complex(oracle_weight(*state, 0.3, 3, 0.37)) - value) < 1e-15


@pytest.mark.parametrize("params", all_params(), ids=str)
def test_weights_match_oracle_everywhere(params, rng):
    n = params.n
    for _ in range(3):
        u = rng.uniform(-1, 1)
        W = weight_tensor(u, params)
        for s in itertools.product(range(1, n + 1), repeat=4):
            ref = complex(oracle_weight(*s, u, n, params.lam))
            assert abs(W[tuple(c - 1 for c in s)] - ref) < 1e-13


def test_n3_has_nineteen_vertices():
    assert len(structure(3)) == 19
    R = assemble_r_matrix(0.3, P3)
    assert np.count_nonzero(R) == 19


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_nonconserving_entries_exactly_zero(n):
    params = ModelParams.continuous(n, 0.41)
    W = weight_tensor(0.27, params)
    for s in itertools.product(range(n), repeat=4):
        if s[0] + s[2] != s[1] + s[3]:
            assert W[s] == 0


def test_r_matrix_index_convention():
    n = 4
    params = ModelParams.discrete(n, 1)
    R = assemble_r_matrix(0.3, params)
    st_ = VertexState(1, 2, 3, 2)
    assert R[(st_.sigma - 1) * n + st_.nu - 1, (st_.rho - 1) * n + st_.mu - 1] == weight_additive(st_, 0.3, params)


def test_w2_family_vanishes_at_zero():
    params = ModelParams.discrete(5, 1)
    for st_, fam, *_ in structure(5):
        if fam == "w2":
            assert weight_additive(st_, 0.0, params) == 0


@pytest.mark.parametrize("params", all_params(), ids=str)
def test_cplus_is_constant(params):
    ref = bracket(2, params.crossing) * bracket(params.n - 2, params.crossing)
    for u in (0.1, 0.5, -0.7):
        assert abs(w_cplus(u, params) - ref) < 1e-14


def test_cplus_state_and_family():
    assert c_plus_state(5) == VertexState(1, 5, 5, 1)
    assert family(c_plus_state(5), 5)[0] == "w7"


@pytest.mark.parametrize("n", [3, 4, 5, 6])
@pytest.mark.parametrize("lam", ["discrete", 0.43])
def test_ybe(n, lam, rng):
    if lam == "discrete":
        params = ModelParams.discrete(n, 1) if n > 3 else P3
    else:
        params = ModelParams.continuous(n, lam)
    for _ in range(4):
        u, v = rng.uniform(-1, 1, 2)
        assert ybe_residual(u, v, params) < 1e-12
        assert ybe_residual(u, v, params, transpose=True) < 1e-12


def test_ybe_detects_a_broken_weight(rng, monkeypatch):
    params = ModelParams.continuous(4, 0.43)
    real = weight_tensor

    def broken(u, p):
        W = real(u, p)
        W[0, 0, 0, 0] *= 1.01
        return W

    import dwsolve.model as model

    monkeypatch.setattr(model, "weight_tensor", broken)
    assert ybe_residual(0.2, 0.3, params) > 1e-4


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 4, 5, 6]), st.floats(-0.4, 0.4), st.floats(-0.4, 0.4))
def test_multiplicative_is_additive_times_overall_factor(n, x, y):
    params = ModelParams.discrete(n, 1) if n > 3 else P3
    k = params.k
    X, Y = k**x, k**y
    u = -x + y
    f = overall_factor(u, params)
    for st_, *_ in structure(n):
        wm = weight_multiplicative(st_, X, Y, params)
        wa = weight_additive(st_, u, params)
        assert abs(wm - f * wa) < 1e-12 * max(1.0, abs(wm))


@pytest.mark.parametrize("n", [4, 5, 6])
def test_weight_degrees(n):
    params = ModelParams.continuous(n, 0.41)
    assert weight_degree("w1", (1, None), params) == 2
    assert weight_degree("w2", (1, 2), params) == 2
    assert weight_degree("w3", (1, None), params) == 2
    if n % 2:
        assert weight_degree("w4", ((n + 1) // 2, None), params) == 2
    assert weight_degree("w5", (1, 2), params) == 1
    assert weight_degree("w6", (2, 1), params) == 1
    assert weight_degree("w7", (1, 2), params) == 1
    assert weight_degree("w8", (2, 1), params) == 1
    # the outermost conjugate pair includes the constant c+ vertex
    assert weight_degree("w7", (1, n), params) == 0
    assert weight_degree("w8", (n, 1), params) == 0
    assert weight_degree(C_PLUS, (1, None), params) == 0
    if n % 2 == 0:
        mid = n // 2
        assert weight_degree("w7", (mid, mid + 1), params) == 0
    else:
        assert weight_degree("w7", (2, n - 1), params) == 1


def test_named_weights():
    p = ModelParams.discrete(5, 1)
    s = lambda z: math.sin(p.lam * z)  # noqa: E731
    u = 0.37
    assert abs(w1(u, p) - s(u + 3) * s(u + 2)) < 1e-15
    assert abs(w2(u, p) - s(u + 3) * s(u)) < 1e-15
    assert abs(w3(u, p) - s(u + 1) * s(u)) < 1e-15


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams.continuous(2, 0.3)
    p = ModelParams.from_lambda(5, math.pi / 4)
    assert p.is_discrete and p.m == 1
    assert not ModelParams.from_lambda(5, 0.3).is_discrete
    assert ModelParams.discrete(4, 2).degenerate
    assert not ModelParams.discrete(5, 1).degenerate
    assert [ModelParams.discrete(5, m).dw_sign for m in (1, 2, 3)] == [1, -1, 1]
    assert P3.dw_sign == -1
