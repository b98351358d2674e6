"""Test spaces, states, weights, and the small-polytope dimension helper."""

import pytest

from influencefree.linalg import CapExceededError
from influencefree.testspace import (
    ETestSpace,
    TestSpace,
    is_estate,
    is_positive_weight,
    is_state,
    variation_norm,
    weight_space_dimension,
)

CHAIN = TestSpace(["a", "x", "b"], [("a", "x"), ("x", "b")])
FIREFLY = TestSpace(["l", "r", "f", "b", "d"], [("l", "r", "d"), ("f", "b", "d")])


def test_constructor_canonicalizes_and_validates():
    ts = TestSpace(["q", "p"], [("q", "p")])
    assert ts.outcomes == ("q", "p")
    assert ts.tests == (("q", "p"),)

    with pytest.raises(ValueError):
        TestSpace(["a", "a"], [("a",)])
    with pytest.raises(ValueError):
        TestSpace(["a"], [()])
    with pytest.raises(ValueError):
        TestSpace(["a"], [("a", "zz")])
    with pytest.raises(ValueError, match="ETestSpace"):
        TestSpace(["a", "b"], [("a", "a"), ("a", "b")])
    with pytest.raises(ValueError, match="cover"):
        TestSpace(["a", "b", "c"], [("a", "b")])
    with pytest.raises(ValueError):
        CHAIN.outcome_index("nope")
    assert CHAIN.outcome_index("x") == 1


def test_is_state_on_chain():
    assert is_state(CHAIN, {"a": 0.25, "x": 0.75, "b": 0.25})
    assert not is_state(CHAIN, {"a": 0.25, "x": 0.75, "b": 0.3})
    assert not is_state(CHAIN, {"a": -0.1, "x": 1.1, "b": -0.1})
    # tolerance is respected
    assert is_state(CHAIN, {"a": 0.25 + 5e-10, "x": 0.75, "b": 0.25}, tol=1e-9)
    with pytest.raises(ValueError):
        is_state(CHAIN, {"a": 1.0, "x": 0.0})


def test_estate_weights_multiplicities():
    ets = ETestSpace(["u", "v"], [(("u", 2), ("v", 1))])
    assert ets.tests == ((("u", 2), ("v", 1)),)
    assert is_estate(ets, {"u": 0.25, "v": 0.5})
    assert not is_estate(ets, {"u": 0.5, "v": 0.5})
    with pytest.raises(ValueError):
        ETestSpace(["u"], [(("u", 0),)])
    with pytest.raises(ValueError):
        ETestSpace(["u"], [(("u", -1),)])


def test_positive_weight_returns_common_sum():
    assert is_positive_weight(CHAIN, {"a": 0.5, "x": 1.5, "b": 0.5}) == pytest.approx(2.0)
    assert is_positive_weight(CHAIN, {"a": 0.5, "x": 1.5, "b": 0.6}) is None
    assert is_positive_weight(CHAIN, {"a": -0.5, "x": 1.5, "b": -0.5}) is None


def test_variation_norm_is_max_test_sum_of_abs():
    f = {"a": -0.5, "x": 0.25, "b": 1.0}
    assert variation_norm(CHAIN, f) == pytest.approx(1.25)


def test_weight_space_dimension_frozen_values():
    # chain: constant-sum space {f(a)=f(b)} has dimension 2; the state
    # segment w(x) in [0,1] has endpoints (1,0,1) and (0,1,0)
    assert weight_space_dimension(CHAIN) == (2, 2)
    # firefly pair sharing the dark outcome: one difference constraint on 5
    # outcomes leaves dimension 4; vertices are d=1 plus the four corners
    # of the d=0 square
    assert weight_space_dimension(FIREFLY) == (4, 5)


def test_weight_space_dimension_single_test():
    ts = TestSpace(["a", "b"], [("a", "b")])
    assert weight_space_dimension(ts) == (2, 2)


def test_weight_space_dimension_cap():
    labels = [f"o{i}" for i in range(17)]
    ts = TestSpace(labels, [tuple(labels)])
    with pytest.raises(CapExceededError) as exc:
        weight_space_dimension(ts)
    assert exc.value.required == 17
    assert weight_space_dimension(ts, cap=17) == (17, 17)
