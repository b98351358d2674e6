"""Coupled test spaces: products, influence, conditioning, Bayes residuals."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from influencefree.coupling import (
    ProductState,
    TwoStageTest,
    backward_tests,
    bayes_mixture_check,
    cartesian_tests,
    condition,
    fns_tests,
    forward_tests,
    is_influence_free,
    is_state_on_two_stage,
    marginal,
    operational_bayes_check,
)
from influencefree.linalg import CapExceededError
from influencefree.sampling import product_state_table, random_test_space
from influencefree.testspace import TestSpace


def pr_box():
    """Uniform-marginal box: outputs of test i on one side and j on the other
    anti-correlate exactly when i = j = 1."""
    alice = TestSpace(
        ["a00", "a01", "a10", "a11"], [("a00", "a01"), ("a10", "a11")]
    )
    bob = TestSpace(
        ["b00", "b01", "b10", "b11"], [("b00", "b01"), ("b10", "b11")]
    )
    table = {}
    for i in range(2):
        for a in range(2):
            for j in range(2):
                for b in range(2):
                    hit = (a ^ b) == (i & j)
                    table[(f"a{i}{a}", f"b{j}{b}")] = 0.5 if hit else 0.0
    return ProductState(alice, bob, table)


FNS_ALICE = TestSpace(["x1", "x2"], [("x1", "x2")])
FNS_BOB = TestSpace(["y1", "y2", "y3"], [("y1", "y2"), ("y1", "y3")])


def test_product_state_validates_table():
    alice = TestSpace(["p", "q"], [("p", "q")])
    bob = TestSpace(["r", "s"], [("r", "s")])
    good = {("p", "r"): 0.5, ("p", "s"): 0.0, ("q", "r"): 0.25, ("q", "s"): 0.25}
    omega = ProductState(alice, bob, good)
    assert omega("p", "r") == 0.5
    with pytest.raises(ValueError):
        ProductState(alice, bob, {("p", "r"): 1.0})
    bad_sum = {**good, ("q", "s"): 0.35}
    with pytest.raises(ValueError):
        ProductState(alice, bob, bad_sum)
    negative = {**good, ("p", "s"): -0.2, ("q", "s"): 0.45}
    with pytest.raises(ValueError):
        ProductState(alice, bob, negative)


def test_cartesian_tests_enumerate_products():
    tests = cartesian_tests(FNS_ALICE, FNS_BOB)
    assert len(tests) == 2
    assert all(len(t) == 4 for t in tests)
    assert set(tests[0]) == {("x1", "y1"), ("x1", "y2"), ("x2", "y1"), ("x2", "y2")}


def test_two_stage_enumeration_counts_and_dedup():
    fwd = forward_tests(FNS_ALICE, FNS_BOB)
    bwd = backward_tests(FNS_ALICE, FNS_BOB)
    fns = fns_tests(FNS_ALICE, FNS_BOB)
    # one Alice test, two response choices per outcome
    assert len(fwd) == 4
    # two Bob tests, a single Alice response
    assert len(bwd) == 2
    # both backward tests coincide with constant-assignment forward tests
    assert len(fns) == 4
    assert all(t.direction == "forward" for t in fns)
    pair_sets = {t.outcome_pairs() for t in fns}
    assert len(pair_sets) == 4


def test_two_stage_test_validation():
    with pytest.raises(ValueError):
        TwoStageTest("sideways", ("x1",), (("x1", ("y1",)),))
    with pytest.raises(ValueError):
        TwoStageTest("forward", ("x1", "x2"), (("x1", ("y1",)),))
    t = TwoStageTest("backward", ("y1", "y2"), (("y1", ("x1",)), ("y2", ("x2",))))
    assert t.outcome_pairs() == frozenset({("x1", "y1"), ("x2", "y2")})


def test_enumeration_cap():
    big_bob = TestSpace(
        [f"y{i}" for i in range(6)],
        [(f"y{i}", f"y{(i + 1) % 6}") for i in range(6)],
    )
    with pytest.raises(CapExceededError) as exc:
        forward_tests(FNS_ALICE, big_bob, cap=10)
    assert exc.value.required > 10


def test_pr_box_is_influence_free_with_uniform_marginals():
    omega = pr_box()
    verdict = is_influence_free(omega)
    assert verdict.free
    assert verdict.max_deviation <= 1e-15
    for j in range(2):
        wa = marginal(omega, "alice", j)
        assert all(v == pytest.approx(0.5) for v in wa.values())
    fwd = forward_tests(omega.alice, omega.bob)
    bwd = backward_tests(omega.alice, omega.bob)
    assert is_state_on_two_stage(omega, fwd)
    assert is_state_on_two_stage(omega, bwd)


def test_pr_box_conditionals_are_point_masses():
    omega = pr_box()
    cond = condition(omega, "a00", side="alice")
    assert cond["b00"] == pytest.approx(1.0)
    assert cond["b01"] == pytest.approx(0.0)
    # conditioning on Bob's output 1 of his second test: Alice's second test
    # must anti-correlate, her first must agree
    cond_b = condition(omega, "b11", side="bob")
    assert cond_b["a10"] == pytest.approx(1.0)
    assert cond_b["a11"] == pytest.approx(0.0)
    assert cond_b["a01"] == pytest.approx(1.0)


def signalling_box():
    """Bob's marginal depends on which test Alice performs."""
    alice = TestSpace(["a1", "a2", "a3"], [("a1", "a2"), ("a1", "a3")])
    bob = TestSpace(["b1", "b2"], [("b1", "b2")])
    table = {
        ("a1", "b1"): 0.5, ("a1", "b2"): 0.1,
        ("a2", "b1"): 0.2, ("a2", "b2"): 0.2,
        ("a3", "b1"): 0.0, ("a3", "b2"): 0.4,
    }
    return ProductState(alice, bob, table)


def test_signalling_detected_with_direction():
    omega = signalling_box()
    verdict = is_influence_free(omega)
    assert not verdict.free
    # Bob's b1 mass moves 0.7 -> 0.5 as Alice switches tests
    assert verdict.alice_to_bob.max_deviation == pytest.approx(0.2)
    assert verdict.bob_to_alice.max_deviation == 0.0
    assert verdict.direction == "alice->bob"
    assert verdict.alice_to_bob.outcome in ("b1", "b2")

    fwd = forward_tests(omega.alice, omega.bob)
    bwd = backward_tests(omega.alice, omega.bob)
    # Alice's marginal ignores Bob, so every forward test still sums to one
    assert is_state_on_two_stage(omega, fwd)
    assert not is_state_on_two_stage(omega, bwd)


def test_condition_refuses_influenced_and_null_outcomes():
    omega = signalling_box()
    with pytest.raises(ValueError, match="alice->bob"):
        condition(omega, "b1", side="bob")
    # conditioning on a zero-probability outcome is refused
    alice = TestSpace(["p", "q"], [("p", "q")])
    bob = TestSpace(["r", "s"], [("r", "s")])
    omega0 = ProductState(
        alice, bob,
        {("p", "r"): 1.0, ("p", "s"): 0.0, ("q", "r"): 0.0, ("q", "s"): 0.0},
    )
    with pytest.raises(ValueError):
        condition(omega0, "q", side="alice")


def test_marginal_semantics():
    omega = signalling_box()
    # Alice's marginal at Bob's only test
    wa = marginal(omega, "alice", 0)
    assert wa["a1"] == pytest.approx(0.6)
    # Bob's marginal depends on the Alice test chosen
    wb0 = marginal(omega, "bob", 0)
    wb1 = marginal(omega, "bob", 1)
    assert wb0["b1"] == pytest.approx(0.7)
    assert wb1["b1"] == pytest.approx(0.5)
    # a collection of outcomes can stand in for a test index
    wb = marginal(omega, "bob", ("a1", "a2"))
    assert wb["b2"] == pytest.approx(0.3)


def test_bayes_residuals_vanish_on_pr_box():
    omega = pr_box()
    for i in range(2):
        assert bayes_mixture_check(omega, i) <= 1e-15
    assert operational_bayes_check(omega, "a00", "b00") <= 1e-15
    # zero joint mass is fine; a zero marginal is the refusal
    alice = TestSpace(["p", "q"], [("p", "q")])
    bob = TestSpace(["r", "s"], [("r", "s")])
    omega0 = ProductState(
        alice, bob,
        {("p", "r"): 1.0, ("p", "s"): 0.0, ("q", "r"): 0.0, ("q", "s"): 0.0},
    )
    with pytest.raises(ValueError):
        operational_bayes_check(omega0, "q", "r")


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_product_mixture_tables_are_influence_free(seed):
    rng = np.random.default_rng(seed)
    alice = random_test_space(rng, "a", max_outcomes=4, max_tests=2, max_test_size=2)
    bob = random_test_space(rng, "b", max_outcomes=4, max_tests=2, max_test_size=2)
    table = product_state_table(rng, alice, bob)
    if table is None:
        return
    omega = ProductState(alice, bob, table)
    verdict = is_influence_free(omega, tol=1e-10)
    assert verdict.free
