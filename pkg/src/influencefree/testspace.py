"""Finite test spaces, their states, and positive/signed weights.

A test space is an outcome set X together with a covering family of non-empty
tests (subsets of X); a state assigns [0,1] values summing to 1 over every
test. E-test spaces allow multiset tests (outcomes with multiplicity).
Tables are plain mappings outcome -> float.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping

import numpy as np

from .linalg import DEFAULT_TOL, CapExceededError


@dataclass(frozen=True)
class TestSpace:
    """Outcome labels (ordered, opaque strings) plus a family of set tests."""

    outcomes: tuple[str, ...]
    tests: tuple[tuple[str, ...], ...]

    def __init__(self, outcomes, tests):
        outcomes = tuple(str(x) for x in outcomes)
        if len(set(outcomes)) != len(outcomes):
            raise ValueError("duplicate outcome labels")
        index = {x: i for i, x in enumerate(outcomes)}
        canon = []
        for t in tests:
            t = [str(x) for x in t]
            if not t:
                raise ValueError("tests must be non-empty")
            unknown = [x for x in t if x not in index]
            if unknown:
                raise ValueError(f"test contains unknown outcomes {unknown}")
            if len(set(t)) != len(t):
                raise ValueError(f"test {t} repeats an outcome (use ETestSpace)")
            canon.append(tuple(sorted(t, key=index.__getitem__)))
        covered = set().union(*map(set, canon)) if canon else set()
        if covered != set(outcomes):
            raise ValueError(f"tests do not cover outcomes {sorted(set(outcomes) - covered)}")
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "tests", tuple(canon))

    def outcome_index(self, x: str) -> int:
        try:
            return self.outcomes.index(x)
        except ValueError:
            raise ValueError(f"unknown outcome {x!r}") from None


@dataclass(frozen=True)
class ETestSpace:
    """Test space with multiset tests: each test maps outcome -> multiplicity."""

    outcomes: tuple[str, ...]
    tests: tuple[tuple[tuple[str, int], ...], ...]

    def __init__(self, outcomes, tests):
        outcomes = tuple(str(x) for x in outcomes)
        if len(set(outcomes)) != len(outcomes):
            raise ValueError("duplicate outcome labels")
        index = {x: i for i, x in enumerate(outcomes)}
        canon = []
        for t in tests:
            items = dict(t)
            if any(x not in index for x in items):
                raise ValueError(f"test refers to unknown outcomes: {sorted(items)}")
            if any(int(m) < 0 for m in items.values()):
                raise ValueError("multiplicities must be non-negative")
            positive = {x: int(m) for x, m in items.items() if int(m) > 0}
            if not positive:
                raise ValueError("each test needs at least one positive multiplicity")
            canon.append(tuple(sorted(positive.items(), key=lambda kv: index[kv[0]])))
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "tests", tuple(canon))


def _require_all_outcomes(outcomes, f: Mapping[str, float]):
    missing = [x for x in outcomes if x not in f]
    if missing:
        raise ValueError(f"table is missing outcomes {missing}")


def is_state(ts: TestSpace, f: Mapping[str, float], tol: float = DEFAULT_TOL) -> bool:
    """True iff values lie in [0,1] and every test sums to 1, all within tol."""
    _require_all_outcomes(ts.outcomes, f)
    for x in ts.outcomes:
        v = f[x]
        if v < -tol or v > 1.0 + tol:
            return False
    for t in ts.tests:
        if abs(sum(f[x] for x in t) - 1.0) > tol:
            return False
    return True


def is_estate(ets: ETestSpace, f: Mapping[str, float], tol: float = DEFAULT_TOL) -> bool:
    """is_state for multiset tests: multiplicity-weighted sums must be 1."""
    _require_all_outcomes(ets.outcomes, f)
    for x in ets.outcomes:
        v = f[x]
        if v < -tol or v > 1.0 + tol:
            return False
    for t in ets.tests:
        if abs(sum(m * f[x] for x, m in t) - 1.0) > tol:
            return False
    return True


def is_positive_weight(
    ts: TestSpace, f: Mapping[str, float], tol: float = DEFAULT_TOL
) -> float | None:
    """Return the common test-sum K if f >= 0 with constant test sums, else None."""
    _require_all_outcomes(ts.outcomes, f)
    if any(f[x] < -tol for x in ts.outcomes):
        return None
    sums = [sum(f[x] for x in t) for t in ts.tests]
    k = sums[0]
    if any(abs(s - k) > tol for s in sums):
        return None
    return float(k)


def variation_norm(ts: TestSpace, f: Mapping[str, float]) -> float:
    """max over tests E of sum_{x in E} |f(x)| (the variation of f)."""
    _require_all_outcomes(ts.outcomes, f)
    return max(sum(abs(f[x]) for x in t) for t in ts.tests)


def weight_space_dimension(ts: TestSpace, cap: int = 16) -> tuple[int, int]:
    """Dimension of the constant-test-sum space and state-polytope vertex count.

    The constant-sum space is {f : all test-sums equal}; its dimension is
    |X| minus the rank of the test-sum difference constraints. Vertices of
    {f >= 0, every test-sum = 1} are enumerated as basic feasible solutions:
    a feasible point is a vertex exactly when the incidence columns of its
    support are linearly independent.
    """
    m = len(ts.outcomes)
    if m > cap:
        raise CapExceededError(
            f"{m} outcomes exceeds the vertex-enumeration cap {cap}", required=m
        )
    index = {x: i for i, x in enumerate(ts.outcomes)}
    a = np.zeros((len(ts.tests), m))
    for r, t in enumerate(ts.tests):
        for x in t:
            a[r, index[x]] = 1.0

    if len(ts.tests) <= 1:
        dim_constant = m
    else:
        diffs = a[1:] - a[0]
        dim_constant = m - int(np.linalg.matrix_rank(diffs, tol=1e-9))

    rank_a = int(np.linalg.matrix_rank(a, tol=1e-9))
    ones = np.ones(len(ts.tests))
    vertices: set[tuple[int, ...]] = set()
    for size in range(1, rank_a + 1):
        for support in combinations(range(m), size):
            cols = a[:, support]
            if np.linalg.matrix_rank(cols, tol=1e-9) < size:
                continue
            x, *_ = np.linalg.lstsq(cols, ones, rcond=None)
            if np.linalg.norm(cols @ x - ones) > 1e-9:
                continue
            if np.any(x <= 1e-9):
                continue
            full = np.zeros(m)
            full[list(support)] = x
            vertices.add(tuple(np.round(full, 9)))
    return dim_constant, len(vertices)
