"""Seeded random ensembles for tests and the self-verifying acceptance suite.

Everything takes an explicit numpy Generator; nothing touches global RNG state.
"""

from __future__ import annotations

import numpy as np

from .testspace import TestSpace


def random_unit_vector(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar-uniform unit vector from a normalized complex Gaussian sample."""
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_hermitian(rng: np.random.Generator, d: int, trace: float | None = None) -> np.ndarray:
    """GUE-style Hermitian matrix, optionally rescaled/shifted to a given trace."""
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    h = (g + g.conj().T) / 2.0
    if trace is not None:
        h = h + (trace - np.trace(h).real) / d * np.eye(d)
    return h

def random_psd(rng: np.random.Generator, d: int, trace: float | None = None) -> np.ndarray:
    """Wishart-style PSD matrix G·G†, optionally normalized to a given trace."""
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    p = g @ g.conj().T
    if trace is not None:
        p = p * (trace / np.trace(p).real)
    return p


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_rank(rng: np.random.Generator, d: int, rank: int, min_sv: float = 0.3) -> np.ndarray:
    """Random d x d matrix of exact rank `rank`, nonzero singular values >= min_sv."""
    u = random_unitary(rng, d)
    v = random_unitary(rng, d)
    sv = np.zeros(d)
    sv[:rank] = min_sv + rng.uniform(0.5, 1.5, size=rank)
    return (u * sv) @ v.conj().T


def random_test_space(
    rng: np.random.Generator,
    prefix: str,
    max_outcomes: int = 6,
    max_tests: int = 3,
    max_test_size: int = 3,
) -> TestSpace:
    """Random small test space: labeled outcomes covered by 1..max_tests tests."""
    n_tests = int(rng.integers(1, max_tests + 1))
    sizes = [int(rng.integers(1, max_test_size + 1)) for _ in range(n_tests)]
    # Draw tests over a provisional pool, then keep only outcomes actually used
    # so the covering invariant holds by construction.
    pool = [f"{prefix}{i}" for i in range(max_outcomes)]
    tests = []
    for s in sizes:
        s = min(s, len(pool))
        picks = rng.choice(len(pool), size=s, replace=False)
        tests.append(tuple(pool[i] for i in sorted(picks)))
    tests = list(dict.fromkeys(tests))
    used = sorted({x for t in tests for x in t}, key=lambda s: int(s[len(prefix):]))
    return TestSpace(used, tests)


def product_state_table(
    rng: np.random.Generator, alice: TestSpace, bob: TestSpace, mixture: int = 3
) -> dict[tuple[str, str], float] | None:
    """Influence-free table: a convex mixture of product states.

    Component states come from per-test proportional fitting; None if either
    side's space defeats the fitting (e.g. admits no state at all).
    """
    weights = rng.dirichlet(np.ones(mixture))
    table = {(x, y): 0.0 for x in alice.outcomes for y in bob.outcomes}
    for w in weights:
        fa = _random_state(rng, alice)
        fb = _random_state(rng, bob)
        if fa is None or fb is None:
            return None
        for x in alice.outcomes:
            for y in bob.outcomes:
                table[(x, y)] += w * fa[x] * fb[y]
    return table


def _random_state(
    rng: np.random.Generator, ts: TestSpace, rounds: int = 4000
) -> dict[str, float] | None:
    """Random state via per-test proportional rescaling; None if it won't settle."""
    f = {x: float(rng.uniform(0.05, 1.0)) for x in ts.outcomes}
    for _ in range(rounds):
        worst = 0.0
        for t in ts.tests:
            s = sum(f[x] for x in t)
            if s <= 0:
                return None
            worst = max(worst, abs(s - 1.0))
            for x in t:
                f[x] /= s
        if worst < 1e-13:
            return f
    return None


def signalling_table(
    rng: np.random.Generator,
    alice: TestSpace,
    bob: TestSpace,
    rounds: int = 1000,
    min_deviation: float = 1e-6,
) -> dict[tuple[str, str], float] | None:
    """Random table normalized per product test by iterative proportional fitting.

    Returns a state on the Cartesian product that is (generically) signalling;
    None if fitting fails in `rounds` passes or the sample comes out too close
    to influence-free to be a decisive instance.
    """
    table = {
        (x, y): float(rng.uniform(0.05, 1.0))
        for x in alice.outcomes
        for y in bob.outcomes
    }
    done = False
    for _ in range(rounds):
        worst = 0.0
        for ea in alice.tests:
            for eb in bob.tests:
                s = sum(table[(x, y)] for x in ea for y in eb)
                if s <= 0:
                    return None
                worst = max(worst, abs(s - 1.0))
                for x in ea:
                    for y in eb:
                        table[(x, y)] /= s
        if worst < 1e-13:
            done = True
            break
    if not done:
        return None
    dev = _signalling_deviation(table, alice, bob)
    if dev < min_deviation:
        return None
    return table


def _signalling_deviation(table, alice: TestSpace, bob: TestSpace) -> float:
    """Largest marginal deviation across either side's choice of test."""
    worst = 0.0
    for x in alice.outcomes:
        sums = [sum(table[(x, y)] for y in f) for f in bob.tests]
        worst = max(worst, max(sums) - min(sums))
    for y in bob.outcomes:
        sums = [sum(table[(x, y)] for x in e) for e in alice.tests]
        worst = max(worst, max(sums) - min(sums))
    return worst
