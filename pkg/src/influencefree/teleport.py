"""Four-party teleportation algebra on a fixed (A1, A2, B2, B1) layout.

Alice holds the first two factors, Bob the last two.  A bipartite operator
``w`` lives on the outer pair (A1, B1); the inner pair (A2, B2) carries a
maximally entangled projector.  Projecting Alice's pair onto an entangled
vector transfers ``w`` onto Bob's pair, up to a constant that equals the
outcome probability of that projection.  The functions here build both sides
of that identity independently and report the gap, rather than assuming it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .choimaps import swap_operator, unnormalized_q
from .cones import ConeVerdict, is_popt
from .linalg import (
    DEFAULT_TOL,
    HermitianOperator,
    as_matrix,
    frobenius,
    kron,
    partial_trace,
    permute_systems,
)

__all__ = [
    "FourPartyLayout",
    "PivotReport",
    "GeneralPivotResult",
    "DesideratumReport",
    "bell_projector",
    "twisted_bell_projector",
    "antisymmetric_projector",
    "symmetric_projector",
    "embed_with_entangled_pair",
    "sandwich_lemma_check",
    "weyl_operator",
    "weyl_basis",
    "pivot_alice",
    "pivot_bob",
    "pivot_general",
    "corollary_check",
    "desideratum_violation_demo",
    "unnormalized_q",
]


@dataclass(frozen=True)
class FourPartyLayout:
    """Factor bookkeeping for the four-party picture.

    Factors are ordered (A1, A2, B2, B1), each of local dimension ``n``.
    Alice's bipartition is (A1, A2) versus (B2, B1); the "outer" pairing is
    (A1, B1) and the "inner" pairing is (A2, B2).
    """

    n: int
    order: tuple[str, str, str, str] = ("A1", "A2", "B2", "B1")

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("local dimension must be at least 1")
        if tuple(self.order) != ("A1", "A2", "B2", "B1"):
            raise ValueError("factor order is fixed to (A1, A2, B2, B1)")

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return (self.n, self.n, self.n, self.n)

    @property
    def total_dim(self) -> int:
        return self.n**4

    @property
    def alice_factors(self) -> tuple[int, int]:
        return (0, 1)

    @property
    def bob_factors(self) -> tuple[int, int]:
        return (2, 3)

    @property
    def outer_factors(self) -> tuple[int, int]:
        return (0, 3)

    @property
    def inner_factors(self) -> tuple[int, int]:
        return (1, 2)


@dataclass(frozen=True)
class PivotReport:
    """Both sides of a pivot identity plus the scale factor joining them.

    ``alpha`` is the trace of the projected embedding, i.e. the probability
    of the projection outcome; the identity asserts lhs = alpha * rhs-shape,
    and ``frobenius_gap`` measures how closely that holds.
    """

    alpha: float
    frobenius_gap: float
    lhs: HermitianOperator
    rhs: HermitianOperator


class GeneralPivotResult(NamedTuple):
    alpha: float
    bob_operator: HermitianOperator
    expected: HermitianOperator
    gap: float


def bell_projector(n: int) -> np.ndarray:
    """Projector onto the uniform maximally entangled vector on n x n."""
    return unnormalized_q(n) / n


def twisted_bell_projector(n: int, v: np.ndarray) -> np.ndarray:
    """Projector onto the entangled vector whose coefficient matrix is conj(v)/sqrt(n).

    The conjugate is chosen so that projecting Alice's pair onto this vector
    leaves Bob's pair carrying (v^T ox 1) w (conj(v) ox 1); see pivot_general.
    With v = identity this reproduces bell_projector exactly.
    """
    v = _checked_unitary(v, n)
    vec = np.conj(v).reshape(n * n)
    return np.outer(vec, vec.conj()) / n


def antisymmetric_projector(n: int) -> np.ndarray:
    return (np.eye(n * n) - swap_operator(n)) / 2.0


def symmetric_projector(n: int) -> np.ndarray:
    return (np.eye(n * n) + swap_operator(n)) / 2.0


def _checked_unitary(v: np.ndarray, n: int) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got shape {v.shape}")
    if frobenius(v.conj().T @ v - np.eye(n)) > 1e-10 * max(1.0, frobenius(v)):
        raise ValueError("matrix is not unitary")
    return v


def _checked_bipartite(w, n: int) -> np.ndarray:
    m = as_matrix(w)
    if m.shape != (n * n, n * n):
        raise ValueError(
            f"operator has shape {m.shape}, expected ({n * n}, {n * n}) for local dimension {n}"
        )
    return HermitianOperator(m).matrix


def embed_with_entangled_pair(w, n: int) -> np.ndarray:
    """Place w on the outer pair (A1, B1) and a Bell projector on (A2, B2).

    Built as kron(w, T) followed by an explicit factor permutation into the
    (A1, A2, B2, B1) order; no index arithmetic on the formula level.
    """
    m = _checked_bipartite(w, n)
    layout = FourPartyLayout(n)
    return permute_systems(kron(m, bell_projector(n)), layout.dims, (0, 2, 3, 1))


def sandwich_lemma_check(n: int, x: int, y: int, u: int, v: int) -> np.ndarray:
    """Compute Q (|x><y| ox |u><v|) Q by direct matrix multiplication.

    Q is the unnormalized entangled projector on n x n.  The product equals
    Q itself when x == u and y == v, and vanishes otherwise; callers compare
    against that case split.
    """
    for idx in (x, y, u, v):
        if not 0 <= idx < n:
            raise ValueError(f"basis index {idx} out of range for dimension {n}")
    q = unnormalized_q(n)
    a = np.zeros((n * n, n * n), dtype=complex)
    a[x * n + u, y * n + v] = 1.0
    return q @ a @ q


def weyl_operator(n: int, a: int, b: int) -> np.ndarray:
    """The unitary X^a Z^b: cyclic shift to the a-th power times phase gradient."""
    shift = np.zeros((n, n), dtype=complex)
    shift[(np.arange(n) + 1) % n, np.arange(n)] = 1.0
    omega = np.exp(2j * np.pi / n)
    phase = np.diag(omega ** np.arange(n))
    return np.linalg.matrix_power(shift, a % n) @ np.linalg.matrix_power(phase, b % n)


def weyl_basis(n: int) -> list[np.ndarray]:
    """All n^2 operators X^a Z^b in lexicographic (a, b) order.

    They are pairwise orthogonal in the Hilbert-Schmidt inner product, with
    Tr(V^dag V') = n on the diagonal.
    """
    return [weyl_operator(n, a, b) for a in range(n) for b in range(n)]


def _pivot(w, n: int, side: str) -> PivotReport:
    m = _checked_bipartite(w, n)
    g = embed_with_entangled_pair(m, n)
    t = bell_projector(n)
    eye_pair = np.eye(n * n)
    if side == "alice":
        proj = kron(t, eye_pair)
        rhs_shape = kron(t, m)
    else:
        proj = kron(eye_pair, t)
        rhs_shape = kron(m, t)
    lhs = proj @ g @ proj
    alpha = float(np.real(np.trace(proj @ g)))
    rhs = alpha * rhs_shape
    gap = frobenius(lhs - rhs)
    return PivotReport(
        alpha=alpha,
        frobenius_gap=gap,
        lhs=HermitianOperator(lhs, tol=1e-8),
        rhs=HermitianOperator(rhs, tol=1e-8),
    )


def pivot_alice(w, n: int) -> PivotReport:
    """Project Alice's pair onto the Bell vector and compare with alpha * (T ox w).

    The left side is built by sandwiching the embedding between T ox 1; the
    right side places T on Alice's pair and w on Bob's pair, scaled by alpha.
    alpha itself is recomputed from the trace of the projected embedding.
    """
    return _pivot(w, n, "alice")


def pivot_bob(w, n: int) -> PivotReport:
    """Mirror of pivot_alice with the projection on Bob's pair.

    Here the comparison operator is alpha * (w ox T): w lands on Alice's
    pair, the Bell projector stays on Bob's.
    """
    return _pivot(w, n, "bob")


def pivot_general(w, n: int, v: np.ndarray) -> GeneralPivotResult:
    """Project Alice's pair onto the v-twisted Bell vector and extract Bob's operator.

    The extraction traces the projected embedding over Alice's pair.  The
    comparison operator is alpha * (v^T ox 1) w (conj(v) ox 1), with the
    conjugation acting on the factor of w that was teleported; ``gap`` is the
    Frobenius distance between the two, relative to max(1, norm of expected).
    With v = identity the projector, alpha, and sandwich agree exactly with
    pivot_alice.
    """
    m = _checked_bipartite(w, n)
    v = _checked_unitary(v, n)
    g = embed_with_entangled_pair(m, n)
    t_v = twisted_bell_projector(n, v)
    proj = kron(t_v, np.eye(n * n))
    sandwich = proj @ g @ proj
    alpha = float(np.real(np.trace(proj @ g)))
    bob = partial_trace(sandwich, (n * n, n * n), 0)
    left = kron(v.T, np.eye(n))
    expected = alpha * (left @ m @ left.conj().T)
    gap = frobenius(bob - expected) / max(1.0, frobenius(expected))
    return GeneralPivotResult(
        alpha=alpha,
        bob_operator=HermitianOperator(bob, tol=1e-8),
        expected=HermitianOperator(expected, tol=1e-8),
        gap=gap,
    )


def corollary_check(w, b, n: int) -> tuple[float, float]:
    """Evaluate the product effect T ox b against the embedding of a trace-one w.

    Returns (lhs, rhs) with lhs = Tr[(T ox b) embed(w)] and
    rhs = alpha * Tr(w b); the two agree whenever Tr w = 1, which is enforced.
    Positivity of lhs for every positive semidefinite b would force w itself
    to be positive semidefinite.
    """
    m = _checked_bipartite(w, n)
    trace_w = float(np.real(np.trace(m)))
    if abs(trace_w - 1.0) > 1e-10:
        raise ValueError(f"operator trace is {trace_w}, expected 1 within 1e-10")
    bm = _checked_bipartite(b, n)
    vals = np.linalg.eigvalsh(bm)
    if vals[0] < -1e-9 * max(1.0, frobenius(bm)):
        raise ValueError("effect operator is not positive semidefinite")
    g = embed_with_entangled_pair(m, n)
    t = bell_projector(n)
    lhs = float(np.real(np.trace(kron(t, bm) @ g)))
    alpha = float(np.real(np.trace(kron(t, np.eye(n * n)) @ g)))
    rhs = alpha * float(np.real(np.trace(m @ bm)))
    return lhs, rhs


@dataclass(frozen=True)
class DesideratumReport:
    """Outcome of the product-test negativity demonstration.

    ``negative_value`` is the value the product effect (alice_effect on
    Alice's pair, bob_effect on Bob's pair) assigns to the embedding of w;
    it is strictly negative although w passes the product-vector positivity
    check and the inner pair carries a bona fide state.  The two ``*_min``
    fields record that the negativity disappears when either ingredient is
    replaced by an unentangled counterpart.
    """

    n: int
    alpha: float
    negative_value: float
    alice_effect: np.ndarray
    bob_effect: np.ndarray
    popt_verdict: ConeVerdict
    psd_replacement_min: float
    product_replacement_min: float


def _product_test_values(g: np.ndarray, n: int, bob_effects: list[np.ndarray]) -> list[float]:
    values = []
    for v in weyl_basis(n):
        t_v = twisted_bell_projector(n, v)
        for b in bob_effects:
            values.append(float(np.real(np.trace(kron(t_v, b) @ g))))
    return values


def _bob_effect_family(n: int) -> list[np.ndarray]:
    effects = [antisymmetric_projector(n), symmetric_projector(n)]
    effects.extend(twisted_bell_projector(n, v) for v in weyl_basis(n))
    return effects


def desideratum_violation_demo(n: int = 2, *, seed: int = 2026) -> DesideratumReport:
    """Exhibit a product test with negative value on an otherwise admissible pair.

    w = S/n (S the swap) passes every product-vector positivity check, which
    is certified through its partial transpose; the inner pair carries the
    Bell state.  Yet the product effect (Bell projector on Alice's pair,
    antisymmetric projector on Bob's pair) evaluates to a strictly negative
    number on the embedding.  Replacing w by a positive semidefinite
    operator, or the inner Bell state by a product state, removes every
    negative value over the swept effect family.
    """
    w = swap_operator(n) / n
    verdict = is_popt(w, (n, n), seed=seed)
    lhs, _ = corollary_check(w, antisymmetric_projector(n), n)
    report_alpha = pivot_alice(w, n).alpha

    bob_effects = _bob_effect_family(n)

    rng = np.random.default_rng(seed)
    gauss = rng.standard_normal((n * n, n * n)) + 1j * rng.standard_normal((n * n, n * n))
    random_psd = gauss @ gauss.conj().T
    random_psd /= np.real(np.trace(random_psd))
    pure = np.zeros((n * n, n * n), dtype=complex)
    pure[0, 0] = 1.0
    psd_values = []
    for replacement in (np.eye(n * n) / (n * n), pure, random_psd):
        g = embed_with_entangled_pair(replacement, n)
        psd_values.extend(_product_test_values(g, n, bob_effects))

    layout = FourPartyLayout(n)
    product_values = []
    maximally_mixed = kron(np.eye(n) / n, np.eye(n) / n)
    pure_pair = np.zeros((n * n, n * n), dtype=complex)
    pure_pair[0, 0] = 1.0
    for inner in (maximally_mixed, pure_pair):
        g = permute_systems(kron(w, inner), layout.dims, (0, 2, 3, 1))
        product_values.extend(_product_test_values(g, n, bob_effects))

    return DesideratumReport(
        n=n,
        alpha=report_alpha,
        negative_value=lhs,
        alice_effect=bell_projector(n),
        bob_effect=antisymmetric_projector(n),
        popt_verdict=verdict,
        psd_replacement_min=min(psd_values),
        product_replacement_min=min(product_values),
    )
