"""Linear maps as Choi operators: application, composition, CP/co-CP tests,
Kraus extraction, product-vector evaluation, and tomographic reconstruction.

Convention, fixed across the package: the Choi operator of a map phi with
input dimension n is

    W_phi = sum_ij |i><j| (x) phi(|i><j|)  =  (id (x) phi)(Q),

with Q = sum_ij |i><j| (x) |i><j| the unnormalized maximally entangled
operator. Block (i,j) of the Choi operator is phi applied to the matrix unit
E_ij. Only Hermiticity-preserving maps are representable (Hermitian Choi).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    HermitianOperator,
    as_matrix,
    hermitian_eig,
    kron,
    partial_transpose,
)


def unnormalized_q(n: int) -> np.ndarray:
    """Q = sum_ef |ee><ff| on an n x n bipartite space; rank 1, trace n."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    v = np.eye(n, dtype=complex).reshape(n * n)  # the vector sum_e |e>|e>
    return np.outer(v, v.conj())


def swap_operator(n: int) -> np.ndarray:
    """The swap S|x>|y> = |y>|x|; equals the Choi operator of transposition."""
    s = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            s[i * n + j, j * n + i] = 1.0
    return s


class LinearMapChoi:
    """A Hermiticity-preserving linear map stored as its Choi operator."""

    def __init__(self, choi, din: int, dout: int, tol: float = DEFAULT_TOL):
        h = HermitianOperator(choi, tol=tol)
        if din < 1 or dout < 1 or h.dim != din * dout:
            raise ValueError(
                f"Choi dimension {h.dim} does not equal din*dout = {din}*{dout}"
            )
        self.choi = h.matrix
        self.din = int(din)
        self.dout = int(dout)

    def __repr__(self):
        return f"LinearMapChoi(din={self.din}, dout={self.dout})"


@dataclass(frozen=True)
class KrausSet:
    """Operators A_i with phi(X) = sum_i A_i X A_i† (weights folded in)."""

    operators: tuple[np.ndarray, ...]


def identity_map(n: int) -> LinearMapChoi:
    return LinearMapChoi(unnormalized_q(n), n, n)


def transpose_map(n: int) -> LinearMapChoi:
    return LinearMapChoi(swap_operator(n), n, n)


def choi_from_conjugation(a) -> LinearMapChoi:
    """Choi operator of X -> A X A† for a dout x din matrix A.

    The Choi operator is the rank-one |v><v| with v = sum_i |i> (x) A|i>;
    its (i,j) block is |a_i><a_j| for the columns a_i of A.
    """
    a = as_matrix(a)
    dout, din = a.shape
    v = a.T.reshape(din * dout)  # v[(i,k)] = A[k,i]
    return LinearMapChoi(np.outer(v, v.conj()), din, dout)


def apply_map(m: LinearMapChoi, x) -> np.ndarray:
    """phi(X) via the Choi blocks: sum_ij X[i,j] · phi(E_ij)."""
    x = as_matrix(x)
    if x.shape != (m.din, m.din):
        raise ValueError(f"input must be {m.din}x{m.din}, got {x.shape}")
    c = m.choi.reshape(m.din, m.dout, m.din, m.dout)
    return np.einsum("ij,iajb->ab", x, c)


def compose_maps(f: LinearMapChoi, g: LinearMapChoi) -> LinearMapChoi:
    """Choi operator of f∘g, assembled by applying f∘g to the matrix units."""
    if f.din != g.dout:
        raise ValueError(
            f"cannot compose: inner dimensions differ ({f.din} vs {g.dout})"
        )
    din, dout = g.din, f.dout
    choi = np.zeros((din * dout, din * dout), dtype=complex)
    c4 = choi.reshape(din, dout, din, dout)
    for i in range(din):
        for j in range(din):
            e = np.zeros((din, din), dtype=complex)
            e[i, j] = 1.0
            c4[i, :, j, :] = apply_map(f, apply_map(g, e))
    # Matrix-unit assembly keeps Hermiticity up to rounding; admit with the
    # same defect bookkeeping as any other construction.
    return LinearMapChoi(choi, din, dout, tol=1e-7)


def transpose_in_basis(m: LinearMapChoi, u) -> LinearMapChoi:
    """Choi operator of m∘sigma, sigma transposition in the basis U·(standard).

    sigma(X) = U (U† X U)^t U† factors as (conjugation by U U^t) ∘ (standard
    transposition), so the composite is assembled from existing pieces.
    """
    u = as_matrix(u)
    if u.shape[0] != u.shape[1] or u.shape[0] != m.din:
        raise ValueError("basis matrix must be square with the map's input dimension")
    if np.linalg.norm(u @ u.conj().T - np.eye(m.din)) > 1e-10:
        raise ValueError("basis matrix is not unitary within 1e-10")
    rotate = choi_from_conjugation(u @ u.T)
    return compose_maps(m, compose_maps(rotate, transpose_map(m.din)))


def is_cp(m: LinearMapChoi, tol: float = DEFAULT_TOL):
    """Completely positive iff the Choi operator is PSD (within tol)."""
    from .cones import is_psd  # cone verdicts live with the cone machinery

    return is_psd(m.choi, tol=tol)


def is_co_cp(m: LinearMapChoi, tol: float = DEFAULT_TOL):
    """Co-completely-positive iff the partially transposed Choi operator is PSD.

    The input factor is transposed; transposing the output factor instead
    differs by a full transpose and has the same spectrum.
    """
    from .cones import is_psd

    if m.din != m.dout:
        raise ValueError("co-CP check needs din == dout")
    gamma = partial_transpose(m.choi, (m.din, m.dout), 0)
    return is_psd(gamma, tol=tol)


def hk_representation(m: LinearMapChoi, tol: float = DEFAULT_TOL) -> KrausSet:
    """Kraus operators from the eigendecomposition of a PSD Choi operator.

    A_k = sqrt(lambda_k) · unfold(v_k) with unfold reading v as the matrix
    v[(i,j)] = A[j,i]; eigenvalues within tol of 0 are dropped. Raises if the
    Choi operator has a negative eigenvalue beyond tol.
    """
    vals, vecs = hermitian_eig(m.choi)
    if vals[-1] < -tol:
        raise ValueError(
            f"map is not completely positive (Choi eigenvalue {vals[-1]:.3e})"
        )
    drop = 1e-12 * max(1.0, float(vals[0]))
    ops = []
    for k in range(len(vals)):
        if vals[k] <= drop:
            continue
        a = np.sqrt(vals[k]) * vecs[:, k].reshape(m.din, m.dout).T
        ops.append(a)
    return KrausSet(tuple(ops))


def state_eval(w, dims: tuple[int, int], x, y, tol: float = 1e-10) -> float:
    """<x (x) y| W |x (x) y> for unit vectors x, y; real for Hermitian W."""
    w = as_matrix(w)
    da, db = int(dims[0]), int(dims[1])
    if w.shape != (da * db, da * db):
        raise ValueError(f"operator shape {w.shape} does not match dims {dims}")
    x = np.asarray(x, dtype=complex).reshape(da)
    y = np.asarray(y, dtype=complex).reshape(db)
    if abs(np.linalg.norm(x) - 1.0) > tol or abs(np.linalg.norm(y) - 1.0) > tol:
        raise ValueError("state_eval requires unit vectors")
    v = np.kron(x, y)
    return float(np.real(v.conj() @ w @ v))


def _polarization_family(d: int) -> list[np.ndarray]:
    """d² unit vectors whose projectors form a basis of the Hermitian matrices.

    Basis vectors e_i, then (e_i+e_j)/sqrt2 and (e_i+i·e_j)/sqrt2 for i<j.
    """
    vs = [np.eye(d, dtype=complex)[:, i] for i in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            v = np.zeros(d, dtype=complex)
            v[i], v[j] = 1.0, 1.0
            vs.append(v / np.sqrt(2))
            v = np.zeros(d, dtype=complex)
            v[i], v[j] = 1.0, 1.0j
            vs.append(v / np.sqrt(2))
    return vs


def _check_family(d: int) -> list[np.ndarray]:
    """Held-out product directions used to detect inconsistent evaluators."""
    vs = []
    for i in range(d):
        for j in range(i + 1, d):
            v = np.zeros(d, dtype=complex)
            v[i], v[j] = 1.0, -1.0
            vs.append(v / np.sqrt(2))
            v = np.zeros(d, dtype=complex)
            v[i], v[j] = 1.0, -1.0j
            vs.append(v / np.sqrt(2))
    return vs


def reconstruct_operator(evaluate, da: int, db: int, tol: float = 1e-7) -> np.ndarray:
    """The unique Hermitian W with <xy|W|xy> = evaluate(x, y) on product vectors.

    Evaluates on the polarization family of each side (d² projectors forming a
    Hermitian basis), solves the Gram-coupled linear system, and validates the
    result against held-out product directions; a residual above tol means the
    evaluator is not of the required form.
    """
    fam_a = _polarization_family(da)
    fam_b = _polarization_family(db)
    proj_a = [np.outer(v, v.conj()) for v in fam_a]
    proj_b = [np.outer(v, v.conj()) for v in fam_b]
    gram_a = np.array([[np.trace(p @ q).real for q in proj_a] for p in proj_a])
    gram_b = np.array([[np.trace(p @ q).real for q in proj_b] for p in proj_b])
    m = np.array([[float(evaluate(x, y)) for y in fam_b] for x in fam_a])
    coeff = np.linalg.solve(gram_a, np.linalg.solve(gram_b, m.T).T)
    w = np.zeros((da * db, da * db), dtype=complex)
    for k in range(da * da):
        for l in range(db * db):
            if coeff[k, l] != 0.0:
                w += coeff[k, l] * kron(proj_a[k], proj_b[l])
    w = (w + w.conj().T) / 2.0
    worst = 0.0
    for x in _check_family(da) or fam_a[:1]:
        for y in _check_family(db) or fam_b[:1]:
            worst = max(worst, abs(state_eval(w, (da, db), x, y) - float(evaluate(x, y))))
    if worst > tol:
        raise ValueError(
            f"evaluator is inconsistent with any Hermitian operator "
            f"(held-out residual {worst:.3e})"
        )
    return w


def trace_condition(m: LinearMapChoi) -> tuple[float, float]:
    """(Tr of the Choi operator, Tr of phi(1)); the two always agree."""
    tr_choi = float(np.trace(m.choi).real)
    tr_phi1 = float(np.trace(apply_map(m, np.eye(m.din))).real)
    return tr_choi, tr_phi1
