"""Dense complex matrix helpers and a Jacobi eigensolver for Hermitian matrices.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Every function
here returns a new array and never mutates its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import ConvergenceError, DimensionError, NotHermitianError, SizeLimitError

MAX_DIM = 2**12
HERMITIAN_TOL = 1e-10
OFFDIAG_TOL = 1e-12
MAX_SWEEPS = 100
# eigenvalues and eigenvector entries are rounded to this many digits when
# breaking ties, so that floating noise cannot reorder degenerate vectors
_TIE_DIGITS = 12


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a finite 2-D complex array."""
    a = np.array(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains NaN or Inf")
    return a


def _check_budget(rows: int, cols: int) -> None:
    if rows > MAX_DIM or cols > MAX_DIM:
        raise SizeLimitError(f"{rows}x{cols} exceeds the {MAX_DIM} per-axis budget")


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    """Kronecker product, refusing results larger than ``MAX_DIM`` per axis."""
    a, b = as_matrix(a), as_matrix(b)
    _check_budget(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])
    return np.kron(a, b)


def trace(m) -> complex:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"trace of non-square {m.shape} matrix")
    return complex(np.trace(m))


def adjoint(m) -> np.ndarray:
    return as_matrix(m).conj().T


def hermiticity_error(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    m = as_matrix(m)
    return m.shape[0] == m.shape[1] and hermiticity_error(m) <= tol


@dataclass(frozen=True)
class Spectrum:
    """Eigen-decomposition of a Hermitian matrix.

    ``eigenvalues`` are real and sorted in descending order; column ``k`` of
    ``eigenvectors`` belongs to ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


@lru_cache(maxsize=None)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Pairings for one cyclic sweep where each round holds disjoint pairs."""
    players = list(range(n + (n % 2)))
    size = len(players)
    rounds = []
    for _ in range(size - 1):
        p, q = [], []
        for i in range(size // 2):
            x, y = players[i], players[size - 1 - i]
            if x < n and y < n:
                p.append(min(x, y))
                q.append(max(x, y))
        rounds.append((np.array(p, dtype=int), np.array(q, dtype=int)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def _rotation(app, aqq, apq):
    """Cosines, sines and phases that zero ``a[p, q]`` for each pair."""
    mag = np.abs(apq)
    active = mag > 1e-150
    safe = np.where(active, mag, 1.0)
    phase = np.where(active, apq / safe, 1.0)
    tau = (aqq - app) / (2.0 * safe)
    t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
    t = np.where(active, t, 0.0)
    c = 1.0 / np.sqrt(1.0 + t * t)
    return c, t * c, phase.conj()


def _pair_rotation(app: float, aqq: float, apq: complex) -> tuple[float, float, complex]:
    """Scalar version of :func:`_rotation` for one pair."""
    mag = abs(apq)
    if mag <= 1e-150:
        return 1.0, 0.0, 1.0
    tau = (aqq - app) / (2.0 * mag)
    t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + math.hypot(1.0, tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    return c, t * c, (apq / mag).conjugate()


# below this size a whole round is applied as one dense unitary
_DENSE_ROUND = 32


def _jacobi_block(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic complex Jacobi on a dense Hermitian block.

    Each round applies n/2 disjoint Givens rotations at once. With
    ``R[p,p] = c``, ``R[p,q] = s``, ``R[q,p] = -s w``, ``R[q,q] = c w`` the
    round is ``a <- R^H a R`` and ``v <- v R``.
    """
    a = a.copy()
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    tol = OFFDIAG_TOL * max(1.0, float(np.linalg.norm(a)))
    rounds = _round_robin(n)
    dense = n <= _DENSE_ROUND
    for _ in range(MAX_SWEEPS):
        if _offdiag_norm(a) < tol:
            return np.real(np.diag(a)).copy(), v
        for p, q in rounds:
            if dense:
                r = np.eye(n, dtype=np.complex128)
                for i, j in zip(p.tolist(), q.tolist()):
                    c, s, w = _pair_rotation(a.item(i, i).real, a.item(j, j).real, a.item(i, j))
                    r[i, i] = c
                    r[i, j] = s
                    r[j, i] = -s * w
                    r[j, j] = c * w
                a = r.conj().T @ a @ r
                v = v @ r
            else:
                c, s, w = _rotation(a[p, p].real, a[q, q].real, a[p, q])
                cp, cq = a[:, p], a[:, q]
                a[:, p], a[:, q] = c * cp - s * w * cq, s * cp + c * w * cq
                rp, rq = a[p, :], a[q, :]
                a[p, :] = c[:, None] * rp - (s * w.conj())[:, None] * rq
                a[q, :] = s[:, None] * rp + (c * w.conj())[:, None] * rq
                vp, vq = v[:, p], v[:, q]
                v[:, p], v[:, q] = c * vp - s * w * vq, s * vp + c * w * vq
            a[p, q] = 0.0
            a[q, p] = 0.0
            idx = np.arange(n)
            a[idx, idx] = a[idx, idx].real
    raise ConvergenceError(f"Jacobi did not converge within {MAX_SWEEPS} sweeps")


def _normalize_phases(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # first entry with non-negligible magnitude is made real and positive
    mags = np.abs(v)
    lead = np.argmax(mags > 1e-8 * mags.max(axis=0, keepdims=True), axis=0)
    ph = v[lead, np.arange(v.shape[1])]
    return v * (np.abs(ph) / ph)[None, :], lead


def _canonical_order(values: np.ndarray, vectors: np.ndarray, lead: np.ndarray) -> np.ndarray:
    """Descending eigenvalues; ties go by leading-entry position, then by entries."""
    rounded = np.round(values, _TIE_DIGITS)
    order = np.lexsort((lead, -rounded))
    out = []
    start = 0
    n = order.size
    while start < n:
        stop = start + 1
        k0 = order[start]
        while stop < n and rounded[order[stop]] == rounded[k0] and lead[order[stop]] == lead[k0]:
            stop += 1
        group = order[start:stop]
        if group.size > 1:
            rv = np.round(vectors[:, group], _TIE_DIGITS)
            keys = [x for row in rv[::-1] for x in (row.imag, row.real)]
            group = group[np.lexsort(keys)]
        out.extend(group.tolist())
        start = stop
    return np.array(out, dtype=int)


def _dense_components(mask: np.ndarray) -> tuple[int, np.ndarray]:
    """Connected components of a small adjacency mask, labelled in index order."""
    adj = (mask | mask.T).tolist()
    n = len(adj)
    labels = [-1] * n
    count = 0
    for start in range(n):
        if labels[start] >= 0:
            continue
        labels[start] = count
        stack = [start]
        while stack:
            i = stack.pop()
            for j, linked in enumerate(adj[i]):
                if linked and labels[j] < 0:
                    labels[j] = count
                    stack.append(j)
        count += 1
    return count, np.array(labels)


def hermitian_eigensystem(m) -> Spectrum:
    """Full spectrum of a Hermitian matrix by cyclic Jacobi rotations.

    The matrix is first split into the connected components of its sparsity
    graph; each component is diagonalized independently, which keeps large
    structured states (GHZ/W reductions) cheap.

    Raises
    ------
    NotHermitianError
        If ``max |m_ij - conj(m_ji)|`` exceeds ``HERMITIAN_TOL``.
    ConvergenceError
        If a block fails to converge within ``MAX_SWEEPS`` sweeps.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"eigensystem of non-square {m.shape} matrix")
    n = m.shape[0]
    if n <= _DENSE_ROUND:
        err = hermiticity_error(m)
        ncomp, labels = _dense_components(m != 0)
    else:
        # density matrices of structured states are mostly zeros, so the
        # Hermiticity check and block split run on a sparse copy
        sp = csr_matrix(m)
        diff = sp - sp.conj().T
        err = float(np.abs(diff.data).max()) if diff.nnz else 0.0
        pattern = csr_matrix((np.ones(sp.nnz), sp.indices, sp.indptr), shape=sp.shape)
        ncomp, labels = connected_components(pattern, directed=False)
    if err > HERMITIAN_TOL:
        raise NotHermitianError(f"matrix deviates from Hermitian by {err:.3e}")

    by_label = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[by_label], np.arange(ncomp + 1))
    values = np.empty(n)
    lead = np.empty(n, dtype=int)
    vectors = np.zeros((n, n), dtype=np.complex128)
    for comp in range(ncomp):
        idx = by_label[bounds[comp] : bounds[comp + 1]]
        if idx.size == 1:
            k = idx[0]
            values[k] = m[k, k].real
            vectors[k, k] = 1.0
            lead[k] = k
            continue
        block = m[np.ix_(idx, idx)]
        lam, vec = _jacobi_block(0.5 * (block + block.conj().T))
        vec, local = _normalize_phases(vec)
        values[idx] = lam
        vectors[np.ix_(idx, idx)] = vec
        lead[idx] = idx[local]

    order = _canonical_order(values, vectors, lead)
    values = values[order]
    vectors = vectors[:, order]
    values.setflags(write=False)
    vectors.setflags(write=False)
    return Spectrum(values, vectors)
