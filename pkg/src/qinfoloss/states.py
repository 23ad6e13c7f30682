"""Pure states, density matrices, single-qubit gates and the state catalog.

Qubit 0 is the leftmost ket symbol and the most significant bit of the
basis index, so ``|001>`` has qubit 2 excited and lives at index 1.
The labels H/V are synonyms for 0/1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Iterable, Sequence

import numpy as np

from . import numeric
from .errors import DimensionError, DomainError, InvalidStateError, NotHermitianError, SizeLimitError
from .numeric import MAX_DIM, Spectrum

NORM_TOL = 1e-10
TRACE_RENORM_TOL = 1e-8
NEGATIVITY_TOL = 1e-10
UNITARY_TOL = 1e-10

_BIT_ALIASES = {"0": 0, "1": 1, "H": 0, "V": 1, 0: 0, 1: 1}


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state of ``qubit_count`` qubits."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        dim = amps.size
        if dim < 2 or dim & (dim - 1):
            raise DimensionError(f"state dimension {dim} is not a power of two >= 2")
        if dim > MAX_DIM:
            raise SizeLimitError(f"state dimension {dim} exceeds {MAX_DIM}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes contain NaN or Inf")
        norm2 = float(np.sum(np.abs(amps) ** 2))
        if abs(norm2 - 1.0) > NORM_TOL:
            raise InvalidStateError(f"squared norm is {norm2!r}, expected 1")
        object.__setattr__(self, "amplitudes", _readonly(amps))

    @classmethod
    def normalized(cls, amplitudes) -> StateVector:
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise InvalidStateError("zero vector cannot be normalized")
        return cls(amps / norm)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def qubit_count(self) -> int:
        return self.dim.bit_length() - 1

    def inner(self, other: StateVector) -> complex:
        """``<self|other>``."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: StateVector) -> float:
        return abs(self.inner(other)) ** 2

    def __repr__(self) -> str:
        return f"StateVector({np.array2string(self.amplitudes, precision=6)})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Density matrix with subsystem dimensions attached.

    Instances are built by :func:`validate_density` or by the constructors in
    this module, which produce valid matrices by construction. The spectrum is
    computed on first access and cached.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        m = numeric.as_matrix(self.matrix)
        dims = tuple(int(d) for d in self.dims)
        if m.shape[0] != m.shape[1]:
            raise DimensionError(f"density matrix must be square, got {m.shape}")
        if prod(dims) != m.shape[0] or any(d < 1 for d in dims):
            raise DimensionError(f"dims {dims} do not multiply to {m.shape[0]}")
        object.__setattr__(self, "matrix", _readonly(m))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def spectrum(self) -> Spectrum:
        return numeric.hermitian_eigensystem(self.matrix)

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.spectrum.eigenvalues

    def __repr__(self) -> str:
        return f"DensityMatrix(dims={self.dims}, matrix=\n{np.array2string(self.matrix, precision=6)})"


@dataclass(frozen=True, eq=False)
class Gate:
    name: str
    matrix: np.ndarray
    params: tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        u = numeric.as_matrix(self.matrix)
        if u.shape != (2, 2):
            raise DimensionError(f"single-qubit gate must be 2x2, got {u.shape}")
        if np.max(np.abs(u.conj().T @ u - np.eye(2))) > UNITARY_TOL:
            raise InvalidStateError(f"gate {self.name} is not unitary")
        object.__setattr__(self, "matrix", _readonly(u))


def hadamard() -> Gate:
    return Gate("H", np.array([[1, 1], [1, -1]]) / np.sqrt(2))


def pauli_x() -> Gate:
    return Gate("X", np.array([[0, 1], [1, 0]]))


def pauli_z() -> Gate:
    return Gate("Z", np.array([[1, 0], [0, -1]]))


def identity_gate() -> Gate:
    return Gate("I", np.eye(2))


def u3(theta: float, phi: float, lam: float = 0.0) -> Gate:
    """The generic Euler-angle rotation ``U3(theta, phi, lam)``.

    ``U3(theta, phi, 0)|0> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`` and
    ``U3(0, 0, lam)`` is the phase gate ``diag(1, e^{i lam})``.
    """
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    m = np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
        ]
    )
    return Gate("U3", m, (float(theta), float(phi), float(lam)))


def apply_gate(gate: Gate, target: int, psi: StateVector) -> StateVector:
    m = psi.qubit_count
    if not 0 <= target < m:
        raise IndexError(f"qubit {target} out of range for {m} qubits")
    t = psi.amplitudes.reshape((2,) * m)
    t = np.tensordot(gate.matrix, t, axes=([1], [target]))
    t = np.moveaxis(t, 0, target)
    return StateVector(t.reshape(-1))


def make_cb_state(bits: Sequence) -> StateVector:
    """Computational-basis ket for a bit string such as ``[0, 1]`` or ``"HV"``."""
    if len(bits) == 0:
        raise DimensionError("bit list must be nonempty")
    try:
        values = [_BIT_ALIASES[b] for b in bits]
    except KeyError as exc:
        raise ValueError(f"unknown basis label {exc.args[0]!r}") from None
    index = 0
    for b in values:
        index = 2 * index + b
    amps = np.zeros(2 ** len(values), dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(amps)


def make_u3_state(theta: float, phi: float) -> StateVector:
    return apply_gate(u3(theta, phi), 0, make_cb_state([0]))


_BELL_KINDS = {
    "phi+": ((0, 1.0), (3, 1.0)),
    "phi-": ((0, 1.0), (3, -1.0)),
    "psi+": ((1, 1.0), (2, 1.0)),
    "psi-": ((1, 1.0), (2, -1.0)),
}
BELL_KINDS = tuple(_BELL_KINDS)


def _bell_key(kind: str) -> str:
    key = kind.strip().lower().replace("φ", "phi").replace("ψ", "psi").replace("−", "-")
    if key not in _BELL_KINDS:
        raise ValueError(f"unknown Bell state {kind!r}; expected one of {BELL_KINDS}")
    return key


def make_bell(kind: str) -> StateVector:
    """One of the four Bell states, selected by ``"phi+"``, ``"Ψ-"`` etc."""
    amps = np.zeros(4, dtype=np.complex128)
    for idx, sign in _BELL_KINDS[_bell_key(kind)]:
        amps[idx] = sign / np.sqrt(2)
    return StateVector(amps)


def _check_family_size(m: int, family: str) -> None:
    if m < 2:
        raise DomainError(f"{family} needs at least 2 qubits, got {m}")
    if 2**m > MAX_DIM:
        raise SizeLimitError(f"{family}_{m} exceeds the {MAX_DIM} dimension budget")


def make_ghz(m: int) -> StateVector:
    _check_family_size(m, "GHZ")
    amps = np.zeros(2**m, dtype=np.complex128)
    amps[0] = amps[-1] = 1 / np.sqrt(2)
    return StateVector(amps)


def make_w(m: int) -> StateVector:
    _check_family_size(m, "W")
    amps = np.zeros(2**m, dtype=np.complex128)
    amps[[1 << k for k in range(m)]] = 1 / np.sqrt(m)
    return StateVector(amps)


def pure_density(psi: StateVector) -> DensityMatrix:
    a = psi.amplitudes
    return DensityMatrix(np.outer(a, a.conj()), (2,) * psi.qubit_count)


def make_mms(m: int) -> DensityMatrix:
    """Maximally mixed state ``I / 2^m`` of ``m`` qubits."""
    if m < 1:
        raise DomainError(f"maximally mixed state needs m >= 1, got {m}")
    if 2**m > MAX_DIM:
        raise SizeLimitError(f"2^{m} exceeds the {MAX_DIM} dimension budget")
    n = 2**m
    return DensityMatrix(np.eye(n) / n, (2,) * m)


def make_werner(alpha: float) -> DensityMatrix:
    """``alpha |Psi-><Psi-| + (1 - alpha) I/4`` for ``-1/3 <= alpha <= 1``."""
    if not (-1 / 3 - 1e-12 <= alpha <= 1 + 1e-12):
        raise DomainError(f"Werner parameter {alpha!r} outside [-1/3, 1]")
    singlet = pure_density(make_bell("psi-")).matrix
    return DensityMatrix(alpha * singlet + (1 - alpha) * np.eye(4) / 4, (2, 2))


def validate_density(m, dims: Iterable[int]) -> DensityMatrix:
    """Check a candidate density matrix and return it with its spectrum cached.

    A trace within ``1e-8`` of one is renormalized; anything further off is
    rejected, as are non-Hermitian matrices and eigenvalues below ``-1e-10``.
    """
    m = numeric.as_matrix(m)
    dims = tuple(dims)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"density matrix must be square, got {m.shape}")
    if prod(dims) != m.shape[0]:
        raise DimensionError(f"dims {dims} do not multiply to {m.shape[0]}")
    err = numeric.hermiticity_error(m)
    if err > numeric.HERMITIAN_TOL:
        raise NotHermitianError(f"matrix deviates from Hermitian by {err:.3e}")
    m = 0.5 * (m + m.conj().T)
    tr = np.trace(m).real
    if abs(tr - 1.0) > TRACE_RENORM_TOL:
        raise InvalidStateError(f"trace is {tr!r}, expected 1")
    m = m / tr
    rho = DensityMatrix(m, dims)
    lowest = rho.eigenvalues[-1]
    if lowest < -NEGATIVITY_TOL:
        raise InvalidStateError(f"negative eigenvalue {lowest!r}")
    return rho


def purity(rho: DensityMatrix) -> float:
    m = rho.matrix
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(m) ** 2))


def _keep_axes(keep: Iterable[int], n: int) -> list[int]:
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep set must be nonempty")
    if keep[0] < 0 or keep[-1] >= n:
        raise IndexError(f"subsystem index out of range for {n} subsystems: {keep}")
    return keep


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out every subsystem not listed in ``keep``."""
    dims = rho.dims
    n = len(dims)
    keep = _keep_axes(keep, n)
    drop = [k for k in range(n) if k not in keep]
    dk = prod(dims[k] for k in keep)
    dd = prod(dims[k] for k in drop)
    t = rho.matrix.reshape(dims + dims)
    t = t.transpose(keep + drop + [n + k for k in keep] + [n + k for k in drop])
    t = t.reshape(dk, dd, dk, dd)
    return DensityMatrix(np.trace(t, axis1=1, axis2=3), tuple(dims[k] for k in keep))


def reduced_state(psi: StateVector, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix of a pure state without forming ``|psi><psi|``."""
    m = psi.qubit_count
    keep = _keep_axes(keep, m)
    drop = [k for k in range(m) if k not in keep]
    t = psi.amplitudes.reshape((2,) * m).transpose(keep + drop)
    a = t.reshape(2 ** len(keep), -1)
    return DensityMatrix(a @ a.conj().T, (2,) * len(keep))


def tensor(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(numeric.kron(a.matrix, b.matrix), a.dims + b.dims)


def partial_transpose(rho: DensityMatrix, subsystem: int) -> np.ndarray:
    """Transpose one subsystem's indices; the result need not be a state."""
    dims = rho.dims
    n = len(dims)
    if not 0 <= subsystem < n:
        raise IndexError(f"subsystem {subsystem} out of range for {n} subsystems")
    axes = list(range(2 * n))
    axes[subsystem], axes[n + subsystem] = axes[n + subsystem], axes[subsystem]
    return rho.matrix.reshape(dims + dims).transpose(axes).reshape(rho.dim, rho.dim)
