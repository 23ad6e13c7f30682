"""Born-rule PMFs, realized density matrices and the Bell-test geometry.

Outcome labels are tuples with one string per measured subsystem, e.g.
``("H'", "V''")``. Product bases enumerate outcomes in row-major order of
their factors, which is lexicographic in the factor label order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import isfinite, prod
from typing import Sequence, Union

import numpy as np

from .errors import BasisMismatchError, DimensionError, InvalidStateError
from .states import DensityMatrix, StateVector, make_bell

ORTHONORMAL_TOL = 1e-10
PMF_SUM_TOL = 1e-10
CLAMP_TOL = 1e-12

Label = tuple[str, ...]
# H/V and 0/1 name the same computational-basis kets
_CANONICAL = {"H": "0", "V": "1"}


def _canon(label: Label) -> Label:
    return tuple(_CANONICAL.get(part, part) for part in label)


def _as_label(label) -> Label:
    if isinstance(label, str):
        return (label,)
    return tuple(label)


def _factor_ids(basis_id: str) -> list[str]:
    return basis_id.split("⊗")


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    """An orthonormal measurement basis; column ``k`` of ``vectors`` is outcome ``k``."""

    labels: tuple[Label, ...]
    vectors: np.ndarray
    basis_id: str
    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        v = np.array(self.vectors, dtype=np.complex128)
        labels = tuple(_as_label(x) for x in self.labels)
        n = v.shape[0]
        if v.ndim != 2 or v.shape != (n, n):
            raise DimensionError(f"basis vectors must form a square matrix, got {v.shape}")
        if len(labels) != n:
            raise DimensionError(f"{len(labels)} labels for a {n}-dimensional basis")
        if len(set(labels)) != n:
            raise ValueError("basis labels must be distinct")
        if prod(self.dims) != n:
            raise DimensionError(f"dims {self.dims} do not multiply to {n}")
        if np.max(np.abs(v.conj().T @ v - np.eye(n))) > ORTHONORMAL_TOL:
            raise InvalidStateError(f"basis {self.basis_id} is not orthonormal")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dims", tuple(self.dims))

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def ket(self, label) -> np.ndarray:
        return self.vectors[:, self.labels.index(_as_label(label))]


@dataclass(frozen=True, eq=False)
class PMF:
    """Probability mass function over the outcomes of one declared basis."""

    labels: tuple[Label, ...]
    probs: np.ndarray
    basis_id: str

    def __post_init__(self) -> None:
        p = np.array(self.probs, dtype=float).reshape(-1)
        labels = tuple(_as_label(x) for x in self.labels)
        if len(labels) != p.size:
            raise DimensionError(f"{len(labels)} labels for {p.size} probabilities")
        if np.any(p < -CLAMP_TOL) or not np.all(np.isfinite(p)):
            raise InvalidStateError(f"probabilities must be nonnegative: {p}")
        p[p < CLAMP_TOL] = 0.0
        total = float(p.sum())
        if abs(total - 1.0) > PMF_SUM_TOL:
            raise InvalidStateError(f"probabilities sum to {total!r}")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "labels", labels)

    def prob(self, label) -> float:
        """Probability of one outcome, given as a tuple or as ``"HV"``-style text."""
        if isinstance(label, str):
            for lab, p in zip(self.labels, self.probs):
                if "".join(lab) == label:
                    return float(p)
            raise KeyError(label)
        return float(self.probs[self.labels.index(tuple(label))])

    def as_dict(self) -> dict[str, float]:
        return {"".join(lab): float(p) for lab, p in zip(self.labels, self.probs)}


@dataclass(frozen=True)
class BellSetting:
    """Modulator rotation angles (radians) at Alice's and Bob's stations."""

    alice_angle: float
    bob_angle: float

    def __post_init__(self) -> None:
        if not (isfinite(self.alice_angle) and isfinite(self.bob_angle)):
            raise ValueError("Bell setting angles must be finite")


def computational_basis(m: int = 1, style: str = "01") -> MeasurementBasis:
    """Standard basis of ``m`` qubits, labelled ``0/1`` or ``H/V``."""
    if style not in ("01", "HV"):
        raise ValueError(f"unknown label style {style!r}")
    single = MeasurementBasis(((style[0],), (style[1],)), np.eye(2), "CB", (2,))
    return product_basis(*([single] * m)) if m > 1 else single


def sigma_x_basis() -> MeasurementBasis:
    """Eigenbasis of sigma_x: ``+`` is spin up along x, ``-`` spin down."""
    v = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    return MeasurementBasis((("+",), ("-",)), v, "X", (2,))


def bell_basis() -> MeasurementBasis:
    kinds = ("Phi+", "Phi-", "Psi+", "Psi-")
    v = np.column_stack([make_bell(k).amplitudes for k in kinds])
    return MeasurementBasis(tuple((k,) for k in kinds), v, "Bell", (2, 2))


def product_basis(*bases: MeasurementBasis) -> MeasurementBasis:
    if not bases:
        raise ValueError("need at least one basis")
    vectors = bases[0].vectors
    for b in bases[1:]:
        vectors = np.kron(vectors, b.vectors)
    labels = tuple(sum(combo, ()) for combo in product(*(b.labels for b in bases)))
    dims = sum((b.dims for b in bases), ())
    return MeasurementBasis(labels, vectors, "⊗".join(b.basis_id for b in bases), dims)


def polarization_basis(theta: float, variant: str = "primed") -> MeasurementBasis:
    """Polarizer basis rotated by ``theta``.

    ``primed``: ``|H'> = cos(t/2)|H> - sin(t/2)|V>``, ``|V'> = sin(t/2)|H> + cos(t/2)|V>``.
    ``double-primed``: ``|H''> = cos(t/2)|H> + sin(t/2)|V>``,
    ``|V''> = -sin(t/2)|H> + cos(t/2)|V>``. A zero angle gives the H/V basis.
    """
    if variant not in ("primed", "double-primed"):
        raise ValueError(f"unknown variant {variant!r}")
    if theta == 0:
        return computational_basis(1, "HV")
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    if variant == "primed":
        v = np.array([[c, s], [-s, c]])
        return MeasurementBasis((("H'",), ("V'",)), v, f"primed({theta!r})", (2,))
    v = np.array([[c, -s], [s, c]])
    return MeasurementBasis((("H''",), ("V''",)), v, f"double-primed({theta!r})", (2,))


def station_basis(angle: float) -> MeasurementBasis:
    """Basis selected by a modulator at ``angle``.

    Positive angles use the primed basis, negative angles the double-primed
    basis at ``-angle`` (the two coincide as rotations), zero the H/V basis.
    """
    if angle > 0:
        return polarization_basis(angle, "primed")
    if angle < 0:
        return polarization_basis(-angle, "double-primed")
    return computational_basis(1, "HV")


def _check_dim(n: int, basis: MeasurementBasis) -> None:
    if n != basis.dim:
        raise DimensionError(f"state of dimension {n} measured in a {basis.dim}-dim basis")


def born_pmf(psi: StateVector, basis: MeasurementBasis) -> PMF:
    _check_dim(psi.dim, basis)
    amps = basis.vectors.conj().T @ psi.amplitudes
    p = np.abs(amps) ** 2
    return PMF(basis.labels, p / p.sum(), basis.basis_id)


def born_pmf_mixed(rho: DensityMatrix, basis: MeasurementBasis) -> PMF:
    _check_dim(rho.dim, basis)
    v = basis.vectors
    p = np.real(np.einsum("ia,ij,ja->a", v.conj(), rho.matrix, v))
    p = np.where(np.abs(p) < CLAMP_TOL, 0.0, p)
    return PMF(basis.labels, p / p.sum(), basis.basis_id)


def _check_pairing(pmf: PMF, basis: MeasurementBasis) -> None:
    if pmf.basis_id != basis.basis_id or len(pmf.labels) != basis.dim:
        raise BasisMismatchError(
            f"PMF from basis {pmf.basis_id!r} cannot be realized in basis {basis.basis_id!r}"
        )
    if [_canon(x) for x in pmf.labels] != [_canon(x) for x in basis.labels]:
        raise BasisMismatchError("PMF outcome labels do not match the basis labels")


def realized_density(pmf: PMF, basis: MeasurementBasis) -> DensityMatrix:
    """The unread post-measurement ensemble ``sum_a p_a |chi_a><chi_a|``."""
    _check_pairing(pmf, basis)
    v = basis.vectors
    return DensityMatrix((v * pmf.probs) @ v.conj().T, basis.dims)


def pmf_induced_state(pmf: PMF, phases: Sequence[float], basis: MeasurementBasis) -> StateVector:
    """Pure state ``sum_a sqrt(p_a) e^{i phi_a} |chi_a>`` reproducing ``pmf``."""
    phases = np.asarray(phases, dtype=float).reshape(-1)
    if phases.size != len(pmf.labels):
        raise DimensionError(f"{phases.size} phases for {len(pmf.labels)} outcomes")
    _check_pairing(pmf, basis)
    coeffs = np.sqrt(pmf.probs) * np.exp(1j * phases)
    return StateVector(basis.vectors @ coeffs)


def marginal_pmf(joint: PMF, keep: int, dims: Sequence[int]) -> PMF:
    """Sum a product-structured joint PMF down to subsystem ``keep``."""
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    if not 0 <= keep < n:
        raise IndexError(f"subsystem {keep} out of range for {n} subsystems")
    if prod(dims) != len(joint.labels) or any(len(lab) != n for lab in joint.labels):
        raise ValueError(f"labels of PMF {joint.basis_id!r} are not a product over dims {dims}")
    grid = np.empty(dims, dtype=object)
    for i, lab in enumerate(joint.labels):
        grid[np.unravel_index(i, dims)] = lab
    for axis in range(n):
        for j in range(dims[axis]):
            if len({lab[axis] for lab in np.take(grid, j, axis=axis).reshape(-1)}) != 1:
                raise ValueError("joint labels are not product-structured")
    factor_labels = [(np.take(grid, j, axis=keep).flat[0][keep],) for j in range(dims[keep])]
    axes = tuple(a for a in range(n) if a != keep)
    probs = joint.probs.reshape(dims).sum(axis=axes)
    ids = _factor_ids(joint.basis_id)
    basis_id = ids[keep] if len(ids) == n else f"{joint.basis_id}[{keep}]"
    return PMF(tuple(factor_labels), probs, basis_id)


def bell_joint_pmf(
    state: Union[StateVector, DensityMatrix], setting: BellSetting
) -> PMF:
    """Joint Alice/Bob outcome PMF of a two-qubit state at one modulator setting."""
    basis = bell_setting_basis(setting)
    if isinstance(state, StateVector):
        if state.qubit_count != 2:
            raise DimensionError(f"Bell test needs 2 qubits, got {state.qubit_count}")
        return born_pmf(state, basis)
    if state.dims != (2, 2):
        raise DimensionError(f"Bell test needs a (2, 2) state, got dims {state.dims}")
    return born_pmf_mixed(state, basis)


def bell_setting_basis(setting: BellSetting) -> MeasurementBasis:
    return product_basis(station_basis(setting.alice_angle), station_basis(setting.bob_angle))
