"""Entropies and the retrievability / loss measures built on them."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionError, DomainError
from .measurement import PMF
from .states import DensityMatrix, partial_trace, purity

log = logging.getLogger(__name__)

CLAMP_TOL = 1e-10
PROB_CLAMP_TOL = 1e-12


class LogBase(Enum):
    NATURAL = "e"
    TWO = "2"

    @property
    def value_float(self) -> float:
        return math.e if self is LogBase.NATURAL else 2.0

    def log(self, x):
        return np.log(x) if self is LogBase.NATURAL else np.log2(x)

    @classmethod
    def parse(cls, text: str) -> LogBase:
        try:
            return cls(str(text))
        except ValueError:
            raise ValueError(f"log base must be 'e' or '2', got {text!r}") from None


def spectral_probabilities(rho: DensityMatrix) -> tuple[np.ndarray, int]:
    """Eigenvalues of ``rho`` with numerical negatives clamped to zero.

    Returns the clamped eigenvalues and how many were clamped. Eigenvalues in
    ``[-1e-10, 0)`` count as noise; anything more negative is an error.
    """
    eta = np.array(rho.eigenvalues, dtype=float)
    if eta.size and eta.min() < -CLAMP_TOL:
        raise DomainError(f"density matrix has eigenvalue {eta.min()!r} < 0")
    negative = eta < 0
    clamped = int(np.count_nonzero(negative))
    eta[negative] = 0.0
    if clamped:
        log.debug("clamped %d slightly negative eigenvalues", clamped)
    return eta, clamped


def _entropy_of(p: np.ndarray, base: LogBase) -> float:
    p = p[p > 0]
    s = -float(np.sum(p * base.log(p)))
    # adding 0.0 turns -0.0 into 0.0
    return max(s, 0.0) + 0.0


def von_neumann_entropy(rho: DensityMatrix, base: LogBase = LogBase.NATURAL) -> float:
    """``-sum eta_k log eta_k`` over the spectrum, with ``0 log 0 = 0``."""
    eta, _ = spectral_probabilities(rho)
    return _entropy_of(eta, base)


def shannon_entropy(pmf: PMF, base: LogBase = LogBase.NATURAL) -> float:
    p = np.where(pmf.probs < PROB_CLAMP_TOL, 0.0, pmf.probs)
    return _entropy_of(p, base)


def retrievability(entropy: float, base: LogBase = LogBase.NATURAL) -> float:
    """Information retrievability ``base**(-entropy)``; 1 for a pure state."""
    if entropy < 0:
        raise DomainError(f"entropy must be nonnegative, got {entropy!r}")
    return float(base.value_float ** (-entropy))


def comparative_ir(s_final: float, s_initial: float) -> float:
    """Retrievability of a transition, ``exp(s_initial - s_final)``.

    Exceeds 1 when the entropy went down; :func:`entropy_decreased` flags that.
    """
    if s_final < 0 or s_initial < 0:
        raise DomainError("entropies must be nonnegative")
    return math.exp(s_initial - s_final)


def entropy_decreased(s_final: float, s_initial: float) -> bool:
    return s_final < s_initial


def info_loss(s_final: float, s_initial: float) -> float:
    return 1.0 - comparative_ir(s_final, s_initial)


def polar_bias(theta: float) -> float:
    """Outcome asymmetry ``(cos^2(t/2) - sin^2(t/2))^2 = cos^2 t`` of a qubit at polar angle ``t``."""
    return float(np.cos(theta) ** 2)


def mutual_quantum_entropy(rho_ab: DensityMatrix, base: LogBase = LogBase.NATURAL) -> float:
    """``S(A) + S(B) - S(AB)`` for a bipartite state."""
    if len(rho_ab.dims) != 2:
        raise DimensionError(f"expected a bipartite state, got dims {rho_ab.dims}")
    s_a = von_neumann_entropy(partial_trace(rho_ab, [0]), base)
    s_b = von_neumann_entropy(partial_trace(rho_ab, [1]), base)
    s_ab = von_neumann_entropy(rho_ab, base)
    return max(s_a + s_b - s_ab, 0.0)


def expectation_value(pmf: PMF, values: Sequence[float]) -> float:
    values = np.asarray(values, dtype=float).reshape(-1)
    if values.size != pmf.probs.size:
        raise DimensionError(f"{values.size} values for {pmf.probs.size} outcomes")
    return float(np.dot(values, pmf.probs))


@dataclass(frozen=True)
class InfoReport:
    entropy: float
    retrievability: float
    loss: float
    purity: float
    base: LogBase = LogBase.NATURAL
    bias: Optional[float] = None


def info_report(
    rho: DensityMatrix, base: LogBase = LogBase.NATURAL, bias: Optional[float] = None
) -> InfoReport:
    """Entropy, retrievability and loss of ``rho`` relative to a pure initial state."""
    s = von_neumann_entropy(rho, base)
    ir = retrievability(s, base)
    return InfoReport(s, ir, 1.0 - ir, purity(rho), base, bias)
