"""End-to-end measurement scenarios: sweeps, Bell tests, teleportation,
GHZ/W robustness and the Werner family.

Every scenario runs the numeric pipeline (state -> PMF or partial trace ->
spectrum -> entropy). Closed forms live next to them as ``*_analytic``
helpers and are used for cross-checks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, TypeVar, Union

import numpy as np
from scipy.optimize import bisect

from . import measurement as ms
from .errors import DomainError, InconsistencyError
from .metrics import (
    InfoReport,
    LogBase,
    comparative_ir,
    info_report,
    polar_bias,
    retrievability,
    shannon_entropy,
    von_neumann_entropy,
)
from .numeric import MAX_DIM
from .states import (
    DensityMatrix,
    StateVector,
    apply_gate,
    identity_gate,
    make_bell,
    make_cb_state,
    make_ghz,
    make_mms,
    make_u3_state,
    make_w,
    make_werner,
    partial_transpose,
    pauli_x,
    pauli_z,
    pure_density,
    reduced_state,
)
from .numeric import hermitian_eigensystem

LN2 = math.log(2.0)
LN4 = math.log(4.0)
CROSS_CHECK_TOL = 1e-9
VNEI_ENTROPY = LN2

T = TypeVar("T")
R = TypeVar("R")

_EXACT_ANGLES = tuple(math.pi * f for f in (1 / 6, 1 / 4, 1 / 3, 1 / 2, 2 / 3, 3 / 4, 1.0))


def snap_angle(theta: float) -> float:
    """Replace ``theta`` by the exact float of a nearby pi-fraction, if any."""
    for exact in _EXACT_ANGLES:
        for cand in (exact, -exact):
            if abs(theta - cand) < 1e-12:
                return cand
    return theta


def theta_grid(points: int, stop: float = math.pi) -> list[float]:
    """``points`` uniform angles on ``[0, stop]`` with pi-fractions made exact."""
    if points < 1:
        raise DomainError("a grid needs at least one point")
    grid = np.linspace(0.0, stop, points) if points > 1 else np.array([0.0])
    return [snap_angle(float(g)) for g in grid]


def pmap(fn: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> list[R]:
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _in_base(s_nats: float, base: LogBase) -> float:
    return s_nats if base is LogBase.NATURAL else s_nats / LN2


# ---------------------------------------------------------------- sweeps


@dataclass(frozen=True)
class SweepRow:
    theta: float
    entropy: float
    retrievability: float
    loss: float
    bias: float


def _row(theta: float, rho: DensityMatrix, base: LogBase) -> SweepRow:
    s = von_neumann_entropy(rho, base)
    ir = retrievability(s, base)
    return SweepRow(theta, s, ir, 1.0 - ir, polar_bias(theta))


def single_qubit_point(theta: float, base: LogBase = LogBase.NATURAL) -> SweepRow:
    basis = ms.computational_basis(1)
    pmf = ms.born_pmf(make_u3_state(theta, 0.0), basis)
    return _row(theta, ms.realized_density(pmf, basis), base)


def single_qubit_sweep(
    thetas: Sequence[float], base: LogBase = LogBase.NATURAL, jobs: int = 1
) -> list[SweepRow]:
    """A U3-rotated qubit measured in the computational basis, per polar angle."""
    if len(thetas) == 0:
        raise DomainError("theta grid is empty")
    return pmap(lambda t: single_qubit_point(t, base), thetas, jobs)


def single_qubit_analytic(theta: float) -> tuple[float, float]:
    """Closed-form ``(S, iR)`` in nats with ``x = sin^2(theta/2)``."""
    x = math.sin(theta / 2) ** 2
    terms = [p for p in (x, 1 - x) if p > 0]
    s = -sum(p * math.log(p) for p in terms)
    ir = math.prod(p**p for p in terms)
    return s, ir


def bell_point(theta: float, base: LogBase = LogBase.NATURAL) -> SweepRow:
    setting = ms.BellSetting(theta, 0.0)
    pmf = ms.bell_joint_pmf(make_bell("phi+"), setting)
    rho = ms.realized_density(pmf, ms.bell_setting_basis(setting))
    return _row(theta, rho, base)


def bell_sweep(
    thetas: Sequence[float], base: LogBase = LogBase.NATURAL, jobs: int = 1
) -> list[SweepRow]:
    """Phi+ measured with Alice's modulator at ``theta`` and Bob's at 0."""
    if len(thetas) == 0:
        raise DomainError("theta grid is empty")
    return pmap(lambda t: bell_point(t, base), thetas, jobs)


def bell_sweep_analytic(theta: float) -> tuple[float, float]:
    """Closed-form ``(S, iR)`` of the setting-(theta, 0) ensemble, in nats.

    The four outcome weights are ``cos^2(theta/2)/2`` twice and
    ``sin^2(theta/2)/2`` twice.
    """
    c = math.cos(theta / 2) ** 2
    terms = [w for w in (c, 1 - c) if w > 0]
    s = -sum(w * math.log(w / 2) for w in terms)
    ir = math.prod((w / 2) ** w for w in terms)
    return s, ir


# ---------------------------------------------------------- Bell tests


@dataclass(frozen=True)
class BellInequalityVerdict:
    theta: float
    lhs: float
    rhs: float
    violated: bool


State2 = Union[StateVector, DensityMatrix]


def _first_outcomes(state: State2, alice: float, bob: float, bob_outcome: int) -> float:
    # outcome 0 is H/H'/H'' and outcome 1 is V/V'/V'' at either station
    pmf = ms.bell_joint_pmf(state, ms.BellSetting(alice, bob))
    return float(pmf.probs[bob_outcome])


def bell_inequality_check(theta: float, state: Optional[State2] = None) -> BellInequalityVerdict:
    """Evaluate ``P(H,H') <= P(H',H'') + P(H,V'')`` for a two-qubit state.

    The three terms come from the settings ``(theta, 0)``, ``(theta, -theta)``
    and ``(0, -theta)``. ``state`` defaults to Phi+.
    """
    if state is None:
        state = make_bell("phi+")
    lhs = _first_outcomes(state, theta, 0.0, 0)
    rhs = _first_outcomes(state, theta, -theta, 0) + _first_outcomes(state, 0.0, -theta, 1)
    return BellInequalityVerdict(theta, lhs, rhs, lhs > rhs + 1e-12)


def bell_inequality_analytic(theta: float) -> tuple[float, float]:
    lhs = 0.5 * math.cos(theta / 2) ** 2
    rhs = 0.5 * math.cos(theta) ** 2 + 0.5 * math.sin(theta / 2) ** 2
    return lhs, rhs


def no_comm_extra_entropy(theta: float, base: LogBase = LogBase.NATURAL) -> float:
    """Entropy added when the two parties never compare data: ``2 ln 2 - S(theta)``."""
    s = bell_point(theta).entropy
    return _in_base(max(2 * LN2 - s, 0.0), base)


@dataclass(frozen=True)
class NoCommRow:
    theta: float
    joint_entropy: float
    alice_entropy: float
    bob_entropy: float
    extra_entropy: float


def no_comm_point(theta: float, base: LogBase = LogBase.NATURAL) -> NoCommRow:
    setting = ms.BellSetting(theta, 0.0)
    joint = ms.bell_joint_pmf(make_bell("phi+"), setting)
    s_joint = von_neumann_entropy(ms.realized_density(joint, ms.bell_setting_basis(setting)))
    marginals = []
    for keep, angle in ((0, setting.alice_angle), (1, setting.bob_angle)):
        pmf = ms.marginal_pmf(joint, keep, (2, 2))
        marginals.append(von_neumann_entropy(ms.realized_density(pmf, ms.station_basis(angle))))
    extra = max(sum(marginals) - s_joint, 0.0)
    return NoCommRow(
        theta,
        _in_base(s_joint, base),
        _in_base(marginals[0], base),
        _in_base(marginals[1], base),
        _in_base(extra, base),
    )


def no_comm_sweep(
    thetas: Sequence[float], base: LogBase = LogBase.NATURAL, jobs: int = 1
) -> list[NoCommRow]:
    if len(thetas) == 0:
        raise DomainError("theta grid is empty")
    return pmap(lambda t: no_comm_point(t, base), thetas, jobs)


# ---------------------------------------------------------- teleportation

# Bob's correction per Bell outcome; "ZX" applies X first
_CORRECTIONS = {
    "Phi+": (identity_gate(),),
    "Phi-": (pauli_z(),),
    "Psi+": (pauli_x(),),
    "Psi-": (pauli_x(), pauli_z()),
}


@dataclass(frozen=True)
class TeleportationReport:
    alice_entropy: float
    alice_ir: float
    alice_il: float
    classical_bits: float
    bob_state_fidelity: float
    outcome_probs: dict
    bob_states: dict
    corrected_states: dict


def teleportation_report(a: complex, b: complex, base: LogBase = LogBase.NATURAL) -> TeleportationReport:
    """Teleport ``a|0> + b|1>`` through a shared Phi+ pair.

    The three-qubit state is ordered (C, D, B) as built, then regrouped to
    (C, B | D) so Alice's Bell measurement acts on the first pair.
    """
    norm2 = abs(a) ** 2 + abs(b) ** 2
    if abs(norm2 - 1.0) > 1e-10:
        raise DomainError(f"|a|^2 + |b|^2 = {norm2!r}, expected 1")
    target = StateVector(np.array([a, b], dtype=np.complex128))
    full = np.kron(make_bell("phi+").amplitudes, target.amplitudes)
    cb_d = full.reshape(2, 2, 2).transpose(0, 2, 1).reshape(4, 2)

    basis = ms.bell_basis()
    probs, bob, corrected = [], {}, {}
    for k, label in enumerate(basis.labels):
        d = basis.vectors[:, k].conj() @ cb_d
        p = float(np.vdot(d, d).real)
        probs.append(p)
        name = label[0]
        bob[name] = StateVector(d / math.sqrt(p))
        fixed = bob[name]
        for gate in _CORRECTIONS[name]:
            fixed = apply_gate(gate, 0, fixed)
        corrected[name] = fixed
    pmf = ms.PMF(basis.labels, probs, basis.basis_id)
    rho_alice = ms.realized_density(pmf, basis)
    s = von_neumann_entropy(rho_alice, base)
    ir = retrievability(s, base)
    fidelity = min(target.fidelity(v) for v in corrected.values())
    return TeleportationReport(
        alice_entropy=s,
        alice_ir=ir,
        alice_il=1.0 - ir,
        classical_bits=shannon_entropy(pmf, LogBase.TWO),
        bob_state_fidelity=fidelity,
        outcome_probs=pmf.as_dict(),
        bob_states=bob,
        corrected_states=corrected,
    )


# ------------------------------------------------------------- GHZ and W


def ghz_measure_one(m: int, base: LogBase = LogBase.NATURAL) -> InfoReport:
    """Trace the first qubit out of GHZ_m; the result is independent of m."""
    if m < 3:
        raise DomainError(f"GHZ robustness needs m >= 3, got {m}")
    rho = reduced_state(make_ghz(m), range(1, m))
    return info_report(rho, base)


def w_analytic(m: int) -> tuple[float, float]:
    """``(S, iR)`` in nats after measuring one qubit of W_m."""
    s = math.log(m / (m - 1) ** (1 - 1 / m))
    ir = (m - 1) ** (1 - 1 / m) / m
    return s, ir


def w_measure_one(m: int, base: LogBase = LogBase.NATURAL) -> InfoReport:
    """Trace the first qubit out of W_m.

    The reduced state is ``(m-1)/m |W_{m-1}><W_{m-1}| + 1/m |0..0><0..0|``.
    While ``2^m`` fits the dimension budget the partial-trace result is
    computed and must agree with the closed form; beyond that the closed form
    is reported alone.
    """
    if m < 3:
        raise DomainError(f"W robustness needs m >= 3, got {m}")
    s_nats, _ = w_analytic(m)
    if 2**m <= MAX_DIM:
        rep = info_report(reduced_state(make_w(m), range(1, m)), base)
        if abs(_in_base(s_nats, base) - rep.entropy) > CROSS_CHECK_TOL:
            raise InconsistencyError(
                f"W_{m}: partial-trace entropy {rep.entropy!r} vs closed form {s_nats!r}"
            )
        return rep
    s = _in_base(s_nats, base)
    ir = retrievability(s, base)
    pur = ((m - 1) / m) ** 2 + (1 / m) ** 2
    return InfoReport(s, ir, 1.0 - ir, pur, base)


# ----------------------------------------------------------------- Werner


@dataclass(frozen=True)
class WernerRow:
    alpha: float
    s_alpha: float
    ir_bell_to_werner: float
    ds_werner_to_mms: float
    ir_werner_to_mms: float
    ir_bell_to_mms: float
    separable_ppt: bool
    separable_vnei_necessary: bool


def werner_entropy_analytic(alpha: float) -> float:
    """Entropy in nats from the Werner eigenvalues ``(1-a)/4`` (x3) and ``(1+3a)/4``."""
    weights = [(1 - alpha) / 4] * 3 + [(1 + 3 * alpha) / 4]
    return -sum(w * math.log(w) for w in weights if w > 0)


def werner_row(alpha: float, base: LogBase = LogBase.NATURAL) -> WernerRow:
    rho = make_werner(alpha)
    s_alpha = von_neumann_entropy(rho)
    s_mms = von_neumann_entropy(make_mms(2))
    pt_min = hermitian_eigensystem(partial_transpose(rho, 1)).eigenvalues[-1]
    return WernerRow(
        alpha=alpha,
        s_alpha=_in_base(s_alpha, base),
        ir_bell_to_werner=comparative_ir(s_alpha, 0.0),
        ds_werner_to_mms=_in_base(max(s_mms - s_alpha, 0.0), base),
        ir_werner_to_mms=comparative_ir(s_mms, s_alpha),
        ir_bell_to_mms=comparative_ir(s_mms, 0.0),
        separable_ppt=bool(pt_min >= -1e-10),
        separable_vnei_necessary=bool(s_alpha >= VNEI_ENTROPY - 1e-12),
    )


def werner_report(
    alphas: Sequence[float], base: LogBase = LogBase.NATURAL, jobs: int = 1
) -> list[WernerRow]:
    for a in alphas:
        if not (-1 / 3 - 1e-12 <= a <= 1 + 1e-12):
            raise DomainError(f"Werner parameter {a!r} outside [-1/3, 1]")
    return pmap(lambda a: werner_row(a, base), alphas, jobs)


def solve_vnei_alpha(xtol: float = 1e-15) -> float:
    """The Werner parameter where the entropy falls to ``ln 2``, by bisection."""
    return float(bisect(lambda a: werner_entropy_analytic(a) - VNEI_ENTROPY, 1 / 3, 1.0, xtol=xtol))


# --------------------------------------------------------- MEE / MEI


@dataclass(frozen=True)
class MeeMeiSummary:
    mee: float
    mei: float
    witnesses: tuple[tuple[str, float], ...]


def mee_mei_summary(bell_grid: Optional[Sequence[float]] = None) -> MeeMeiSummary:
    """Minimal entanglement entropy gain shared by Bell, GHZ_m and vNEI-marginal Werner."""
    if bell_grid is None:
        bell_grid = theta_grid(181, math.pi / 2)
    witnesses = [("bell", min(r.entropy for r in bell_sweep(bell_grid)))]
    for m in (3, 5, 8):
        witnesses.append((f"ghz{m}", ghz_measure_one(m).entropy))
    witnesses.append(("werner-vnei", von_neumann_entropy(make_werner(solve_vnei_alpha()))))
    for name, s in witnesses:
        if abs(s - LN2) > CROSS_CHECK_TOL:
            raise InconsistencyError(f"{name} minimal entropy {s!r} differs from ln 2")
    mee = witnesses[0][1]
    return MeeMeiSummary(mee, 1.0 - math.exp(-mee), tuple(witnesses))


# ---------------------------------------------------------- separable


@dataclass(frozen=True)
class SeparableCheck:
    pmf: dict
    s_initial: float
    s_final: float
    retrievability: float
    loss: float
    bell_contrast_loss: float


def _measured_loss(psi: StateVector, setting: ms.BellSetting) -> tuple[ms.PMF, float, float]:
    pmf = ms.bell_joint_pmf(psi, setting)
    s_i = von_neumann_entropy(pure_density(psi))
    s_f = von_neumann_entropy(ms.realized_density(pmf, ms.bell_setting_basis(setting)))
    return pmf, s_i, s_f


def separable_state_check() -> SeparableCheck:
    """|HH> measured at (0, 0) loses nothing; Phi+ at the same setting loses half."""
    setting = ms.BellSetting(0.0, 0.0)
    pmf, s_i, s_f = _measured_loss(make_cb_state("HH"), setting)
    _, b_i, b_f = _measured_loss(make_bell("phi+"), setting)
    ir = comparative_ir(s_f, s_i)
    return SeparableCheck(pmf.as_dict(), s_i, s_f, ir, 1.0 - ir, 1.0 - comparative_ir(b_f, b_i))
