"""Golden-number and property self-check, run by ``qinfoloss selftest``.

Each golden entry pairs a computed quantity with its published value and
tolerance. Output is plain text with one line per check and is identical
across runs.
"""

from __future__ import annotations

import math
import sys
from typing import Callable, TextIO

import numpy as np

from . import measurement as ms
from . import scenarios as sc
from .metrics import (
    LogBase,
    info_loss,
    mutual_quantum_entropy,
    retrievability,
    shannon_entropy,
    von_neumann_entropy,
)
from .numeric import hermitian_eigensystem
from .states import (
    StateVector,
    apply_gate,
    hadamard,
    make_bell,
    make_cb_state,
    make_mms,
    make_werner,
    partial_trace,
    pauli_x,
    pure_density,
    reduced_state,
    tensor,
    validate_density,
)

PI = math.pi
LN2 = math.log(2)
LN4 = math.log(4)

# name -> (expected value, absolute tolerance)
GOLDEN: dict[str, tuple[float, float]] = {
    "rho_in eigenvalue 1": (1.0, 1e-12),
    "rho_in eigenvalue 2": (0.0, 1e-12),
    "werner(1/3) largest eigenvalue": (0.5, 1e-9),
    "werner(1/3) smallest eigenvalue": (1 / 6, 1e-9),
    "HX|0> amplitude on |1>": (-1 / math.sqrt(2), 1e-12),
    "X|0> = |1>": (1.0, 1e-12),
    "|0> CB probability of 0": (1.0, 1e-12),
    "|-x> CB probability of 0": (0.5, 1e-12),
    "|-x> sigma_x probability of down": (1.0, 1e-12),
    "MMS(1) entropy": (LN2, 1e-12),
    "MMS(3) entropy in bits": (3.0, 1e-12),
    "uniform 2^3 Shannon entropy in bits": (3.0, 1e-12),
    "iR(ln 2)": (0.5, 1e-12),
    "iR(ln 4)": (0.25, 1e-12),
    "iL(ln 2, 0)": (0.5, 1e-12),
    "iL(ln 4, 0)": (0.75, 1e-12),
    "Bell reduced entropy": (LN2, 1e-9),
    "MQE of Phi+": (LN4, 1e-9),
    "MQI of Phi+": (0.75, 1e-9),
    "single qubit S(pi/3)": (0.5623, 5e-5),
    "single qubit iR(pi/3)": (0.5699, 5e-5),
    "single qubit iL(pi/3)": (0.4301, 5e-5),
    "single qubit beta(pi/3)": (0.25, 5e-5),
    "single qubit S(pi/2)": (0.6931, 5e-5),
    "single qubit iR(pi/2)": (0.5, 5e-5),
    "single qubit S(0)": (0.0, 5e-5),
    "single qubit beta(0)": (1.0, 5e-5),
    "Bell sweep iR(0)": (0.5, 1e-9),
    "Bell sweep iR(pi/3)": (0.285, 5e-4),
    "Bell sweep iL(pi/3)": (0.715, 5e-4),
    "Bell sweep iR(pi/2)": (0.25, 1e-9),
    "P(H,H') at pi/3": (3 / 8, 1e-12),
    "P(H',H'') + P(H,V'') at pi/3": (1 / 4, 1e-12),
    "MMS P(H,H')": (1 / 4, 1e-12),
    "MMS P(H',H'') + P(H,V'')": (1 / 2, 1e-12),
    "extra entropy at 0": (LN2, 1e-9),
    "teleport Alice entropy": (LN4, 1e-9),
    "teleport Alice iR": (0.25, 1e-9),
    "teleport classical bits": (2.0, 1e-9),
    "teleport Bob fidelity": (1.0, 1e-10),
    "GHZ_3 reduced entropy": (0.6931, 5e-5),
    "GHZ_8 reduced entropy": (LN2, 1e-9),
    "W_3 reduced entropy": (0.6365, 5e-5),
    "W_3 iR": (0.5291, 5e-5),
    "W_3 iL": (0.4709, 5e-5),
    "Werner(0) entropy": (LN4, 1e-9),
    "Werner(1/3) dS Bell->Werner": (1.242, 5e-4),
    "Werner(1/3) iR Bell->Werner": (0.2887, 5e-4),
    "Werner(1/3) dS Werner->MMS": (0.144, 5e-4),
    "Werner(1/3) iR Werner->MMS": (0.866, 5e-4),
    "Werner(0.7476) dS Bell->Werner": (0.6931, 5e-4),
    "Werner(0.7476) iR Bell->Werner": (0.5, 5e-4),
    "Werner(1) iR Bell->Werner": (1.0, 5e-4),
    "vNEI alpha": (0.7476, 5e-5),
    "MEE": (LN2, 1e-9),
    "MEI": (0.5, 1e-9),
    "separable |HH> loss": (0.0, 1e-12),
    "Phi+ (0,0) loss": (0.5, 1e-9),
}


def _bell_row(theta: float) -> sc.SweepRow:
    return sc.bell_point(theta)


def _golden_actuals() -> dict[str, Callable[[], float]]:
    rho_in = pure_density(apply_gate(hadamard(), 0, make_cb_state([1])))
    minus_x = apply_gate(hadamard(), 0, apply_gate(pauli_x(), 0, make_cb_state([0])))
    cb = ms.computational_basis(1)
    w13 = make_werner(1 / 3)
    tele = sc.teleportation_report(0.6, 0.8j)
    w3 = sc.w_measure_one(3)
    wr = {a: sc.werner_row(a) for a in (0.0, 1 / 3, 0.7476, 1.0)}
    mee = sc.mee_mei_summary()
    sep = sc.separable_state_check()
    ineq = sc.bell_inequality_check(PI / 3)
    ineq_mms = sc.bell_inequality_check(PI / 3, make_mms(2))
    q = {t: sc.single_qubit_point(t) for t in (0.0, PI / 3, PI / 2)}
    phi = pure_density(make_bell("phi+"))
    return {
        "rho_in eigenvalue 1": lambda: rho_in.eigenvalues[0],
        "rho_in eigenvalue 2": lambda: rho_in.eigenvalues[1],
        "werner(1/3) largest eigenvalue": lambda: w13.eigenvalues[0],
        "werner(1/3) smallest eigenvalue": lambda: w13.eigenvalues[-1],
        "HX|0> amplitude on |1>": lambda: minus_x.amplitudes[1].real,
        "X|0> = |1>": lambda: abs(apply_gate(pauli_x(), 0, make_cb_state([0])).amplitudes[1]),
        "|0> CB probability of 0": lambda: ms.born_pmf(make_cb_state([0]), cb).probs[0],
        "|-x> CB probability of 0": lambda: ms.born_pmf(minus_x, cb).probs[0],
        "|-x> sigma_x probability of down": lambda: ms.born_pmf(minus_x, ms.sigma_x_basis()).prob("-"),
        "MMS(1) entropy": lambda: von_neumann_entropy(make_mms(1)),
        "MMS(3) entropy in bits": lambda: von_neumann_entropy(make_mms(3), LogBase.TWO),
        "uniform 2^3 Shannon entropy in bits": lambda: shannon_entropy(
            ms.born_pmf_mixed(make_mms(3), ms.computational_basis(3)), LogBase.TWO
        ),
        "iR(ln 2)": lambda: retrievability(LN2),
        "iR(ln 4)": lambda: retrievability(LN4),
        "iL(ln 2, 0)": lambda: info_loss(LN2, 0.0),
        "iL(ln 4, 0)": lambda: info_loss(LN4, 0.0),
        "Bell reduced entropy": lambda: von_neumann_entropy(partial_trace(phi, [0])),
        "MQE of Phi+": lambda: mutual_quantum_entropy(phi),
        "MQI of Phi+": lambda: 1 - retrievability(mutual_quantum_entropy(phi)),
        "single qubit S(pi/3)": lambda: q[PI / 3].entropy,
        "single qubit iR(pi/3)": lambda: q[PI / 3].retrievability,
        "single qubit iL(pi/3)": lambda: q[PI / 3].loss,
        "single qubit beta(pi/3)": lambda: q[PI / 3].bias,
        "single qubit S(pi/2)": lambda: q[PI / 2].entropy,
        "single qubit iR(pi/2)": lambda: q[PI / 2].retrievability,
        "single qubit S(0)": lambda: q[0.0].entropy,
        "single qubit beta(0)": lambda: q[0.0].bias,
        "Bell sweep iR(0)": lambda: _bell_row(0.0).retrievability,
        "Bell sweep iR(pi/3)": lambda: _bell_row(PI / 3).retrievability,
        "Bell sweep iL(pi/3)": lambda: _bell_row(PI / 3).loss,
        "Bell sweep iR(pi/2)": lambda: _bell_row(PI / 2).retrievability,
        "P(H,H') at pi/3": lambda: ineq.lhs,
        "P(H',H'') + P(H,V'') at pi/3": lambda: ineq.rhs,
        "MMS P(H,H')": lambda: ineq_mms.lhs,
        "MMS P(H',H'') + P(H,V'')": lambda: ineq_mms.rhs,
        "extra entropy at 0": lambda: sc.no_comm_extra_entropy(0.0),
        "teleport Alice entropy": lambda: tele.alice_entropy,
        "teleport Alice iR": lambda: tele.alice_ir,
        "teleport classical bits": lambda: tele.classical_bits,
        "teleport Bob fidelity": lambda: tele.bob_state_fidelity,
        "GHZ_3 reduced entropy": lambda: sc.ghz_measure_one(3).entropy,
        "GHZ_8 reduced entropy": lambda: sc.ghz_measure_one(8).entropy,
        "W_3 reduced entropy": lambda: w3.entropy,
        "W_3 iR": lambda: w3.retrievability,
        "W_3 iL": lambda: w3.loss,
        "Werner(0) entropy": lambda: wr[0.0].s_alpha,
        "Werner(1/3) dS Bell->Werner": lambda: wr[1 / 3].s_alpha,
        "Werner(1/3) iR Bell->Werner": lambda: wr[1 / 3].ir_bell_to_werner,
        "Werner(1/3) dS Werner->MMS": lambda: wr[1 / 3].ds_werner_to_mms,
        "Werner(1/3) iR Werner->MMS": lambda: wr[1 / 3].ir_werner_to_mms,
        "Werner(0.7476) dS Bell->Werner": lambda: wr[0.7476].s_alpha,
        "Werner(0.7476) iR Bell->Werner": lambda: wr[0.7476].ir_bell_to_werner,
        "Werner(1) iR Bell->Werner": lambda: wr[1.0].ir_bell_to_werner,
        "vNEI alpha": sc.solve_vnei_alpha,
        "MEE": lambda: mee.mee,
        "MEI": lambda: mee.mei,
        "separable |HH> loss": lambda: sep.loss,
        "Phi+ (0,0) loss": lambda: sep.bell_contrast_loss,
    }


def _random_density(rng: np.random.Generator, n: int) -> np.ndarray:
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    m = x @ x.conj().T
    return m / np.trace(m).real


def _prop_additivity(rng: np.random.Generator, count: int) -> float:
    worst = 0.0
    for _ in range(count):
        a = validate_density(_random_density(rng, 2), [2])
        b = validate_density(_random_density(rng, 4), [2, 2])
        worst = max(worst, abs(von_neumann_entropy(tensor(a, b)) - von_neumann_entropy(a) - von_neumann_entropy(b)))
    return worst


def _prop_ir_identity(rng: np.random.Generator, count: int) -> float:
    worst = 0.0
    for _ in range(count):
        n = int(rng.integers(2, 9))
        rho = validate_density(_random_density(rng, n), [n])
        eta = np.clip(rho.eigenvalues, 0, None)
        worst = max(worst, abs(np.prod(eta**eta) - retrievability(von_neumann_entropy(rho))))
    return worst


def _prop_roundtrip(rng: np.random.Generator, count: int) -> float:
    worst = 0.0
    basis = ms.computational_basis(3)
    for _ in range(count):
        p = rng.dirichlet(np.ones(8))
        pmf = ms.PMF(basis.labels, p, basis.basis_id)
        psi = ms.pmf_induced_state(pmf, rng.uniform(0, 2 * PI, 8), basis)
        worst = max(worst, float(np.max(np.abs(ms.born_pmf(psi, basis).probs - pmf.probs))))
    return worst


def _prop_reconstruction(rng: np.random.Generator, count: int) -> float:
    worst = 0.0
    for _ in range(count):
        n = int(rng.integers(1, 17))
        x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        h = 0.5 * (x + x.conj().T)
        worst = max(worst, float(np.max(np.abs(hermitian_eigensystem(h).reconstruct() - h))))
    return worst


def _prop_bell_marginals(rng: np.random.Generator, count: int) -> float:
    worst = 0.0
    for kind in ("phi+", "phi-", "psi+", "psi-"):
        psi = make_bell(kind)
        for _ in range(count):
            setting = ms.BellSetting(*rng.uniform(-PI, PI, 2))
            joint = ms.bell_joint_pmf(psi, setting)
            for keep in (0, 1):
                worst = max(worst, float(np.max(np.abs(ms.marginal_pmf(joint, keep, (2, 2)).probs - 0.5))))
    return worst


def _prop_schmidt(rng: np.random.Generator, count: int) -> float:
    worst = 0.0
    for _ in range(count):
        v = rng.normal(size=8) + 1j * rng.normal(size=8)
        psi = StateVector.normalized(v)
        a = von_neumann_entropy(reduced_state(psi, [0]))
        b = von_neumann_entropy(reduced_state(psi, [1, 2]))
        worst = max(worst, abs(a - b))
    return worst


PROPERTIES: dict[str, tuple[Callable[[np.random.Generator, int], float], float]] = {
    "entropy additivity": (_prop_additivity, 1e-9),
    "iR spectral product identity": (_prop_ir_identity, 1e-9),
    "PMF-induced state round trip": (_prop_roundtrip, 1e-10),
    "eigensolver reconstruction": (_prop_reconstruction, 1e-9),
    "Bell marginals uniform": (_prop_bell_marginals, 1e-12),
    "Schmidt entropy symmetry": (_prop_schmidt, 1e-9),
}


def run_selftest(out: TextIO = sys.stdout, samples: int = 40, seed: int = 2024) -> bool:
    """Run every golden and property check; return True iff all pass."""
    failures = 0
    actuals = _golden_actuals()
    for name, (expected, tol) in GOLDEN.items():
        got = float(actuals[name]())
        ok = abs(got - expected) <= tol
        failures += not ok
        if ok:
            out.write(f"PASS {name}\n")
        else:
            out.write(f"FAIL {name}: got {got!r}, expected {expected!r} within {tol:g}\n")
    for name, (check, tol) in PROPERTIES.items():
        worst = check(np.random.default_rng(seed), samples)
        ok = worst <= tol
        failures += not ok
        if ok:
            out.write(f"PASS property {name}\n")
        else:
            out.write(f"FAIL property {name}: max error {worst!r} exceeds {tol:g}\n")
    checks = len(GOLDEN) + len(PROPERTIES)
    if failures:
        out.write(f"{failures} of {checks} checks failed\n")
    else:
        out.write(f"all checks passed ({checks})\n")
    return failures == 0
