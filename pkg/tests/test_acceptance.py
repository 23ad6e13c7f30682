"""Acceptance suite; the terminal summary prints one PASS/FAIL line per criterion."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qinfoloss import measurement as ms
from qinfoloss import scenarios as sc
from qinfoloss.cli import main
from qinfoloss.metrics import (
    comparative_ir,
    mutual_quantum_entropy,
    retrievability,
    von_neumann_entropy,
)
from qinfoloss.numeric import hermitian_eigensystem
from qinfoloss.report import format_real
from qinfoloss.states import (
    BELL_KINDS,
    make_bell,
    make_mms,
    pure_density,
    tensor,
    validate_density,
)

from conftest import random_density, random_hermitian

PI = math.pi
LN2 = math.log(2)
LN4 = math.log(4)


def criterion(number, title):
    return pytest.mark.criterion(number, title)


@criterion(1, "single-qubit table reproduction")
def test_single_qubit_table():
    rows = sc.single_qubit_sweep([0.0, PI / 3, PI / 2])
    got = [(r.entropy, r.retrievability, r.loss, r.bias) for r in rows]
    expected = [(0, 1, 0, 1), (0.5623, 0.5699, 0.4301, 0.25), (0.6931, 0.5, 0.5, 0)]
    assert_allclose(got, expected, atol=5e-5)


@criterion(2, "Bell sweep endpoints")
def test_bell_sweep_endpoints():
    r0, r3, r2 = sc.bell_sweep([0.0, PI / 3, PI / 2])
    assert_allclose(r0.retrievability, 0.5, atol=1e-12)
    assert_allclose(r3.retrievability, 0.285, atol=5e-4)
    assert_allclose(r2.retrievability, 0.25, atol=1e-12)
    for r in (r0, r3, r2):
        assert r.loss == 1.0 - r.retrievability


@criterion(3, "Bell inequality at pi/3 and for the mixed state")
def test_bell_inequality():
    v = sc.bell_inequality_check(PI / 3)
    assert_allclose((v.lhs, v.rhs), (0.375, 0.25), atol=1e-12)
    assert v.violated
    m = sc.bell_inequality_check(PI / 3, make_mms(2))
    assert_allclose((m.lhs, m.rhs), (0.25, 0.5), atol=1e-12)
    assert m.lhs <= m.rhs and not m.violated


@criterion(4, "mutual quantum entropy and loss of a Bell state")
def test_mqe_bell():
    for kind in BELL_KINDS:
        mqe = mutual_quantum_entropy(pure_density(make_bell(kind)))
        assert_allclose(mqe, LN4, atol=1e-9)
        assert format_real(1 - retrievability(mqe)) == "0.750000"


@criterion(5, "teleportation entropy, outcomes and fidelity")
def test_teleportation():
    rng = np.random.default_rng(7)
    for _ in range(100):
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        a, b = v / np.linalg.norm(v)
        rep = sc.teleportation_report(a, b)
        assert_allclose(rep.alice_entropy, LN4, atol=1e-9)
        assert_allclose(list(rep.outcome_probs.values()), [0.25] * 4, atol=1e-12)
        assert_allclose(rep.bob_state_fidelity, 1.0, atol=1e-10)


@criterion(6, "GHZ and W robustness")
def test_ghz_w():
    for m in range(3, 11):
        assert_allclose(sc.ghz_measure_one(m).entropy, LN2, atol=1e-9)
    w3 = sc.w_measure_one(3)
    assert_allclose((w3.entropy, w3.retrievability, w3.loss), (0.6365, 0.5291, 0.4709), atol=5e-5)
    entropies = [sc.w_measure_one(m).entropy for m in range(3, 65)]
    assert all(b < a for a, b in zip(entropies, entropies[1:]))


@criterion(7, "Werner table, chain identity and vNEI root")
def test_werner():
    expected = {0.0: (1.386, 0.25), 1 / 3: (1.242, 0.2887), 0.7476: (0.6931, 0.5), 1.0: (0.0, 1.0)}
    for row in sc.werner_report(list(expected)):
        assert_allclose((row.s_alpha, row.ir_bell_to_werner), expected[row.alpha], atol=5e-4)
        assert abs(row.ir_bell_to_mms - row.ir_bell_to_werner * row.ir_werner_to_mms) <= 1e-12
        s_a = von_neumann_entropy(pure_density(make_bell("psi-")))
        s_b = row.s_alpha
        s_c = LN4
        assert abs(comparative_ir(s_c, s_a) - comparative_ir(s_c, s_b) * comparative_ir(s_b, s_a)) <= 1e-12
    assert_allclose(sc.solve_vnei_alpha(), 0.7476, atol=5e-5)


@criterion(8, "MEE and MEI shared by Bell, GHZ and vNEI Werner")
def test_mee_mei():
    summary = sc.mee_mei_summary()
    assert_allclose(summary.mee, LN2, atol=1e-9)
    assert_allclose(summary.mei, 0.5, atol=1e-9)
    names = {name for name, _ in summary.witnesses}
    assert {"bell", "ghz3", "werner-vnei"} <= names
    for _, s in summary.witnesses:
        assert_allclose(s, LN2, atol=1e-9)
        assert_allclose(1 - math.exp(-s), 0.5, atol=1e-9)


@criterion(9, "property suites")
class TestProperties:
    N = 500

    def test_entropy_additivity(self):
        rng = np.random.default_rng(91)
        worst = 0.0
        for _ in range(self.N):
            n = int(rng.choice([2, 4]))
            a = validate_density(random_density(rng, 2), [2])
            b = validate_density(random_density(rng, n), [n])
            joint = von_neumann_entropy(tensor(a, b))
            worst = max(worst, abs(joint - von_neumann_entropy(a) - von_neumann_entropy(b)))
        assert worst <= 1e-9

    def test_spectral_identity(self):
        rng = np.random.default_rng(92)
        worst = 0.0
        for _ in range(self.N):
            n = int(rng.integers(2, 9))
            rho = validate_density(random_density(rng, n), [n])
            eta = np.clip(rho.eigenvalues, 0.0, None)
            worst = max(worst, abs(np.prod(eta**eta) - math.exp(-von_neumann_entropy(rho))))
        assert worst <= 1e-9

    def test_pmf_round_trip(self):
        rng = np.random.default_rng(93)
        worst = 0.0
        for _ in range(self.N):
            m = int(rng.integers(1, 4))
            basis = ms.computational_basis(m)
            pmf = ms.PMF(basis.labels, rng.dirichlet(np.ones(basis.dim)), basis.basis_id)
            psi = ms.pmf_induced_state(pmf, rng.uniform(0, 2 * PI, basis.dim), basis)
            worst = max(worst, float(np.max(np.abs(ms.born_pmf(psi, basis).probs - pmf.probs))))
        assert worst <= 1e-10

    def test_eigensolver_reconstruction(self):
        rng = np.random.default_rng(94)
        worst = 0.0
        for _ in range(self.N):
            h = random_hermitian(rng, int(rng.integers(1, 17)))
            worst = max(worst, float(np.max(np.abs(hermitian_eigensystem(h).reconstruct() - h))))
        assert worst <= 1e-9

    def test_bell_marginals(self):
        rng = np.random.default_rng(95)
        worst = 0.0
        for kind in BELL_KINDS:
            psi = make_bell(kind)
            for _ in range(50):
                joint = ms.bell_joint_pmf(psi, ms.BellSetting(*rng.uniform(-PI, PI, 2)))
                for keep in (0, 1):
                    marginal = ms.marginal_pmf(joint, keep, (2, 2)).probs
                    worst = max(worst, float(np.max(np.abs(marginal - 0.5))))
        assert worst <= 1e-12


COMMANDS = [
    ["sweep-1q"],
    ["bell-sweep", "--points", "91"],
    ["bell-ineq", "--points", "37"],
    ["bell-ineq", "--points", "37", "--mms"],
    ["no-comm", "--points", "91"],
    ["teleport", "--a", "0.6", "--b", "0.8j"],
    ["ghz"],
    ["w"],
    ["werner"],
    ["mee"],
    ["selftest"],
]


JSON_COMMANDS = [["sweep-1q"], ["teleport", "--a", "0.6", "--b", "0.8j"], ["werner"], ["mee"]]


def _invoke(argv, capsys):
    code = main(argv)
    out, _ = capsys.readouterr()
    assert code == 0
    return out.encode()


def _check_repeatable(argv, capsys):
    first = _invoke(argv, capsys)
    assert first
    assert _invoke(argv, capsys) == first
    parallel = argv + ["--jobs", "4"]
    assert _invoke(parallel, capsys) == _invoke(parallel, capsys) == first


@criterion(10, "byte-identical CLI output across runs and job counts")
@pytest.mark.parametrize("argv", COMMANDS, ids=" ".join)
def test_determinism_csv(argv, capsys):
    _check_repeatable(argv, capsys)


@criterion(10, "byte-identical CLI output across runs and job counts")
@pytest.mark.parametrize("argv", JSON_COMMANDS, ids=" ".join)
def test_determinism_json(argv, capsys):
    _check_repeatable(argv + ["--format", "json"], capsys)
