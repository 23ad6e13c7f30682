import numpy as np
import pytest
from numpy.testing import assert_allclose

from qinfoloss import measurement as ms
from qinfoloss.errors import BasisMismatchError, DimensionError, InvalidStateError
from qinfoloss.states import (
    apply_gate,
    hadamard,
    make_bell,
    make_cb_state,
    make_mms,
    pauli_x,
    pure_density,
)


def test_cb_measurement_of_ket_zero():
    pmf = ms.born_pmf(make_cb_state([0]), ms.computational_basis(1))
    assert_allclose(pmf.probs, [1, 0])
    assert pmf.basis_id == "CB"


def test_minus_x_in_two_bases():
    psi = apply_gate(hadamard(), 0, apply_gate(pauli_x(), 0, make_cb_state([0])))
    assert_allclose(ms.born_pmf(psi, ms.computational_basis(1)).probs, [0.5, 0.5])
    assert_allclose(ms.born_pmf(psi, ms.sigma_x_basis()).prob("-"), 1.0)


def test_product_basis_order():
    b = ms.computational_basis(2, "HV")
    assert b.labels == (("H", "H"), ("H", "V"), ("V", "H"), ("V", "V"))
    assert b.basis_id == "CB⊗CB"
    assert b.dims == (2, 2)


def test_polarization_vectors():
    t = 0.8
    c, s = np.cos(t / 2), np.sin(t / 2)
    p = ms.polarization_basis(t)
    assert_allclose(p.ket("H'"), [c, -s])
    assert_allclose(p.ket("V'"), [s, c])
    d = ms.polarization_basis(t, "double-primed")
    assert_allclose(d.ket("H''"), [c, s])
    assert_allclose(d.ket("V''"), [-s, c])
    assert ms.station_basis(0.0).labels == (("H",), ("V",))
    assert ms.station_basis(-t).basis_id == d.basis_id


def test_realized_density_is_diagonal_in_its_basis():
    basis = ms.bell_setting_basis(ms.BellSetting(0.9, -0.3))
    pmf = ms.born_pmf(make_bell("phi+"), basis)
    rho = ms.realized_density(pmf, basis)
    v = basis.vectors
    assert_allclose(v.conj().T @ rho.matrix @ v, np.diag(pmf.probs), atol=1e-15)


def test_realized_density_refuses_other_basis():
    pmf = ms.born_pmf(make_cb_state([0]), ms.computational_basis(1))
    with pytest.raises(BasisMismatchError):
        ms.realized_density(pmf, ms.sigma_x_basis())
    # H/V and 0/1 label the same kets
    rho = ms.realized_density(pmf, ms.computational_basis(1, "HV"))
    assert_allclose(rho.matrix, np.diag([1, 0]))


def test_pmf_validation():
    with pytest.raises(InvalidStateError):
        ms.PMF([("a",), ("b",)], [0.7, 0.7], "X")
    with pytest.raises(InvalidStateError):
        ms.PMF([("a",), ("b",)], [1.1, -0.1], "X")
    pmf = ms.PMF([("a",), ("b",)], [1 + 1e-13, -1e-13], "X")
    assert pmf.probs[1] == 0.0


def test_pmf_induced_state_reproduces_probabilities(rng):
    basis = ms.sigma_x_basis()
    pmf = ms.PMF(basis.labels, [0.3, 0.7], "X")
    psi = ms.pmf_induced_state(pmf, [0.0, 1.2], basis)
    assert_allclose(ms.born_pmf(psi, basis).probs, [0.3, 0.7], atol=1e-15)
    with pytest.raises(DimensionError):
        ms.pmf_induced_state(pmf, [0.0], basis)


def test_bell_joint_pmf_closed_form():
    t = 1.1
    pmf = ms.bell_joint_pmf(make_bell("phi+"), ms.BellSetting(t, 0.0))
    c, s = np.cos(t / 2) ** 2 / 2, np.sin(t / 2) ** 2 / 2
    assert_allclose(pmf.probs, [c, s, s, c], atol=1e-15)
    mixed = ms.bell_joint_pmf(pure_density(make_bell("phi+")), ms.BellSetting(t, 0.0))
    assert_allclose(mixed.probs, pmf.probs, atol=1e-15)


def test_marginal_of_mms_is_uniform():
    joint = ms.bell_joint_pmf(make_mms(2), ms.BellSetting(0.4, -0.2))
    m = ms.marginal_pmf(joint, 1, (2, 2))
    assert m.labels == (("H''",), ("V''",))
    assert_allclose(m.probs, [0.5, 0.5])


def test_marginal_rejects_bad_structure():
    pmf = ms.PMF([("a",), ("b",), ("c",), ("d",)], [0.25] * 4, "Z")
    with pytest.raises(ValueError):
        ms.marginal_pmf(pmf, 0, (2, 2))


def test_non_orthonormal_basis_rejected():
    with pytest.raises(InvalidStateError):
        ms.MeasurementBasis([("a",), ("b",)], [[1, 1], [0, 1]], "bad", (2,))


def test_setting_must_be_finite():
    with pytest.raises(ValueError):
        ms.BellSetting(float("nan"), 0.0)
