"""Entropy gain and information loss of quantum states under measurement."""

from .errors import (
    BasisMismatchError,
    ConvergenceError,
    DimensionError,
    DomainError,
    InconsistencyError,
    InvalidStateError,
    NotHermitianError,
    QInfoError,
    SizeLimitError,
)
from .measurement import (
    PMF,
    BellSetting,
    MeasurementBasis,
    bell_basis,
    bell_joint_pmf,
    born_pmf,
    born_pmf_mixed,
    computational_basis,
    marginal_pmf,
    pmf_induced_state,
    polarization_basis,
    product_basis,
    realized_density,
    sigma_x_basis,
)
from .metrics import (
    InfoReport,
    LogBase,
    comparative_ir,
    info_loss,
    info_report,
    mutual_quantum_entropy,
    polar_bias,
    retrievability,
    shannon_entropy,
    von_neumann_entropy,
)
from .numeric import Spectrum, hermitian_eigensystem
from .scenarios import (
    bell_inequality_check,
    bell_sweep,
    ghz_measure_one,
    mee_mei_summary,
    no_comm_sweep,
    single_qubit_sweep,
    solve_vnei_alpha,
    teleportation_report,
    w_measure_one,
    werner_report,
)
from .states import (
    DensityMatrix,
    Gate,
    StateVector,
    make_bell,
    make_cb_state,
    make_ghz,
    make_mms,
    make_u3_state,
    make_w,
    make_werner,
    partial_trace,
    pure_density,
    purity,
    reduced_state,
    validate_density,
)

__version__ = "0.1.0"
