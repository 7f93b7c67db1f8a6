"""Bosonic quadrature squeezing, atomic spin squeezing, and their transfer
under the resonant Dicke Hamiltonian."""

from .errors import (
    AxisMismatch,
    BasisMismatch,
    DegenerateMeanSpin,
    EtaOutOfRange,
    MeanSpinNotAxial,
    NotHermitian,
    NotTensorBasis,
    OddCatAtZero,
    SqueezeError,
    TruncationTooSmall,
)
from .kernels import BACKEND
from .qalgebra import (
    Dicke,
    EigenSystem,
    Fock,
    OperatorMatrix,
    StateVector,
    Tensor,
    eigh,
    expval,
    partial_trace,
    propagator,
    tensor,
)
from .qstates import (
    CatParity,
    SpinCoherentParam,
    boson_ops,
    cat_state,
    coherent_state,
    displacement,
    rotation,
    spin_cat_state,
    spin_coherent_state,
    spin_ops,
)
from .squeezing import (
    SqueezingReport,
    principal_squeezing,
    spin_squeezing_evenodd,
    spin_squeezing_kitagawa,
    spin_squeezing_wineland,
    squeezing_report,
    variance_xtheta,
)

__version__ = "0.1.0"
