"""Operators and states: boson mode, collective spin, coherent and cat states."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from .errors import EtaOutOfRange, OddCatAtZero, TruncationTooSmall
from .qalgebra import (
    Dicke,
    Fock,
    OperatorMatrix,
    StateVector,
    expm_antihermitian,
    half_integer_twice,
)

TAIL_TOL = 1e-12
MIN_CUTOFF = 16


class CatParity(Enum):
    EVEN = 1
    ODD = -1

    @property
    def sign(self) -> int:
        return self.value

    @property
    def symbol(self) -> str:
        return "+" if self is CatParity.EVEN else "-"

    @classmethod
    def parse(cls, s) -> "CatParity":
        if isinstance(s, cls):
            return s
        key = str(s).strip().lower()
        if key in ("+", "even", "e", "1", "+1"):
            return cls.EVEN
        if key in ("-", "odd", "o", "-1", "−"):
            return cls.ODD
        raise ValueError(f"unknown parity {s!r}")


@dataclass(frozen=True)
class SpinCoherentParam:
    """Spin coherent-state label (eta, j) with 0 < |eta| < 1."""

    eta: complex
    two_j: int

    def __post_init__(self):
        object.__setattr__(self, "eta", complex(self.eta))
        if not 0.0 < abs(self.eta) < 1.0:
            raise EtaOutOfRange(f"|eta| must lie in (0, 1), got {abs(self.eta)}")
        if int(self.two_j) != self.two_j or self.two_j < 1:
            raise ValueError(f"2j must be a positive integer, got {self.two_j}")

    @classmethod
    def from_j(cls, eta, j) -> "SpinCoherentParam":
        return cls(eta, half_integer_twice(j))

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def gamma(self) -> float:
        e2 = abs(self.eta) ** 2
        return (1 - e2) / (1 + e2)


# ---------------------------------------------------------------------------
# operators


@dataclass(frozen=True, eq=False)
class BosonOps:
    a: OperatorMatrix
    a_dag: OperatorMatrix
    number: OperatorMatrix
    X: OperatorMatrix
    P: OperatorMatrix

    def X_theta(self, theta: float) -> OperatorMatrix:
        m = self.a.entries * np.exp(-1j * theta) + self.a_dag.entries * np.exp(1j * theta)
        return OperatorMatrix(self.a.basis, m, hermitian=True)


def annihilation(n_max: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), 1).astype(complex)


def boson_ops(n_max: int) -> BosonOps:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    basis = Fock(n_max)
    a = annihilation(n_max)
    ad = a.conj().T
    return BosonOps(
        a=OperatorMatrix(basis, a),
        a_dag=OperatorMatrix(basis, ad),
        number=OperatorMatrix(basis, np.diag(np.arange(n_max + 1)), hermitian=True),
        X=OperatorMatrix(basis, a + ad, hermitian=True),
        P=OperatorMatrix(basis, -1j * (a - ad), hermitian=True),
    )


@dataclass(frozen=True, eq=False)
class SpinOps:
    S_plus: OperatorMatrix
    S_minus: OperatorMatrix
    S_z: OperatorMatrix
    S_x: OperatorMatrix
    S_y: OperatorMatrix
    number_N: OperatorMatrix

    @property
    def j(self) -> float:
        return self.S_z.basis.j

    def S_n(self, n) -> OperatorMatrix:
        """Spin component along the real 3-vector ``n``."""
        m = n[0] * self.S_x.entries + n[1] * self.S_y.entries + n[2] * self.S_z.entries
        return OperatorMatrix(self.S_z.basis, m, hermitian=True)


def lowering_elements(two_j: int) -> np.ndarray:
    """<n-1|S_-|n> = sqrt(n (2j - n + 1)) for n = 1..2j."""
    n = np.arange(1, two_j + 1, dtype=float)
    return np.sqrt(n * (two_j - n + 1))


def spin_ops(j) -> SpinOps:
    two_j = half_integer_twice(j)
    if two_j < 1:
        raise ValueError("spin_ops needs j >= 1/2")
    basis = Dicke(two_j)
    sm = np.diag(lowering_elements(two_j), 1).astype(complex)
    sp = sm.conj().T
    n_op = np.diag(np.arange(two_j + 1, dtype=float))
    sz = n_op - (two_j / 2) * np.eye(two_j + 1)
    return SpinOps(
        S_plus=OperatorMatrix(basis, sp),
        S_minus=OperatorMatrix(basis, sm),
        S_z=OperatorMatrix(basis, sz, hermitian=True),
        S_x=OperatorMatrix(basis, 0.5 * (sp + sm), hermitian=True),
        S_y=OperatorMatrix(basis, -0.5j * (sp - sm), hermitian=True),
        number_N=OperatorMatrix(basis, n_op, hermitian=True),
    )


# ---------------------------------------------------------------------------
# bosonic states


def poisson_tail(alpha_abs2: float, n_max: int) -> float:
    """Weight of a coherent state beyond photon number ``n_max``."""
    if alpha_abs2 == 0:
        return 0.0
    return float(poisson.sf(n_max, alpha_abs2))


def default_cutoff(alpha_abs: float, tol: float = TAIL_TOL, minimum: int = MIN_CUTOFF) -> int:
    """Smallest n_max with coherent-state tail <= tol, at least ``minimum``."""
    mu = abs(alpha_abs) ** 2
    n = minimum
    while poisson_tail(mu, n) > tol:
        n += 1
    return n


def fock_state(n: int, n_max: int) -> StateVector:
    if not 0 <= n <= n_max:
        raise ValueError(f"Fock level n={n} outside 0..{n_max}")
    amps = np.zeros(n_max + 1, dtype=complex)
    amps[n] = 1.0
    return StateVector(Fock(n_max), amps)


def _coherent_amps(alpha: complex, n_max: int) -> np.ndarray:
    n = np.arange(n_max + 1)
    if alpha == 0:
        out = np.zeros(n_max + 1, dtype=complex)
        out[0] = 1.0
        return out
    r = abs(alpha)
    logmag = -0.5 * r * r + n * np.log(r) - 0.5 * gammaln(n + 1)
    return np.exp(logmag + 1j * n * np.angle(alpha))


def _check_tail(alpha: complex, n_max: int):
    tail = poisson_tail(abs(alpha) ** 2, n_max)
    if tail > TAIL_TOL:
        raise TruncationTooSmall(
            f"n_max={n_max} drops weight {tail:.3e} > {TAIL_TOL:g} for |alpha|={abs(alpha):.6g}",
            leak=tail,
        )


def coherent_state(alpha, n_max: int) -> StateVector:
    alpha = complex(alpha)
    _check_tail(alpha, n_max)
    return StateVector.normalized(Fock(n_max), _coherent_amps(alpha, n_max))


def cat_state(alpha, parity, n_max: int) -> StateVector:
    """Even (+) or odd (-) superposition of |alpha> and |-alpha>."""
    alpha = complex(alpha)
    parity = CatParity.parse(parity)
    if parity is CatParity.ODD and alpha == 0:
        raise OddCatAtZero("the odd cat state is undefined at alpha = 0")
    _check_tail(alpha, n_max)
    n = np.arange(n_max + 1)
    mask = (n % 2 == 0) if parity is CatParity.EVEN else (n % 2 == 1)
    amps = np.where(mask, _coherent_amps(alpha, n_max), 0.0)
    return StateVector.normalized(Fock(n_max), amps)


# ---------------------------------------------------------------------------
# atomic states


def dicke_state(j, n: int) -> StateVector:
    two_j = half_integer_twice(j)
    if not 0 <= n <= two_j:
        raise ValueError(f"excitation {n} outside 0..{two_j}")
    amps = np.zeros(two_j + 1, dtype=complex)
    amps[n] = 1.0
    return StateVector(Dicke(two_j), amps)


def scs_amplitudes(eta: complex, two_j: int) -> np.ndarray:
    """(1+|eta|^2)^(-j) binom(2j, n)^(1/2) eta^n for n = 0..2j; any complex eta."""
    n = np.arange(two_j + 1)
    if eta == 0:
        out = np.zeros(two_j + 1, dtype=complex)
        out[0] = 1.0
        return out
    r = abs(eta)
    log_binom = gammaln(two_j + 1) - gammaln(n + 1) - gammaln(two_j - n + 1)
    logmag = -0.5 * two_j * np.log1p(r * r) + 0.5 * log_binom + n * np.log(r)
    return np.exp(logmag + 1j * n * np.angle(eta))


def spin_coherent_state(param: SpinCoherentParam) -> StateVector:
    return StateVector(Dicke(param.two_j), scs_amplitudes(param.eta, param.two_j))


def spin_cat_state(param: SpinCoherentParam, parity) -> StateVector:
    """Even (+) or odd (-) superposition of |eta> and |-eta>."""
    parity = CatParity.parse(parity)
    n = np.arange(param.two_j + 1)
    mask = (n % 2 == 0) if parity is CatParity.EVEN else (n % 2 == 1)
    amps = np.where(mask, scs_amplitudes(param.eta, param.two_j), 0.0)
    return StateVector.normalized(Dicke(param.two_j), amps)


def spin_cat_norm(param: SpinCoherentParam, parity) -> float:
    """Closed-form normalization sqrt(2 +- 2 gamma^(2j)) of |eta> +- |-eta>."""
    s = CatParity.parse(parity).sign
    return float(np.sqrt(2 + 2 * s * param.gamma ** param.two_j))


# ---------------------------------------------------------------------------
# unitaries


def displacement(alpha, n_max: int) -> OperatorMatrix:
    """D(alpha) = exp(alpha a^+ - alpha^* a) on the truncated Fock space."""
    a = annihilation(n_max)
    gen = complex(alpha) * a.conj().T - np.conj(complex(alpha)) * a
    return expm_antihermitian(gen, Fock(n_max))


def rotation(theta: float, phi: float, j) -> OperatorMatrix:
    """R(theta, phi) = exp(-theta/2 (S_+ e^{-i phi} - S_- e^{i phi})).

    Equivalent to a rotation by ``theta`` about the axis (-sin phi, cos phi, 0).
    """
    ops = spin_ops(j)
    gen = -0.5 * theta * (ops.S_plus.entries * np.exp(-1j * phi)
                          - ops.S_minus.entries * np.exp(1j * phi))
    return expm_antihermitian(gen, ops.S_z.basis)
