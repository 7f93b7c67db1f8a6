"""Dense linear algebra on labelled Hilbert-space bases.

Bases are small frozen descriptors; states and operators carry their basis so
that mismatched products fail loudly instead of broadcasting silently.  The
excitation number is the basis index for both ``Fock`` and ``Dicke`` bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import BasisMismatch, NotHermitian, NotTensorBasis

HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class Fock:
    n_max: int

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 0:
            raise ValueError(f"n_max must be a non-negative integer, got {self.n_max}")

    @property
    def dim(self) -> int:
        return self.n_max + 1


@dataclass(frozen=True)
class Dicke:
    """Symmetric subspace of spin ``j``; stored as the integer ``two_j = 2j = N``."""

    two_j: int

    def __post_init__(self):
        if int(self.two_j) != self.two_j or self.two_j < 0:
            raise ValueError(f"2j must be a non-negative integer, got {self.two_j}")

    @classmethod
    def from_j(cls, j: float) -> "Dicke":
        return cls(two_j=half_integer_twice(j))

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def dim(self) -> int:
        return self.two_j + 1


@dataclass(frozen=True)
class Tensor:
    left: "Basis"
    right: "Basis"

    @property
    def dim(self) -> int:
        return self.left.dim * self.right.dim


Basis = Union[Fock, Dicke, Tensor]


def half_integer_twice(j) -> int:
    """Return 2j as an int, rejecting anything that is not a half-integer."""
    two_j = 2 * float(j)
    if abs(two_j - round(two_j)) > 1e-12 or two_j < 0:
        raise ValueError(f"j must be a non-negative half-integer, got {j}")
    return int(round(two_j))


def _frozen(arr, dtype=complex):
    a = np.array(arr, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    basis: Basis
    amps: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amps).reshape(-1)
        if amps.shape[0] != self.basis.dim:
            raise BasisMismatch(f"{amps.shape[0]} amplitudes for basis of dim {self.basis.dim}")
        object.__setattr__(self, "amps", amps)

    @classmethod
    def normalized(cls, basis: Basis, amps) -> "StateVector":
        amps = np.asarray(amps, dtype=complex)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(basis, amps / norm)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def overlap(self, other: "StateVector") -> complex:
        """<self|other>."""
        _check_same(self.basis, other.basis)
        return complex(np.vdot(self.amps, other.amps))

    def density(self) -> "OperatorMatrix":
        return OperatorMatrix(self.basis, np.outer(self.amps, self.amps.conj()), hermitian=True)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    basis: Basis
    entries: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        m = _frozen(self.entries)
        d = self.basis.dim
        if m.shape != (d, d):
            raise BasisMismatch(f"matrix shape {m.shape} for basis of dim {d}")
        if self.hermitian:
            dev = np.max(np.abs(m - m.conj().T)) if d else 0.0
            if dev > HERMITIAN_TOL * max(1.0, np.max(np.abs(m))):
                raise NotHermitian(f"hermitian flag set but max|A - A^H| = {dev:.3e}")
        object.__setattr__(self, "entries", m)

    @property
    def dag(self) -> "OperatorMatrix":
        return OperatorMatrix(self.basis, self.entries.conj().T, self.hermitian)

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            _check_same(self.basis, other.basis)
            return OperatorMatrix(self.basis, self.entries @ other.entries)
        if isinstance(other, StateVector):
            _check_same(self.basis, other.basis)
            return StateVector(self.basis, self.entries @ other.amps)
        return NotImplemented

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _check_same(self.basis, other.basis)
        return OperatorMatrix(self.basis, self.entries + other.entries,
                              self.hermitian and other.hermitian)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _check_same(self.basis, other.basis)
        return OperatorMatrix(self.basis, self.entries - other.entries,
                              self.hermitian and other.hermitian)

    def scale(self, c) -> "OperatorMatrix":
        herm = self.hermitian and np.isreal(c)
        return OperatorMatrix(self.basis, c * self.entries, bool(herm))

    def as_hermitian(self) -> "OperatorMatrix":
        """Re-flag as Hermitian; raises NotHermitian if it is not."""
        return OperatorMatrix(self.basis, self.entries, hermitian=True)


@dataclass(frozen=True, eq=False)
class EigenSystem:
    basis: Basis
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def propagator(self, t: float) -> OperatorMatrix:
        v = self.eigenvectors
        phases = np.exp(-1j * self.eigenvalues * t)
        return OperatorMatrix(self.basis, (v * phases) @ v.conj().T)


def _check_same(a: Basis, b: Basis):
    if a != b:
        raise BasisMismatch(f"basis mismatch: {a} vs {b}")


def identity(basis: Basis) -> OperatorMatrix:
    return OperatorMatrix(basis, np.eye(basis.dim), hermitian=True)


def commutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    _check_same(a.basis, b.basis)
    return OperatorMatrix(a.basis, a.entries @ b.entries - b.entries @ a.entries)


def eigh(op: OperatorMatrix) -> EigenSystem:
    """Hermitian eigendecomposition, eigenvalues ascending."""
    if not op.hermitian:
        raise NotHermitian("eigh requires an operator flagged Hermitian")
    # the flag was verified at construction; re-check in case entries were built elsewhere
    m = op.entries
    if m.size and np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL * max(1.0, np.max(np.abs(m))):
        raise NotHermitian("operator is not Hermitian")
    w, v = np.linalg.eigh(m)
    return EigenSystem(op.basis, w, v)


def propagator(op: OperatorMatrix, t: float) -> OperatorMatrix:
    """exp(-i op t) via the eigendecomposition of ``op``."""
    return eigh(op).propagator(t)


def expm_antihermitian(gen: np.ndarray, basis: Basis) -> OperatorMatrix:
    """exp(G) for anti-Hermitian G, using exp(G) = exp(-i H) with H = iG."""
    return propagator(OperatorMatrix(basis, 1j * gen, hermitian=True), 1.0)


def tensor(a, b):
    """Kronecker product; the left factor is the slow (outer) index."""
    basis = Tensor(a.basis, b.basis)
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(basis, np.kron(a.amps, b.amps))
    if isinstance(a, OperatorMatrix) and isinstance(b, OperatorMatrix):
        return OperatorMatrix(basis, np.kron(a.entries, b.entries), a.hermitian and b.hermitian)
    raise TypeError("tensor() needs two states or two operators")


def partial_trace(obj, keep: str) -> OperatorMatrix:
    """Reduced density matrix on the ``keep`` ('left' or 'right') factor."""
    if keep not in ("left", "right"):
        raise ValueError("keep must be 'left' or 'right'")
    if not isinstance(obj.basis, Tensor):
        raise NotTensorBasis(f"partial trace needs a Tensor basis, got {obj.basis}")
    dl, dr = obj.basis.left.dim, obj.basis.right.dim
    if isinstance(obj, StateVector):
        psi = obj.amps.reshape(dl, dr)
        rho = psi @ psi.conj().T if keep == "left" else psi.T @ psi.conj()
    else:
        r = obj.entries.reshape(dl, dr, dl, dr)
        rho = np.einsum("ikjk->ij", r) if keep == "left" else np.einsum("kikj->ij", r)
    rho = 0.5 * (rho + rho.conj().T)
    kept = obj.basis.left if keep == "left" else obj.basis.right
    return OperatorMatrix(kept, rho, hermitian=True)


def expval(state: StateVector, op: OperatorMatrix) -> complex:
    _check_same(state.basis, op.basis)
    val = complex(np.vdot(state.amps, op.entries @ state.amps))
    if op.hermitian:
        return complex(val.real, 0.0)
    return val


def expval_rho(rho: OperatorMatrix, op: OperatorMatrix) -> complex:
    _check_same(rho.basis, op.basis)
    return complex(np.trace(rho.entries @ op.entries))
