"""Squeezing figures of merit for bosonic and collective-spin states.

Bosonic: principal quadrature squeezing ``zeta`` = min over theta of the
variance of X_theta = a e^{-i theta} + a^+ e^{i theta}.

Spin: Kitagawa-Ueda ``xi`` = 2 (min perpendicular variance) / j and the
Wineland ``xi'`` = xi / (|<S>|/j)^2.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import (
    BasisMismatch,
    DegenerateMeanSpin,
    MeanSpinNotAxial,
    TruncationTooSmall,
)
from .qalgebra import Dicke, Fock, OperatorMatrix, StateVector
from .qstates import boson_ops, displacement, rotation, spin_ops

DEGENERATE_SPIN = 1e-8
AXIAL_TOL = 1e-10
EDGE_TOL = 1e-10


@lru_cache(maxsize=64)
def _spin_ops(two_j: int):
    return spin_ops(two_j / 2)


@lru_cache(maxsize=64)
def _boson_ops(n_max: int):
    return boson_ops(n_max)


# ---------------------------------------------------------------------------
# bosonic


@dataclass(frozen=True)
class BosonMoments:
    a: complex
    a2: complex
    n: float

    @property
    def centered_a2(self) -> complex:
        return self.a2 - self.a ** 2

    @property
    def centered_n(self) -> float:
        return self.n - abs(self.a) ** 2


def boson_moments(obj) -> BosonMoments:
    """<a>, <a^2>, <a^+ a> of a Fock-basis state vector or density matrix."""
    if not isinstance(obj.basis, Fock):
        raise BasisMismatch(f"bosonic moments need a Fock basis, got {obj.basis}")
    n_max = obj.basis.n_max
    sq = np.sqrt(np.arange(1, n_max + 1, dtype=float))
    if isinstance(obj, StateVector):
        c = obj.amps
        edge = abs(c[-1]) ** 2
        a1 = np.vdot(c[:-1], sq * c[1:])
        a2 = np.vdot(c[:-2], sq[:-1] * sq[1:] * c[2:])
        n = np.sum(np.arange(n_max + 1) * np.abs(c) ** 2)
    else:
        rho = obj.entries
        edge = abs(rho[-1, -1])
        # tr(rho a) = sum_n rho[n, n-1] sqrt(n)
        a1 = np.sum(np.diagonal(rho, -1) * sq)
        a2 = np.sum(np.diagonal(rho, -2) * sq[:-1] * sq[1:])
        n = np.sum(np.arange(n_max + 1) * np.real(np.diagonal(rho)))
    if edge > EDGE_TOL:
        raise TruncationTooSmall(
            f"state has weight {edge:.3e} on the cutoff level n_max={n_max}", leak=edge)
    return BosonMoments(complex(a1), complex(a2), float(np.real(n)))


def zeta_from_moments(m: BosonMoments) -> tuple[float, float]:
    """Principal squeezing and its optimal angle in [0, pi)."""
    c2 = m.centered_a2
    zeta = 1.0 + 2.0 * m.centered_n - 2.0 * abs(c2)
    if abs(c2) == 0.0:
        return zeta, 0.0
    theta = ((np.pi + np.angle(c2)) / 2.0) % np.pi
    return float(zeta), float(theta)


def principal_squeezing(state) -> tuple[float, float]:
    """Return (zeta, theta_star) for a Fock-basis state or density matrix."""
    return zeta_from_moments(boson_moments(state))


def zeta_tilde(state) -> float:
    """<a^+ a> - |<a^2>| (mean-subtracted); zeta = 1 + 2 zeta_tilde."""
    m = boson_moments(state)
    return m.centered_n - abs(m.centered_a2)


def variance_xtheta(state: StateVector, theta: float) -> float:
    """(Delta X_theta)^2 evaluated with the explicit quadrature matrix."""
    if not isinstance(state.basis, Fock):
        raise BasisMismatch(f"quadrature variance needs a Fock basis, got {state.basis}")
    x = _boson_ops(state.basis.n_max).X_theta(theta).entries
    v = x @ state.amps
    mean = np.vdot(state.amps, v).real
    return float(np.vdot(v, v).real - mean ** 2)


def zeta_by_theta_scan(state: StateVector, n_grid: int = 720) -> tuple[float, float]:
    """Brute-force principal squeezing: grid over [0, pi) plus golden-section polish."""
    thetas = np.arange(n_grid) * (np.pi / n_grid)
    vals = np.array([variance_xtheta(state, t) for t in thetas])
    k = int(np.argmin(vals))
    h = np.pi / n_grid
    res = minimize_scalar(lambda t: variance_xtheta(state, t), method="golden",
                          bracket=(thetas[k] - h, thetas[k], thetas[k] + h),
                          options={"xtol": 1e-10})
    if res.fun < vals[k]:
        return float(res.fun), float(res.x % np.pi)
    return float(vals[k]), float(thetas[k])


# ---------------------------------------------------------------------------
# spin


def _require_dicke(state: StateVector) -> Dicke:
    if not isinstance(state.basis, Dicke):
        raise BasisMismatch(f"spin squeezing needs a Dicke basis, got {state.basis}")
    if state.basis.two_j < 1:
        raise BasisMismatch("spin squeezing needs j >= 1/2")
    return state.basis


def spin_moments(state: StateVector) -> tuple[np.ndarray, np.ndarray]:
    """Mean spin (Sx, Sy, Sz) and symmetrized second moments G_ab = <{S_a, S_b}>/2."""
    basis = _require_dicke(state)
    ops = _spin_ops(basis.two_j)
    c = state.amps
    vecs = [ops.S_x.entries @ c, ops.S_y.entries @ c, ops.S_z.entries @ c]
    mean = np.array([np.vdot(c, v).real for v in vecs])
    g = np.empty((3, 3))
    for i in range(3):
        for k in range(i, 3):
            g[i, k] = g[k, i] = np.vdot(vecs[i], vecs[k]).real
    return mean, g


def _perp_pair(n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    e = np.zeros(3)
    e[int(np.argmin(np.abs(n)))] = 1.0
    n1 = e - np.dot(e, n) * n
    n1 /= np.linalg.norm(n1)
    return n1, np.cross(n, n1)


def kitagawa_from_moments(mean, g, j: float, pair=None):
    norm = np.linalg.norm(mean)
    if norm <= DEGENERATE_SPIN:
        raise DegenerateMeanSpin(f"|<S>| = {norm:.3e}: no mean-spin axis")
    n = mean / norm
    n1, n2 = _perp_pair(n) if pair is None else pair
    p = np.column_stack([n1, n2])
    mu = p.T @ mean
    cov = p.T @ g @ p - np.outer(mu, mu)
    s, d = cov[0, 0] + cov[1, 1], cov[0, 0] - cov[1, 1]
    lam_min = 0.5 * (s - np.hypot(d, 2 * cov[0, 1]))
    w, v = np.linalg.eigh(cov)
    n_perp = p @ v[:, 0]
    return 2.0 * lam_min / j, n_perp


def spin_squeezing_kitagawa(state: StateVector, pair=None):
    """Return (xi, n_perp_star, mean_spin) via the perpendicular-plane covariance.

    ``pair`` optionally fixes the orthonormal basis {n1, n2} of the plane.
    """
    basis = _require_dicke(state)
    mean, g = spin_moments(state)
    xi, n_perp = kitagawa_from_moments(mean, g, basis.j, pair)
    return float(xi), n_perp, mean


@dataclass(frozen=True)
class EvenOddMoments:
    N1: float  # <N>
    N2: float  # <N^2>
    sm2: complex  # <S_-^2>
    sm: complex  # <S_->


def evenodd_moments(state: StateVector) -> EvenOddMoments:
    basis = _require_dicke(state)
    two_j = basis.two_j
    c = state.amps
    p = np.abs(c) ** 2
    k = np.arange(two_j + 1)
    low = np.concatenate([[0.0], np.sqrt(k[1:] * (two_j - k[1:] + 1.0))])
    sm = np.vdot(c[:-1], low[1:] * c[1:])
    sm2 = np.vdot(c[:-2], low[1:-1] * low[2:] * c[2:]) if two_j >= 2 else 0.0
    return EvenOddMoments(float(p @ k), float(p @ k ** 2), complex(sm2), complex(sm))


def xi_from_evenodd(m: EvenOddMoments, j: float) -> tuple[float, float]:
    xi_t = 2 * j * m.N1 - m.N2 - abs(m.sm2)
    return 1.0 + xi_t / j, xi_t


def spin_squeezing_evenodd(state: StateVector) -> tuple[float, float]:
    """Return (xi, xi_tilde) for a state whose mean spin lies on the z axis."""
    basis = _require_dicke(state)
    m = evenodd_moments(state)
    if abs(m.sm) > AXIAL_TOL:
        raise MeanSpinNotAxial(f"|<S_+>| = {abs(m.sm):.3e}; mean spin is off the z axis")
    xi, xi_t = xi_from_evenodd(m, basis.j)
    return float(xi), float(xi_t)


def spin_squeezing_wineland(state: StateVector) -> float:
    """xi / (|<S>|/j)^2, using the full mean-spin length."""
    xi, _, mean = spin_squeezing_kitagawa(state)
    j = state.basis.j
    return float(xi / (np.linalg.norm(mean) / j) ** 2)


# ---------------------------------------------------------------------------
# frame normalization


def normalize_frame_boson(state: StateVector) -> StateVector:
    """Displace by -<a> so that the returned state has <a> = 0."""
    m = boson_moments(state)
    return displacement(-m.a, state.basis.n_max) @ state


def spin_frame_angles(mean) -> tuple[float, float]:
    """(theta, phi) such that rotation(theta, phi) maps the mean spin onto -z."""
    norm = np.linalg.norm(mean)
    if norm <= DEGENERATE_SPIN:
        raise DegenerateMeanSpin(f"|<S>| = {norm:.3e}: no mean-spin axis")
    n = np.asarray(mean) / norm
    polar = np.arccos(np.clip(n[2], -1.0, 1.0))
    phi = np.arctan2(n[1], n[0]) if np.hypot(n[0], n[1]) > 0 else 0.0
    return float(np.pi - polar), float(phi)


def normalize_frame_spin(state: StateVector) -> StateVector:
    """Rotate so the mean spin points along -z (the low-excitation pole)."""
    basis = _require_dicke(state)
    mean, _ = spin_moments(state)
    theta, phi = spin_frame_angles(mean)
    return rotation(theta, phi, basis.j) @ state


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class SqueezingReport:
    zeta: Optional[float] = None
    theta_star: Optional[float] = None
    zeta_tilde: Optional[float] = None
    xi: Optional[float] = None
    xi_prime: Optional[float] = None
    xi_tilde: Optional[float] = None
    mean_spin: Optional[list] = None
    n_perp_star: Optional[list] = None

    def to_dict(self) -> dict:
        return asdict(self)


def squeezing_report(state: StateVector) -> SqueezingReport:
    if isinstance(state.basis, Fock):
        zeta, theta = principal_squeezing(state)
        return SqueezingReport(zeta=zeta, theta_star=theta, zeta_tilde=zeta_tilde(state))
    basis = _require_dicke(state)
    j = basis.j
    mean, g = spin_moments(state)
    m = evenodd_moments(state)
    xi = xi_t = xi_p = n_perp = None
    if abs(m.sm) <= AXIAL_TOL:
        xi, xi_t = xi_from_evenodd(m, j)
    if np.linalg.norm(mean) > DEGENERATE_SPIN:
        xi_k, n_perp = kitagawa_from_moments(mean, g, j)
        if xi is None:
            xi, xi_t = xi_k, j * (xi_k - 1.0)
        xi_p = xi / (np.linalg.norm(mean) / j) ** 2
        n_perp = [float(x) for x in n_perp]
    if xi is None:
        raise DegenerateMeanSpin("mean spin is neither axial nor well defined")
    return SqueezingReport(
        xi=float(xi), xi_tilde=float(xi_t),
        xi_prime=None if xi_p is None else float(xi_p),
        mean_spin=[float(x) for x in mean], n_perp_star=n_perp)
