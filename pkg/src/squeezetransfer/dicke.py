"""Resonant Dicke dynamics in the interaction picture.

H_I / lambda = (S_+ a + S_- a^+) / sqrt(2j) conserves the total excitation
E = N + a^+ a, so the Hamiltonian splits into blocks spanned by
{|k>_j |E-k>}.  Each block is tridiagonal; it is diagonalized once and the
factorization is reused for every time on the grid.  Times are reported in
units tau = lambda t.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import TruncationTooSmall
from .kernels import dicke_moments
from .qalgebra import Dicke, Fock, OperatorMatrix, StateVector, Tensor
from .qstates import CatParity, cat_state, default_cutoff, lowering_elements
from .squeezing import BosonMoments, EvenOddMoments, xi_from_evenodd, zeta_from_moments

NORM_TOL = 1e-9
TAU0 = np.pi / 2


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("SQUEEZE_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class DickeConfig:
    n_atoms: int
    alpha0: complex = 0.7995
    tau_grid: np.ndarray = field(default_factory=lambda: np.linspace(0.0, np.pi, 201))
    lam: float = 1.0
    n_max: Optional[int] = None
    use_blocks: bool = True

    def __post_init__(self):
        if int(self.n_atoms) != self.n_atoms or self.n_atoms < 1:
            raise ValueError(f"n_atoms must be a positive integer, got {self.n_atoms}")
        tau = np.asarray(self.tau_grid, dtype=float).reshape(-1)
        if tau.size == 0 or np.any(np.diff(tau) < 0):
            raise ValueError("tau_grid must be non-empty and ascending")
        if self.lam <= 0:
            raise ValueError("lam must be positive")
        tau.setflags(write=False)
        object.__setattr__(self, "tau_grid", tau)
        object.__setattr__(self, "alpha0", complex(self.alpha0))
        rule = default_cutoff(abs(self.alpha0)) + int(self.n_atoms)
        if self.n_max is None:
            object.__setattr__(self, "n_max", rule)
        elif self.n_max < default_cutoff(abs(self.alpha0), minimum=1):
            raise TruncationTooSmall(
                f"n_max={self.n_max} is below the tail rule for |alpha0|={abs(self.alpha0):.4g}")

    @property
    def two_j(self) -> int:
        return int(self.n_atoms)

    @property
    def j(self) -> float:
        return self.n_atoms / 2

    @property
    def basis(self) -> Tensor:
        return Tensor(Dicke(self.two_j), Fock(self.n_max))


@dataclass(frozen=True)
class DickeRow:
    tau: float
    zeta_field: float
    xi_atoms: float
    xi_prime_atoms: float  # nan when the mean spin is degenerate
    parity: float
    total_excitation: float
    norm: float
    abs_a: float
    abs_s_minus: float


@dataclass(frozen=True)
class DickeRun:
    config: DickeConfig
    rows: tuple

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])


# ---------------------------------------------------------------------------
# block machinery shared by the Dicke and two-mode problems


@dataclass(frozen=True, eq=False)
class _Block:
    ks: np.ndarray       # left-factor excitations in this block
    ms: np.ndarray       # right-factor excitations (E - k)
    energies: np.ndarray
    vectors: np.ndarray
    coeffs: np.ndarray   # V^H psi0 restricted to the block


def _exchange_blocks(left_raise: np.ndarray, n_left: int, n_right: int, psi0: np.ndarray):
    """Diagonalize H = sum_k r_k (|k+1><k| (x) a + h.c.) block by block.

    ``left_raise[k]`` is <k+1|raise|k> on the left factor; the right factor is a
    boson truncated at ``n_right - 1``.  Only blocks touched by ``psi0`` are kept.
    """
    tasks = []
    for e in range(n_left + n_right - 1):
        ks = np.arange(max(0, e - (n_right - 1)), min(e, n_left - 1) + 1)
        ms = e - ks
        amp = psi0[ks, ms]
        if not np.any(amp):
            continue
        tasks.append((ks, ms, amp))

    def solve(task):
        ks, ms, amp = task
        diag = np.zeros(len(ks))
        off = left_raise[ks[:-1]] * np.sqrt(ms[:-1].astype(float))
        if len(ks) == 1:
            w, v = np.zeros(1), np.ones((1, 1))
        else:
            w, v = eigh_tridiagonal(diag, off)
        return _Block(ks, ms, w, v, v.T @ amp)

    workers = thread_count()
    if workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(solve, tasks))
    return [solve(t) for t in tasks]


def _evolve_blocks(blocks, taus: np.ndarray, shape) -> np.ndarray:
    psi = np.zeros((len(taus),) + shape, dtype=complex)
    for b in blocks:
        phases = np.exp(-1j * np.outer(taus, b.energies))       # (T, d)
        psi[:, b.ks, b.ms] = (phases * b.coeffs[None, :]) @ b.vectors.T
    return psi


def _dense_evolve(h: np.ndarray, psi0: np.ndarray, taus: np.ndarray, shape) -> np.ndarray:
    w, v = np.linalg.eigh(h)
    c = v.conj().T @ psi0.reshape(-1)
    out = (np.exp(-1j * np.outer(taus, w)) * c[None, :]) @ v.T
    return out.reshape((len(taus),) + shape)


# ---------------------------------------------------------------------------
# Dicke model


def dicke_raise_elements(two_j: int) -> np.ndarray:
    """<k+1|S_+|k>_j / sqrt(2j) for k = 0..2j (last entry padded with 0)."""
    out = np.zeros(two_j + 1)
    out[:-1] = lowering_elements(two_j) / np.sqrt(two_j)
    return out


def build_hamiltonian(config: DickeConfig) -> OperatorMatrix:
    """Full H_I on Dicke(j) (x) Fock(n_max); only sensible for small systems."""
    two_j, n_max = config.two_j, config.n_max
    sm = np.diag(lowering_elements(two_j), 1)
    a = np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), 1)
    h = config.lam / np.sqrt(two_j) * (np.kron(sm.T, a) + np.kron(sm, a.T))
    return OperatorMatrix(config.basis, h.astype(complex), hermitian=True)


def initial_state(config: DickeConfig) -> StateVector:
    """|0>_j (x) |alpha0>_+."""
    field_state = cat_state(config.alpha0, CatParity.EVEN, config.n_max)
    psi = np.zeros((config.two_j + 1, config.n_max + 1), dtype=complex)
    psi[0, :] = field_state.amps
    return StateVector(config.basis, psi.reshape(-1))


class DickeEvolver:
    """Factorized propagator for one configuration."""

    def __init__(self, config: DickeConfig):
        self.config = config
        self.shape = (config.two_j + 1, config.n_max + 1)
        self.psi0 = initial_state(config).amps.reshape(self.shape)
        if config.use_blocks:
            self.blocks = _exchange_blocks(dicke_raise_elements(config.two_j),
                                           self.shape[0], self.shape[1], self.psi0)
        else:
            self.h = build_hamiltonian(config).entries / config.lam

    def amplitudes(self, taus) -> np.ndarray:
        """psi[t, k, m] at the given scaled times."""
        taus = np.atleast_1d(np.asarray(taus, dtype=float))
        if self.config.use_blocks:
            return _evolve_blocks(self.blocks, taus, self.shape)
        return _dense_evolve(self.h, self.psi0, taus, self.shape)

    def state(self, tau: float) -> StateVector:
        return StateVector(self.config.basis, self.amplitudes([tau])[0].reshape(-1))

    def run(self) -> DickeRun:
        cfg = self.config
        psi = self.amplitudes(cfg.tau_grid)
        mom = dicke_moments(np.ascontiguousarray(psi), cfg.two_j)
        edge = np.max(np.sum(np.abs(psi[:, :, -1]) ** 2, axis=1))
        if edge > NORM_TOL:
            raise TruncationTooSmall(
                f"weight {edge:.3e} reaches the photon cutoff n_max={cfg.n_max}", leak=edge)
        rows = []
        j = cfg.j
        for tau, m in zip(cfg.tau_grid, mom):
            norm = m[0].real
            leak = abs(norm - 1.0)
            if leak > NORM_TOL:
                raise TruncationTooSmall(f"norm leak {leak:.3e} at tau={tau:.6g}", leak=leak)
            zeta, _ = zeta_from_moments(BosonMoments(m[6], m[7], m[3].real))
            eo = EvenOddMoments(m[1].real, m[2].real, m[9], m[8])
            xi, _ = xi_from_evenodd(eo, j)
            mean_spin = np.array([m[8].real, -m[8].imag, m[1].real - j])
            length = np.linalg.norm(mean_spin)
            xi_p = xi / (length / j) ** 2 if length > 1e-8 else float("nan")
            rows.append(DickeRow(
                tau=float(tau), zeta_field=float(zeta), xi_atoms=float(xi),
                xi_prime_atoms=float(xi_p), parity=float(m[4].real),
                total_excitation=float(m[5].real), norm=float(norm),
                abs_a=float(abs(m[6])), abs_s_minus=float(abs(m[8]))))
        return DickeRun(cfg, tuple(rows))


def evolve(config: DickeConfig) -> DickeRun:
    return DickeEvolver(config).run()


# ---------------------------------------------------------------------------
# two-mode limit


@dataclass(frozen=True)
class SwapRow:
    tau: float
    zeta_a: float
    zeta_b: float
    norm: float


@dataclass(frozen=True)
class SwapRun:
    alpha0: complex
    n_max: int
    rows: tuple

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])


class SwapEvolver:
    """H_eff / lambda = b^+ a + b a^+ with b (left) in vacuum and a (right) in the even cat."""

    def __init__(self, alpha0, n_max: Optional[int] = None):
        alpha0 = complex(alpha0)
        self.n_max = default_cutoff(abs(alpha0)) if n_max is None else int(n_max)
        self.alpha0 = alpha0
        d = self.n_max + 1
        self.shape = (d, d)
        self.psi0 = np.zeros(self.shape, dtype=complex)
        self.psi0[0, :] = cat_state(alpha0, CatParity.EVEN, self.n_max).amps
        raise_b = np.sqrt(np.arange(1, d + 1, dtype=float))
        raise_b[-1] = 0.0
        self.blocks = _exchange_blocks(raise_b, d, d, self.psi0)

    @property
    def basis(self) -> Tensor:
        return Tensor(Fock(self.n_max), Fock(self.n_max))

    def amplitudes(self, taus) -> np.ndarray:
        return _evolve_blocks(self.blocks, np.atleast_1d(np.asarray(taus, float)), self.shape)

    def state(self, tau: float) -> StateVector:
        return StateVector(self.basis, self.amplitudes([tau])[0].reshape(-1))

    def run(self, tau_grid) -> SwapRun:
        taus = np.asarray(tau_grid, dtype=float)
        psi = self.amplitudes(taus)
        # only the right-factor (photon) columns are used; the spin argument is a dummy
        d = self.n_max
        mom_a = dicke_moments(np.ascontiguousarray(psi), d)
        mom_b = dicke_moments(np.ascontiguousarray(psi.transpose(0, 2, 1)), d)
        rows = []
        for tau, ma, mb in zip(taus, mom_a, mom_b):
            norm = ma[0].real
            if abs(norm - 1.0) > NORM_TOL:
                raise TruncationTooSmall(f"norm leak {abs(norm - 1):.3e} at tau={tau:.6g}",
                                         leak=abs(norm - 1))
            za, _ = zeta_from_moments(BosonMoments(ma[6], ma[7], ma[3].real))
            zb, _ = zeta_from_moments(BosonMoments(mb[6], mb[7], mb[3].real))
            rows.append(SwapRow(float(tau), float(za), float(zb), float(norm)))
        return SwapRun(self.alpha0, self.n_max, tuple(rows))


def swap_reference(alpha0, n_max: Optional[int] = None, tau_grid=None) -> SwapRun:
    if tau_grid is None:
        tau_grid = np.linspace(0.0, np.pi, 201)
    return SwapEvolver(alpha0, n_max).run(tau_grid)


# ---------------------------------------------------------------------------
# summary numbers


@dataclass(frozen=True)
class TransferMetrics:
    xi_min: float
    tau_at_min: float
    zeta_dip_depth: float


def _local_extrema(y: np.ndarray, kind: str) -> np.ndarray:
    if kind == "min":
        mask = (y[1:-1] < y[:-2]) & (y[1:-1] <= y[2:])
    else:
        mask = (y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:])
    return np.nonzero(mask)[0] + 1


def zeta_dip_depth(taus: np.ndarray, zeta: np.ndarray, center: float = TAU0,
                   window: float = 0.5) -> float:
    """Depth of the interior local minimum of zeta nearest ``center``.

    Measured against the lower of the nearest local maxima on either side;
    0 when no interior minimum lies within ``window`` of ``center``.
    """
    mins = [i for i in _local_extrema(zeta, "min") if abs(taus[i] - center) <= window]
    if not mins:
        return 0.0
    i = min(mins, key=lambda k: abs(taus[k] - center))
    maxs = _local_extrema(zeta, "max")
    left = [k for k in maxs if k < i]
    right = [k for k in maxs if k > i]
    if not left or not right:
        return 0.0
    return float(max(0.0, min(zeta[left[-1]], zeta[right[0]]) - zeta[i]))


def transfer_metrics(run: DickeRun) -> TransferMetrics:
    taus = run.column("tau")
    xi = run.column("xi_atoms")
    k = int(np.argmin(xi))  # first occurrence -> smallest tau on ties
    return TransferMetrics(float(xi[k]), float(taus[k]),
                           zeta_dip_depth(taus, run.column("zeta_field")))
