"""Closed forms for cat-state squeezing and the large-j contraction limit."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import EtaOutOfRange
from .qstates import CatParity, SpinCoherentParam, spin_cat_state
from .squeezing import evenodd_moments, spin_squeezing_evenodd, xi_from_evenodd


@dataclass(frozen=True)
class FactorialMoments:
    F1: float
    F2: float


@dataclass(frozen=True)
class LimitSequencePoint:
    j: float
    eta_abs: float
    xi: float
    xi_prime: float
    zeta_target: float
    gap: float
    F1: float
    F2: float
    mean_excitation_fraction: float


def zeta_cat_closed(alpha_abs2: float, parity) -> float:
    """Principal squeezing of the even (tanh) or odd (coth) bosonic cat state."""
    parity = CatParity.parse(parity)
    x = float(alpha_abs2)
    if parity is CatParity.EVEN:
        return 1.0 + 2.0 * x * (np.tanh(x) - 1.0)
    if x <= 0:
        raise ValueError("odd cat requires |alpha|^2 > 0")
    return 1.0 + 2.0 * x * (1.0 / np.tanh(x) - 1.0)


def minimize_zeta_even(bracket=(0.1, 2.0), tol=1e-6) -> tuple[float, float]:
    """Amplitude alpha of maximal even-cat squeezing, and the squeezing there."""
    lo, hi = bracket
    if not 0 < lo < hi < 3:
        raise ValueError("bracket must lie within (0, 3)")
    f = lambda a: zeta_cat_closed(a * a, CatParity.EVEN)  # noqa: E731
    # coarse grid first so the golden-section bracket stays inside (lo, hi)
    grid = np.linspace(lo, hi, 65)
    k = int(np.clip(np.argmin([f(a) for a in grid]), 1, len(grid) - 2))
    res = minimize_scalar(f, bracket=(grid[k - 1], grid[k], grid[k + 1]),
                          method="golden", options={"xtol": tol})
    return float(res.x), float(res.fun)


def _prefactors(param: SpinCoherentParam):
    two_j = param.two_j
    e2 = abs(param.eta) ** 2
    return two_j * e2 / (1 + e2), two_j * (two_j - 1) * e2 * e2 / (1 + e2) ** 2


def factorial_moments_cat(param: SpinCoherentParam, parity) -> FactorialMoments:
    """F1 = <N>, F2 = <N(N-1)> of the even/odd spin cat state, in closed form."""
    s = CatParity.parse(parity).sign
    g, two_j = param.gamma, param.two_j
    p1, p2 = _prefactors(param)
    denom = 1 + s * g ** two_j
    f1 = p1 * (1 - s * g ** (two_j - 1)) / denom
    f2 = p2 * (1 + s * g ** (two_j - 2)) / denom if two_j >= 2 else 0.0
    return FactorialMoments(float(f1), float(f2))


def factorial_bounds(param: SpinCoherentParam) -> tuple[float, float]:
    """Coherent-state values 2j|eta|^2/(1+|eta|^2) and 2j(2j-1)|eta|^4/(1+|eta|^2)^2."""
    return _prefactors(param)


def xi_tilde_linear(param: SpinCoherentParam, parity) -> float:
    """xi_tilde as the linear combination of F1 and F2."""
    fm = factorial_moments_cat(param, parity)
    two_j = param.two_j
    e2 = abs(param.eta) ** 2
    return float((two_j - 1 + (2 * two_j - 2) * e2) * fm.F1
                 - (1 + e2) * fm.F2 - two_j * (two_j - 1) * e2)


def xi_tilde_cat(param: SpinCoherentParam, parity) -> float:
    """xi_tilde with the coherent-state part cancelled analytically.

    Only the overlap terms survive, so the result is proportional to
    gamma^(2j-2) and keeps its sign even when it is far below 1e-16.
    """
    s = CatParity.parse(parity).sign
    n, g = param.two_j, param.gamma
    if n < 2:
        return 0.0
    x = abs(param.eta) ** 2
    bracket = ((1 + 2 * x) * g + x) / (1 + x) + g * g
    return float(-s * n * (n - 1) * x * g ** (n - 2) * bracket / (1 + s * g ** n))


def xi_cat_closed(param: SpinCoherentParam, parity) -> float:
    return 1.0 + xi_tilde_cat(param, parity) / param.j


def check_eta(alpha_abs2: float, j: float) -> float:
    eta = np.sqrt(alpha_abs2 / (2 * j))
    if not 0 < eta < 1:
        raise EtaOutOfRange(f"eta = sqrt(|alpha|^2/2j) = {eta:.4g} is outside (0, 1) at j={j}")
    return float(eta)


def contraction_point(alpha_abs2: float, j: float, parity=CatParity.EVEN) -> LimitSequencePoint:
    parity = CatParity.parse(parity)
    eta = check_eta(alpha_abs2, j)
    param = SpinCoherentParam.from_j(eta, j)
    state = spin_cat_state(param, parity)
    m = evenodd_moments(state)
    xi, _ = xi_from_evenodd(m, param.j)
    sz = m.N1 - param.j
    xi_p = xi / (sz / param.j) ** 2
    target = zeta_cat_closed(alpha_abs2, parity)
    return LimitSequencePoint(
        j=param.j, eta_abs=eta, xi=float(xi), xi_prime=float(xi_p), zeta_target=target,
        gap=abs(float(xi) - target), F1=m.N1, F2=m.N2 - m.N1,
        mean_excitation_fraction=m.N1 / param.two_j)


def contraction_limit_scan(alpha_abs2: float, j_list, parity=CatParity.EVEN):
    """Spin-cat squeezing along j -> infinity with 2j|eta|^2 = |alpha|^2 held fixed."""
    for j in j_list:
        check_eta(alpha_abs2, j)
    return [contraction_point(alpha_abs2, j, parity) for j in j_list]


def fit_gap_rate(points) -> tuple[float, float, float]:
    """Log-log least squares of gap vs j: returns (slope, intercept, r_squared)."""
    x = np.log([p.j for p in points])
    y = np.log([p.gap for p in points])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    r2 = 1 - np.sum(resid ** 2) / np.sum((y - y.mean()) ** 2)
    return float(slope), float(intercept), float(r2)


@dataclass(frozen=True)
class Prop1Row:
    j: float
    eta: float
    parity: CatParity
    xi: float
    xi_tilde: float
    F1: float
    F2: float
    F1_direct: float
    F2_direct: float
    xi_direct: float = float("nan")  # from the state vector; rounds to 1 once |xi_tilde|/j < eps


def prop1_point(j: float, eta: float, parity) -> Prop1Row:
    parity = CatParity.parse(parity)
    param = SpinCoherentParam.from_j(eta, j)
    state = spin_cat_state(param, parity)
    xi_direct, _ = spin_squeezing_evenodd(state)
    fm = factorial_moments_cat(param, parity)
    m = evenodd_moments(state)
    xi_t = xi_tilde_cat(param, parity)
    return Prop1Row(param.j, float(eta), parity, 1.0 + xi_t / param.j, xi_t, fm.F1, fm.F2,
                    m.N1, m.N2 - m.N1, float(xi_direct))


def prop1_grid(j_max: float = 25.0, eta_step: float = 0.05, j_min: float = 1.0):
    j_values = np.arange(round(2 * j_min), round(2 * j_max) + 1) / 2
    n_eta = int(round(1.0 / eta_step))
    etas = [round(k * eta_step, 12) for k in range(1, n_eta)]
    return [float(j) for j in j_values], etas


def prop1_scan(j_max: float = 25.0, eta_step: float = 0.05, j_min: float = 1.0):
    """Evaluate both cat parities on the (j, eta) grid, j ascending then eta."""
    j_values, etas = prop1_grid(j_max, eta_step, j_min)
    rows = []
    for j in j_values:
        for eta in etas:
            for parity in (CatParity.EVEN, CatParity.ODD):
                rows.append(prop1_point(j, eta, parity))
    return rows
