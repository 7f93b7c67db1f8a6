"""Husimi Q functions of the field and of the atoms on rectangular grids.

Values are raw overlaps <z|rho|z> with the reduced density matrix of the
relevant factor (no 1/pi).  Rows of ``values`` follow the imaginary axis,
columns the real axis.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.special import gammaln

from .errors import AxisMismatch, BasisMismatch
from .kernels import quadratic_form_grid
from .qalgebra import Dicke, Fock, OperatorMatrix, StateVector, Tensor, partial_trace


class Plane(Enum):
    FIELD_ALPHA = "alpha"
    ATOM_ETA = "eta"


@dataclass(frozen=True, eq=False)
class PhaseGrid:
    plane: Plane
    re_axis: np.ndarray
    im_axis: np.ndarray
    values: np.ndarray
    time_tau: float = 0.0
    two_j: Optional[int] = None

    def alpha_axes(self) -> tuple[np.ndarray, np.ndarray]:
        """Axes in field units; eta is scaled by sqrt(2j)."""
        if self.plane is Plane.FIELD_ALPHA:
            return self.re_axis, self.im_axis
        s = np.sqrt(self.two_j)
        return self.re_axis * s, self.im_axis * s

    @property
    def cell_area(self) -> float:
        return float(np.mean(np.diff(self.re_axis)) * np.mean(np.diff(self.im_axis)))

    def integral(self) -> float:
        """(1/pi) * Riemann sum of Q over the grid, ignoring masked points."""
        return float(np.nansum(self.values) * self.cell_area / np.pi)

    def reflected(self) -> "PhaseGrid":
        """Q(-z) on the same axes; axes must be symmetric about zero."""
        for ax in (self.re_axis, self.im_axis):
            if not np.allclose(ax, -ax[::-1], atol=1e-12):
                raise AxisMismatch("reflection needs axes symmetric about zero")
        return PhaseGrid(self.plane, self.re_axis, self.im_axis, self.values[::-1, ::-1],
                         self.time_tau, self.two_j)


def default_field_axes():
    ax = np.linspace(-3.0, 3.0, 121)
    return ax, ax.copy()


def default_atom_axes():
    ax = -1.0 + 2.0 * np.arange(101) / 101  # [-1, 1)
    return ax, ax.copy()


def _reduced(obj, keep: str, kind) -> OperatorMatrix:
    if isinstance(obj.basis, Tensor):
        side = obj.basis.right if keep == "right" else obj.basis.left
        if not isinstance(side, kind):
            raise BasisMismatch(f"{keep} factor is {side}, expected {kind.__name__}")
        return partial_trace(obj, keep)
    if isinstance(obj.basis, kind):
        return obj.density() if isinstance(obj, StateVector) else obj
    raise BasisMismatch(f"expected a Tensor or {kind.__name__} basis, got {obj.basis}")


def _grid_points(re_axis, im_axis) -> np.ndarray:
    re, im = np.meshgrid(np.asarray(re_axis, float), np.asarray(im_axis, float))
    return (re + 1j * im).reshape(-1)


def field_q(state, re_axis=None, im_axis=None, tau: float = 0.0) -> PhaseGrid:
    """Q(alpha) = <alpha|rho_field|alpha>; the field is the right tensor factor."""
    if re_axis is None or im_axis is None:
        re_axis, im_axis = default_field_axes()
    rho = _reduced(state, "right", Fock)
    d = rho.basis.dim
    z = _grid_points(re_axis, im_axis)
    coef = np.exp(-0.5 * gammaln(np.arange(d) + 1.0))
    pref = np.exp(-0.5 * np.abs(z) ** 2)
    vals = quadratic_form_grid(np.ascontiguousarray(rho.entries), np.ascontiguousarray(z),
                               coef, pref)
    return PhaseGrid(Plane.FIELD_ALPHA, np.asarray(re_axis, float), np.asarray(im_axis, float),
                     vals.reshape(len(im_axis), len(re_axis)), float(tau))


def atom_husimi(state, re_axis=None, im_axis=None, tau: float = 0.0,
                mask_outside_unit_disk: bool = True) -> PhaseGrid:
    """Q(eta) = <eta|rho_atoms|eta> with spin-coherent |eta>; atoms are the left factor.

    Points with |eta| >= 1 are stored as NaN unless ``mask_outside_unit_disk`` is off.
    """
    if re_axis is None or im_axis is None:
        re_axis, im_axis = default_atom_axes()
    rho = _reduced(state, "left", Dicke)
    two_j = rho.basis.two_j
    n = np.arange(two_j + 1)
    z = _grid_points(re_axis, im_axis)
    coef = np.exp(0.5 * (gammaln(two_j + 1) - gammaln(n + 1) - gammaln(two_j - n + 1)))
    pref = (1.0 + np.abs(z) ** 2) ** (-two_j / 2)
    vals = quadratic_form_grid(np.ascontiguousarray(rho.entries), np.ascontiguousarray(z),
                               coef, pref)
    if mask_outside_unit_disk:
        vals = np.where(np.abs(z) >= 1.0, np.nan, vals)
    return PhaseGrid(Plane.ATOM_ETA, np.asarray(re_axis, float), np.asarray(im_axis, float),
                     vals.reshape(len(im_axis), len(re_axis)), float(tau), two_j)


def eta_axes_matching(alpha_re, alpha_im, two_j: int):
    """eta axes that map onto the given alpha axes under alpha = sqrt(2j) eta."""
    s = np.sqrt(two_j)
    return np.asarray(alpha_re, float) / s, np.asarray(alpha_im, float) / s


def _rot(values: np.ndarray, k: int) -> np.ndarray:
    # new(x, y) = old(y, -x) per quarter turn; on symmetric square axes this is
    # new[yi, xi] = old[n-1-xi, yi]
    out = values
    for _ in range(k):
        out = out.T[:, ::-1]
    return out


def grid_similarity(a: PhaseGrid, b: PhaseGrid, quarter_turns: int = 0) -> float:
    """Normalized cross-correlation sum(ab)/sqrt(sum(a^2) sum(b^2)) over shared points.

    Eta grids are identified with alpha grids by alpha = sqrt(2j) eta.  With
    ``quarter_turns`` != 0, ``b`` is first rotated by that many +90 degree turns
    in phase space (requires square axes symmetric about zero).
    """
    ar, ai = a.alpha_axes()
    br, bi = b.alpha_axes()
    if ar.shape != br.shape or ai.shape != bi.shape or \
            not (np.allclose(ar, br, atol=1e-9) and np.allclose(ai, bi, atol=1e-9)):
        raise AxisMismatch("grids do not share axes after the eta -> alpha identification")
    bv = b.values
    if quarter_turns % 4:
        if not (np.allclose(br, bi, atol=1e-12) and np.allclose(br, -br[::-1], atol=1e-12)):
            raise AxisMismatch("rotation needs square axes symmetric about zero")
        bv = _rot(bv, quarter_turns % 4)
    av = a.values
    ok = np.isfinite(av) & np.isfinite(bv)
    x, y = av[ok], bv[ok]
    den = np.sqrt(np.sum(x * x) * np.sum(y * y))
    if den == 0:
        return 0.0
    return float(np.clip(np.sum(x * y) / den, 0.0, 1.0))
