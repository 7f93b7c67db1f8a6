"""Numpy implementations of the compiled kernels (same signatures)."""

import numpy as np


def quadratic_form_grid(rho, z, coef, pref):
    z = np.asarray(z, dtype=complex)
    n = np.arange(len(coef))
    v = pref[:, None] * coef[None, :] * z[:, None] ** n[None, :]
    return np.real(np.einsum("pm,pm->p", v.conj(), v @ np.asarray(rho).T))


def dicke_moments(psi, two_j):
    psi = np.asarray(psi)
    _, nk, nm = psi.shape
    k = np.arange(nk)[:, None]
    m = np.arange(nm)[None, :]
    p = np.abs(psi) ** 2
    sgn = np.where((k + m) % 2 == 0, 1.0, -1.0)
    sq = np.sqrt(np.arange(nm, dtype=float))
    low = np.zeros(nk)
    low[1:] = np.sqrt(np.arange(1, nk) * (two_j - np.arange(1, nk) + 1.0))
    out = np.zeros((psi.shape[0], 10), dtype=complex)
    out[:, 0] = p.sum(axis=(1, 2))
    out[:, 1] = (p * k).sum(axis=(1, 2))
    out[:, 2] = (p * k ** 2).sum(axis=(1, 2))
    out[:, 3] = (p * m).sum(axis=(1, 2))
    out[:, 4] = (p * sgn).sum(axis=(1, 2))
    out[:, 5] = (p * (k + m)).sum(axis=(1, 2))
    out[:, 6] = np.einsum("tkm,tkm->t", psi[:, :, :-1].conj(), sq[1:] * psi[:, :, 1:])
    out[:, 7] = np.einsum("tkm,tkm->t", psi[:, :, :-2].conj(), (sq[1:-1] * sq[2:]) * psi[:, :, 2:])
    out[:, 8] = np.einsum("tkm,tkm->t", psi[:, :-1, :].conj(), low[1:, None] * psi[:, 1:, :])
    out[:, 9] = np.einsum("tkm,tkm->t", psi[:, :-2, :].conj(),
                          (low[1:-1] * low[2:])[:, None] * psi[:, 2:, :])
    return out
