# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled inner loops; ``_kernels_py`` holds the numpy versions."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def quadratic_form_grid(const double complex[:, ::1] rho, const double complex[::1] z,
                        const double[::1] coef, const double[::1] pref):
    """Re(v^H rho v) with v_n = pref[p] * coef[n] * z[p]**n, for every grid point p.

    rho is taken to be Hermitian.  With r = |z|^2 the form is
    pref^2 * (w_0 + 2 Re sum_k w_k z^k), w_k(r) = sum_m c[m, m+k] r^m, and both
    sums are evaluated by Horner's rule.
    """
    cdef Py_ssize_t n_pts = z.shape[0], d = coef.shape[0]
    cdef Py_ssize_t p, m, k
    cdef double r, zr, zi, wr, wi, hr, hi, tmp, q
    # diagonal-major copy: cre[k, m] + i cim[k, m] = coef_m coef_{m+k} rho[m, m+k]
    cre_a = np.zeros((d, d))
    cim_a = np.zeros((d, d))
    cdef double[:, ::1] cre = cre_a
    cdef double[:, ::1] cim = cim_a
    for k in range(d):
        for m in range(d - k):
            cre[k, m] = coef[m] * coef[m + k] * rho[m, m + k].real
            cim[k, m] = coef[m] * coef[m + k] * rho[m, m + k].imag
    out = np.empty(n_pts, dtype=np.float64)
    cdef double[::1] res = out
    for p in range(n_pts):
        zr = z[p].real
        zi = z[p].imag
        r = zr * zr + zi * zi
        hr = 0.0
        hi = 0.0
        for k in range(d - 1, 0, -1):
            wr = cre[k, d - k - 1]
            wi = cim[k, d - k - 1]
            for m in range(d - k - 2, -1, -1):
                wr = wr * r + cre[k, m]
                wi = wi * r + cim[k, m]
            # h = h * z + w_k
            tmp = hr * zr - hi * zi + wr
            hi = hr * zi + hi * zr + wi
            hr = tmp
        q = cre[0, d - 1]
        for m in range(d - 2, -1, -1):
            q = q * r + cre[0, m]
        # 2 Re(h z)
        q += 2.0 * (hr * zr - hi * zi)
        res[p] = pref[p] * pref[p] * q
    return out


def dicke_moments(const double complex[:, :, ::1] psi, int two_j):
    """Per-time moments of psi[t, k, m] (k atomic, m photonic excitations).

    Columns: norm, <N>, <N^2>, <a^+a>, <parity>, <N + a^+a>, <a>, <a^2>, <S_->, <S_-^2>.
    """
    cdef Py_ssize_t n_t = psi.shape[0], nk = psi.shape[1], nm = psi.shape[2]
    cdef Py_ssize_t t, k, m
    cdef double pr, sgn
    cdef double complex c, a1, a2, s1, s2
    cdef double norm, nat, nat2, nph, par, etot
    out = np.zeros((n_t, 10), dtype=np.complex128)
    cdef double complex[:, ::1] res = out
    sq_m = np.sqrt(np.arange(nm, dtype=np.float64))
    low_k = np.zeros(nk, dtype=np.float64)
    low_k[1:] = np.sqrt(np.arange(1, nk) * (two_j - np.arange(1, nk) + 1.0))
    cdef double[::1] sqm = sq_m
    cdef double[::1] lk = low_k
    for t in range(n_t):
        norm = nat = nat2 = nph = par = etot = 0.0
        a1 = a2 = s1 = s2 = 0.0
        for k in range(nk):
            for m in range(nm):
                c = psi[t, k, m]
                pr = c.real * c.real + c.imag * c.imag
                sgn = 1.0 if (k + m) % 2 == 0 else -1.0
                norm += pr
                nat += k * pr
                nat2 += k * k * pr
                nph += m * pr
                par += sgn * pr
                etot += (k + m) * pr
                if m >= 1:
                    a1 = a1 + (psi[t, k, m - 1].real - 1j * psi[t, k, m - 1].imag) * sqm[m] * c
                if m >= 2:
                    a2 = a2 + (psi[t, k, m - 2].real - 1j * psi[t, k, m - 2].imag) * sqm[m] * sqm[m - 1] * c
                if k >= 1:
                    s1 = s1 + (psi[t, k - 1, m].real - 1j * psi[t, k - 1, m].imag) * lk[k] * c
                if k >= 2:
                    s2 = s2 + (psi[t, k - 2, m].real - 1j * psi[t, k - 2, m].imag) * lk[k] * lk[k - 1] * c
        res[t, 0] = norm
        res[t, 1] = nat
        res[t, 2] = nat2
        res[t, 3] = nph
        res[t, 4] = par
        res[t, 5] = etot
        res[t, 6] = a1
        res[t, 7] = a2
        res[t, 8] = s1
        res[t, 9] = s2
    return out
