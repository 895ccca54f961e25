# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the per-interface hot loops.

Semantics match ``_kernels_py`` expression by expression; see that module
for the array conventions and the scheme notes.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef extern from "math.h":
    double fabs(double) nogil


cdef inline double _sign(double x) nogil:
    if x > 0.0:
        return 1.0
    elif x < 0.0:
        return -1.0
    return 0.0


def adr1d_fluxes(double[::1] qe, double[::1] lame,
                 double[::1] alpha_ife, double[::1] dalpha_ife,
                 double[::1] alpha_cells, double[::1] s_cells,
                 double[::1] s_if, double[::1] dlam_if,
                 double dt, double dx,
                 bint eno, bint use_densvisc, bint use_lamlader,
                 bint zero_slopes, double lam_dt_factor):
    cdef Py_ssize_t m1 = qe.shape[0] - 3
    phi_arr = np.empty(m1)
    dif_arr = np.empty(m1)
    cdef double[::1] phi = phi_arr
    cdef double[::1] dif = dif_arr
    cdef Py_ssize_t k, L, R
    cdef double qlm, ql, qr, qrp, llm, ll, lr, lrp
    cdef double evol, sl, sr, sc, sgn0, base, lbase, ladv
    cdef double qbl, qbr, lbl, lbr, aal, aar, ars, sgn, p, inner
    for k in range(m1):
        L = k + 1
        R = k + 2
        qlm = qe[L - 1]
        ql = qe[L]
        qr = qe[R]
        qrp = qe[R + 1]
        llm = lame[L - 1]
        ll = lame[L]
        lr = lame[R]
        lrp = lame[R + 1]

        evol = (dt / (2.0 * dx)) * (lr * qr - ll * ql)
        evol = evol - (dt / (2.0 * dx * dx)) * (
            alpha_cells[R] * (qrp - qr) - alpha_cells[L] * (ql - qlm)
        )
        evol = evol - (0.5 * dt) * s_if[k]

        if zero_slopes:
            qbl = ql - evol
            qbr = qr - evol
            lbl = ll
            lbr = lr
        else:
            sl = ql - qlm
            sr = qrp - qr
            sc = qr - ql
            if eno:
                if fabs(sl) > fabs(sc):
                    sl = sc
                if fabs(sr) > fabs(sc):
                    sr = sc
            if fabs(ll) >= fabs(lr):
                sgn0 = _sign(ll)
            else:
                sgn0 = _sign(lr)
            base = ql if sgn0 >= 0.0 else qr
            qbl = base + 0.5 * sl - evol
            qbr = base - 0.5 * sr - evol
            if use_lamlader:
                lbase = ll if sgn0 >= 0.0 else lr
                ladv = (lam_dt_factor * dt) * dlam_if[k]
                lbl = lbase + 0.5 * (ll - llm) + ladv
                lbr = lbase - 0.5 * (lrp - lr) + ladv
            else:
                lbl = ll
                lbr = lr

        aal = fabs(lbl)
        aar = fabs(lbr)
        if aal >= aar:
            ars = aal
            sgn = _sign(lbl)
        else:
            ars = aar
            sgn = _sign(lbr)
        p = 0.5 * (lbl * qbl + lbr * qbr) - 0.5 * ars * (qbr - qbl)
        if use_densvisc:
            p = p - 0.5 * sgn * (0.5 * (qbl + qbr)) * (lbr - lbl)
        phi[k] = p

        inner = (
            (qr - ql)
            + (dt / (2.0 * dx * dx))
            * (alpha_ife[k + 2] * (qrp - qr) - 2.0 * alpha_ife[k + 1] * (qr - ql)
               + alpha_ife[k] * (ql - qlm))
            + (0.5 * dt) * (s_cells[R] - s_cells[L])
        )
        dif[k] = (alpha_ife[k + 1] + (0.5 * dt) * dalpha_ife[k + 1]) * inner
    return phi_arr, dif_arr
