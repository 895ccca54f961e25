"""NumPy reference kernels for the per-interface hot loops.

These mirror the compiled kernels in ``_kernels.pyx`` expression by
expression so that both backends produce results that agree to rounding
(bitwise in most cases).  All array arguments are contiguous float64.

1D conventions: cell arrays carry two ghost cells on each side, so a grid
of ``m`` cells arrives as length ``m + 4``; interface ``k`` (k = 0..m)
separates extended cells ``k + 1`` and ``k + 2``.  Interface coefficient
arrays of length ``m + 3`` start at interface -1.

The scheme pairs, at each interface, the upwind cell's own boundary
extrapolation with a second state rebased to the same upwind cell but
carrying the downwind cell's slope.  This one-sided pairing gives the
coefficient jump that the extra upwind (density-viscosity) flux term is
built to compensate; basing both states on their own cells instead makes
that term vanish identically for linear coefficients and changes the
scheme's stability.
"""

from __future__ import annotations

import numpy as np


def adr1d_fluxes(
    qe,
    lame,
    alpha_ife,
    dalpha_ife,
    alpha_cells,
    s_cells,
    s_if,
    dlam_if,
    dt,
    dx,
    eno,
    use_densvisc,
    use_lamlader,
    zero_slopes,
    lam_dt_factor,
):
    """Per-interface fluxes for one step: returns (phi, dif).

    The cell update is ``q - (dt/dx) d(phi) + (dt/dx^2) d(dif) + dt * s``.
    ``zero_slopes`` selects the first-order scheme (no extrapolation, both
    states own-based, cell-value coefficients); ``lam_dt_factor`` scales the
    time advance of the evolved coefficient (1.0 advances a full step).
    """
    qlm = qe[:-3]
    ql = qe[1:-2]
    qr = qe[2:-1]
    qrp = qe[3:]
    llm = lame[:-3]
    ll = lame[1:-2]
    lr = lame[2:-1]
    lrp = lame[3:]

    # shared half-step evolution (advection + diffusion + source)
    evol = (dt / (2.0 * dx)) * (lr * qr - ll * ql)
    evol = evol - (dt / (2.0 * dx * dx)) * (
        alpha_cells[2:-1] * (qrp - qr) - alpha_cells[1:-2] * (ql - qlm)
    )
    evol = evol - (0.5 * dt) * s_if

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
            sl = np.where(np.abs(sl) <= np.abs(sc), sl, sc)
            sr = np.where(np.abs(sr) <= np.abs(sc), sr, sc)
        upw = np.abs(ll) >= np.abs(lr)
        sgn0 = np.sign(np.where(upw, ll, lr))
        base = np.where(sgn0 >= 0.0, ql, qr)
        qbl = base + 0.5 * sl - evol
        qbr = base - 0.5 * sr - evol
        if use_lamlader:
            lbase = np.where(sgn0 >= 0.0, ll, lr)
            ladv = (lam_dt_factor * dt) * dlam_if
            lbl = lbase + 0.5 * (ll - llm) + ladv
            lbr = lbase - 0.5 * (lrp - lr) + ladv
        else:
            lbl = ll
            lbr = lr

    aal = np.abs(lbl)
    aar = np.abs(lbr)
    ars = np.maximum(aal, aar)
    sgn = np.sign(np.where(aal >= aar, lbl, lbr))
    phi = 0.5 * (lbl * qbl + lbr * qbr) - 0.5 * ars * (qbr - qbl)
    if use_densvisc:
        phi = phi - 0.5 * sgn * (0.5 * (qbl + qbr)) * (lbr - lbl)

    # evolved diffusion bracket (vanishes when alpha == 0)
    a_prev = alpha_ife[:-2]
    a_here = alpha_ife[1:-1]
    a_next = alpha_ife[2:]
    inner = (
        (qr - ql)
        + (dt / (2.0 * dx * dx))
        * (a_next * (qrp - qr) - 2.0 * a_here * (qr - ql) + a_prev * (ql - qlm))
        + (0.5 * dt) * (s_cells[2:-1] - s_cells[1:-2])
    )
    dif = (a_here + (0.5 * dt) * dalpha_ife[1:-1]) * inner
    return phi, dif
