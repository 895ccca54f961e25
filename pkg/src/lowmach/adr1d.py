"""1D advection-diffusion-reaction schemes with variable coefficients.

Solves ``dq/dt + d(lambda q)/dx = d(alpha dq/dx)/dx + s(x, t, q)`` on a
uniform grid with a Rusanov-type flux carrying an extra upwind term for the
spatial variation of the advection coefficient, either first order or with
the LADER predictor (boundary extrapolation + half-step evolution of both
the conserved variable and the coefficient).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._backend import kernels
from .errors import DivergenceError
from .tables import ConvergenceTable

Coefficient = Callable[[np.ndarray, float], np.ndarray]


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid of ``m`` cells on [a, b]; centers at a + (j - 1/2) dx."""

    a: float
    b: float
    m: int

    def __post_init__(self):
        if self.m < 1 or not self.b > self.a:
            raise ValueError("need m >= 1 and b > a")

    @property
    def dx(self) -> float:
        return (self.b - self.a) / self.m

    @property
    def centers(self) -> np.ndarray:
        return self.a + (np.arange(self.m) + 0.5) * self.dx

    def extended_centers(self, ghosts: int = 2) -> np.ndarray:
        return self.a + (np.arange(-ghosts, self.m + ghosts) + 0.5) * self.dx

    @property
    def interfaces(self) -> np.ndarray:
        return self.a + np.arange(self.m + 1) * self.dx


@dataclass
class State1D:
    """Cell averages of the conserved scalar at time ``t``."""

    q: np.ndarray
    t: float

    def check_finite(self) -> None:
        bad = np.nonzero(~np.isfinite(self.q))[0]
        if len(bad):
            raise DivergenceError(f"non-finite state in cell {int(bad[0])} at t={self.t}")


@dataclass(frozen=True)
class Coeffs1D:
    """Coefficient closures; time derivatives are supplied analytically."""

    lam: Coefficient
    dlam_dt: Coefficient
    alpha: Optional[Coefficient] = None
    dalpha_dt: Optional[Coefficient] = None
    source: Optional[Callable[[np.ndarray, float, np.ndarray], np.ndarray]] = None


@dataclass(frozen=True)
class Options1D:
    """Scheme options; defaults reproduce the plain LADER configuration.

    ``lambda_advance`` scales the time evolution of the extrapolated
    advection coefficient in units of the full step (1.0 advances the
    coefficient to the new time level, 0.5 to the half step).
    ``zero_slopes`` disables the boundary extrapolation, which turns the
    LADER scheme into the first-order one.
    """

    eno: bool = False
    density_visc: bool = True
    lambda_lader: bool = True
    c_adv: float = 0.5
    c_diff: float = 0.5
    lambda_advance: float = 1.0
    zero_slopes: bool = False


def _sign(x: float) -> float:
    return float(np.sign(x))


def rusanov_alpha_1d(lam_l: float, lam_r: float) -> tuple[float, float]:
    """Rusanov coefficient max(|l|, |r|) and the signed value attaining it.

    Ties resolve to the left value; sign(0) = 0 by convention.
    """
    if abs(lam_l) >= abs(lam_r):
        return abs(lam_l), lam_l
    return abs(lam_r), lam_r


def flux_1d(q_l, q_r, lam_l, lam_r, q_mid=None, variant: str = "classic") -> float:
    """Interface flux; ``density_upwind`` adds the coefficient-jump term."""
    alpha, signed = rusanov_alpha_1d(lam_l, lam_r)
    phi = 0.5 * (lam_l * q_l + lam_r * q_r) - 0.5 * alpha * (q_r - q_l)
    if variant == "classic":
        return phi
    if variant == "density_upwind":
        if q_mid is None:
            raise ValueError("density_upwind needs q_mid")
        return phi - 0.5 * _sign(signed) * q_mid * (lam_r - lam_l)
    raise ValueError(f"unknown flux variant {variant!r}")


def extrapolate_1d(window, mode: str = "fixed"):
    """Boundary extrapolations around cell j from 5 cells (q_{j-2}..q_{j+2}).

    Returns ``(q_{j-1,R}, q_{j,L}, q_{j,R}, q_{j+1,L})``, the one-sided
    values at the two interfaces of cell j.  ``eno`` picks, per side, the
    candidate slope of minimal extrapolation magnitude (ties keep the
    one-sided slope).
    """
    w = np.asarray(window, dtype=float)
    if w.shape != (5,):
        raise ValueError("window must hold 5 consecutive cell values")

    def pick(own, central):
        if mode == "fixed":
            return own
        if mode == "eno":
            return own if abs(own) <= abs(central) else central
        raise ValueError(f"unknown mode {mode!r}")

    c_left = w[2] - w[1]   # slope straddling interface j-1/2
    c_right = w[3] - w[2]  # slope straddling interface j+1/2
    qm1r = w[1] + 0.5 * pick(w[1] - w[0], c_left)
    qjl = w[2] - 0.5 * pick(w[3] - w[2], c_left)
    qjr = w[2] + 0.5 * pick(w[2] - w[1], c_right)
    qp1l = w[3] - 0.5 * pick(w[4] - w[3], c_right)
    return qm1r, qjl, qjr, qp1l


def evolve_q_1d(window, lam, dt, dx, terms: str = "advection_only",
                alpha=None, s_if=None, mode: str = "fixed"):
    """Half-step evolved boundary values around cell j.

    ``window`` and ``lam`` hold 5 cell values (j-2..j+2); ``alpha`` likewise
    when ``terms == 'adr'``, and ``s_if`` the source at the two interface
    abscissae.  Returns the evolved ``(q_{j-1,R}, q_{j,L}, q_{j,R},
    q_{j+1,L})`` exactly as the generalized-Riemann-problem formulas.
    """
    if dt < 0:
        raise ValueError("dt must be non-negative")
    w = np.asarray(window, dtype=float)
    lm = np.asarray(lam, dtype=float)
    qm1r, qjl, qjr, qp1l = extrapolate_1d(w, mode)
    ev_left = (dt / (2.0 * dx)) * (lm[2] * w[2] - lm[1] * w[1])
    ev_right = (dt / (2.0 * dx)) * (lm[3] * w[3] - lm[2] * w[2])
    if terms == "adr":
        al = np.zeros(5) if alpha is None else np.asarray(alpha, dtype=float)
        sl, sr = (0.0, 0.0) if s_if is None else s_if
        ev_left -= (dt / (2.0 * dx * dx)) * (al[2] * (w[3] - w[2]) - al[1] * (w[1] - w[0])) + 0.5 * dt * sl
        ev_right -= (dt / (2.0 * dx * dx)) * (al[3] * (w[4] - w[3]) - al[2] * (w[2] - w[1])) + 0.5 * dt * sr
    elif terms != "advection_only":
        raise ValueError(f"unknown terms {terms!r}")
    return qm1r - ev_left, qjl - ev_left, qjr - ev_right, qp1l - ev_right


def evolve_lambda_1d(lam, dlam_dt_if, dt):
    """Extrapolated + half-step evolved advection coefficient around cell j.

    ``lam`` holds 5 cell values; ``dlam_dt_if`` the analytic time derivative
    at the two interface abscissae (x_{j-1/2}, x_{j+1/2}).
    """
    lm = np.asarray(lam, dtype=float)
    dl, dr = dlam_dt_if
    lm1r = lm[1] + 0.5 * (lm[1] - lm[0]) + 0.5 * dt * dl
    ljl = lm[2] - 0.5 * (lm[3] - lm[2]) + 0.5 * dt * dl
    ljr = lm[2] + 0.5 * (lm[2] - lm[1]) + 0.5 * dt * dr
    lp1l = lm[3] - 0.5 * (lm[4] - lm[3]) + 0.5 * dt * dr
    return lm1r, ljl, ljr, lp1l


def _extended(grid: Grid1D, state: State1D, bc, exact) -> np.ndarray:
    qe = np.empty(grid.m + 4)
    qe[2:-2] = state.q
    if bc == "periodic":
        qe[:2] = state.q[-2:]
        qe[-2:] = state.q[:2]
    elif bc == "exact":
        xg = grid.extended_centers()
        qe[:2] = exact(xg[:2], state.t)
        qe[-2:] = exact(xg[-2:], state.t)
    else:
        raise ValueError(f"unknown bc {bc!r}")
    return qe


def step_1d(state: State1D, grid: Grid1D, coeffs: Coeffs1D, dt: float,
            scheme: str = "lader", options: Options1D = Options1D(),
            bc: str = "exact", exact=None) -> State1D:
    """One conservative update of all cells."""
    state.check_finite()
    k = kernels()
    t = state.t
    xe = grid.extended_centers()
    xc = grid.centers
    x_if = grid.interfaces
    dx = grid.dx

    qe = _extended(grid, state, bc, exact)
    lame = np.ascontiguousarray(coeffs.lam(xe, t), dtype=float)

    def on_interfaces(fn, extended=False):
        xs = np.concatenate(([x_if[0] - dx], x_if, [x_if[-1] + dx])) if extended else x_if
        return np.ascontiguousarray(fn(xs, t), dtype=float)

    if coeffs.alpha is not None:
        alpha_ife = on_interfaces(coeffs.alpha, extended=True)
        dalpha_ife = on_interfaces(coeffs.dalpha_dt, extended=True)
        alpha_cells = np.ascontiguousarray(coeffs.alpha(xe, t), dtype=float)
    else:
        alpha_ife = np.zeros(grid.m + 3)
        dalpha_ife = np.zeros(grid.m + 3)
        alpha_cells = np.zeros(grid.m + 4)
    if coeffs.source is not None:
        s_cells = np.ascontiguousarray(coeffs.source(xe, t, qe), dtype=float)
        q_if = 0.5 * (qe[1:-2] + qe[2:-1])
        s_iface = np.ascontiguousarray(coeffs.source(x_if, t, q_if), dtype=float)
    else:
        s_cells = np.zeros(grid.m + 4)
        s_iface = np.zeros(grid.m + 1)
    dlam_if = on_interfaces(coeffs.dlam_dt)

    if scheme == "order1":
        zero_slopes, lamlader = True, False
    elif scheme == "lader":
        zero_slopes, lamlader = options.zero_slopes, options.lambda_lader
    else:
        raise ValueError(f"unknown scheme {scheme!r}")

    phi, dif = k.adr1d_fluxes(
        qe, lame, alpha_ife, dalpha_ife, alpha_cells, s_cells, s_iface,
        dlam_if, dt, dx, options.eno, options.density_visc, lamlader,
        zero_slopes, options.lambda_advance,
    )
    qn = state.q - (dt / dx) * np.diff(phi) + (dt / (dx * dx)) * np.diff(dif)
    if coeffs.source is not None:
        qn = qn + dt * np.asarray(coeffs.source(xc, t + 0.5 * dt, state.q), dtype=float)

    out = State1D(q=qn, t=t + dt)
    out.check_finite()
    return out


def stable_dt(grid: Grid1D, coeffs: Coeffs1D, t: float, options: Options1D) -> float:
    """CFL time step: advective bound, and a diffusive bound when alpha != 0."""
    lam_max = float(np.max(np.abs(coeffs.lam(grid.centers, t))))
    dt = math.inf if lam_max == 0.0 else options.c_adv * grid.dx / lam_max
    if coeffs.alpha is not None:
        a_max = float(np.max(np.abs(coeffs.alpha(grid.centers, t))))
        if a_max > 0.0:
            dt = min(dt, options.c_diff * grid.dx**2 / (2.0 * a_max))
    if not math.isfinite(dt):
        raise ValueError("both coefficients vanish; no stable time step")
    return dt


def integrate(case, m: int, scheme: str, options: Options1D,
              t_end: Optional[float] = None) -> tuple[Grid1D, State1D]:
    """March a manufactured case on ``m`` cells from t=0 to t_end."""
    t_end = case.t_end if t_end is None else t_end
    grid = Grid1D(case.a, case.b, m)
    state = State1D(q=np.asarray(case.exact(grid.centers, 0.0), dtype=float), t=0.0)
    while state.t < t_end - 1e-14:
        dt = min(stable_dt(grid, case.coeffs, state.t, options), t_end - state.t)
        state = step_1d(state, grid, case.coeffs, dt, scheme, options,
                        bc="exact", exact=case.exact)
    return grid, state


def final_time_errors(grid: Grid1D, state: State1D, exact) -> dict[str, float]:
    """Discrete L1/L2/Linf errors against the exact solution at t_end."""
    e = np.abs(state.q - exact(grid.centers, state.t))
    return {
        "l1": float(grid.dx * e.sum()),
        "l2": float(math.sqrt(grid.dx * (e**2).sum())),
        "linf": float(e.max()),
    }


def oscillation_excess(grid: Grid1D, state: State1D, exact) -> float:
    """How far max|q| overshoots the exact max at t_end (0 when bounded)."""
    x_fine = np.linspace(grid.a, grid.b, 4 * grid.m + 1)
    exact_max = float(np.max(np.abs(exact(x_fine, state.t))))
    return max(0.0, float(np.max(np.abs(state.q))) - exact_max)


def run_convergence_1d(case, scheme: str = "lader", levels=(8, 16, 32, 64, 128, 256, 512),
                       options: Options1D = Options1D(),
                       t_end: Optional[float] = None) -> ConvergenceTable:
    """Errors and observed orders over a refinement sequence."""
    if isinstance(case, str):
        from .cases import manufactured_case

        case = manufactured_case(case)
    levels = list(levels)
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValueError("levels must be strictly increasing")
    table = ConvergenceTable(
        metadata={
            "case": case.name,
            "scheme": scheme,
            "eno": options.eno,
            "density_visc": options.density_visc,
            "lambda_lader": options.lambda_lader,
            "c": options.c_adv,
        }
    )
    for m in levels:
        grid, state = integrate(case, m, scheme, options, t_end)
        errs = final_time_errors(grid, state, case.exact)
        table.add_row(
            level=m,
            h=grid.dx,
            errors=errs,
            extra={"osc_excess": oscillation_excess(grid, state, case.exact)},
        )
    return table
