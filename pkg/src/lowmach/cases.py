"""Manufactured test cases and the source-term residual oracle.

The registry holds the two 3D flows (inviscid and viscous) and the three 1D
coefficient-variation cases.  Every source term coded here was re-derived by
substituting the exact fields into the governing equations; where the
published closed forms disagree with that substitution the corrected form is
used and the published one is kept behind ``printed_source`` so the residual
oracle can demonstrate the difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .adr1d import Coeffs1D
from .errors import SourceConsistencyError

UNIVERSAL_GAS_CONSTANT = 8.314  # J/(mol K)


# ---------------------------------------------------------------------------
# 1D cases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Case1D:
    """A 1D manufactured problem in the solver's standard form
    dq/dt + d(lam q)/dx = d(alpha dq/dx)/dx + s."""

    name: str
    a: float
    b: float
    t_end: float
    coeffs: Coeffs1D
    exact: Callable[[np.ndarray, float], np.ndarray]


def _exact_gauss(x, t):
    return np.exp(-2.0 * (x - t) ** 2 - t)


def _case_a1(printed_source: bool) -> Case1D:
    factor = (lambda x, t: -1.0 + x) if printed_source else (lambda x, t: -1.0 - x)

    def source(x, t, q):
        return 4.0 * (x - t) * factor(x, t) * _exact_gauss(x, t)

    coeffs = Coeffs1D(
        lam=lambda x, t: x + 2.0,
        dlam_dt=lambda x, t: np.zeros_like(np.asarray(x, dtype=float)),
        source=source,
    )
    return Case1D("A1", 0.0, 2.0, 1.0, coeffs, _exact_gauss)


def _case_a2() -> Case1D:
    coeffs = Coeffs1D(
        lam=lambda x, t: x + t * t + 2.0,
        dlam_dt=lambda x, t: np.full_like(np.asarray(x, dtype=float), 2.0 * t),
        source=lambda x, t, q: 4.0 * (x - t) * (-1.0 - x - t * t) * _exact_gauss(x, t),
    )
    return Case1D("A2", 0.0, 2.0, 1.0, coeffs, _exact_gauss)


def _case_a3() -> Case1D:
    # The problem statement carries the diffusion term on the left-hand side
    # with a plus sign; in the solver's standard form that is a negative
    # diffusion coefficient, and the source below is consistent with it.
    def alpha(x, t):
        return -1e-5 * np.exp(x * (t - 1.0) ** 2)

    def dalpha_dt(x, t):
        return -1e-5 * 2.0 * x * (t - 1.0) * np.exp(x * (t - 1.0) ** 2)

    def source(x, t, q):
        g = _exact_gauss(x, t)
        adv = 4.0 * (x - t) * (-1.0 - x - t * t) * g
        e = 1e-5 * np.exp(x * (t - 1.0) ** 2)
        d1 = e * (t - 1.0) ** 2 * (-4.0 * (x - t)) * g
        d2 = e * (16.0 * (x - t) ** 2 - 4.0) * g
        return adv + d1 + d2

    coeffs = Coeffs1D(
        lam=lambda x, t: 2.0 + x + t * t,
        dlam_dt=lambda x, t: np.full_like(np.asarray(x, dtype=float), 2.0 * t),
        alpha=alpha,
        dalpha_dt=dalpha_dt,
        source=source,
    )
    return Case1D("A3", 0.0, 2.0, 1.0, coeffs, _exact_gauss)


# ---------------------------------------------------------------------------
# 3D cases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CaseDefinition:
    """A manufactured 3D flow: exact fields, sources, and physical data."""

    name: str
    box: tuple
    t_end: float
    mu: float
    pi_bar: float
    molar_masses: tuple
    rho: Callable  # rho(x, y, z, t)
    u: Callable  # u(x, y, z, t) -> (..., 3)
    pi: Callable
    theta: Callable
    mass_fractions: Callable  # y(x, y, z, t) -> (..., n_species)
    f_u: Callable  # momentum source -> (..., 3)
    drho_dt: Optional[Callable] = None
    f_rho: Optional[Callable] = None

    def w(self, x, y, z, t):
        """Momentum density rho * u."""
        return self.rho(x, y, z, t)[..., None] * self.u(x, y, z, t)


def _stack(*comps):
    return np.stack([np.broadcast_to(c, np.broadcast_shapes(*map(np.shape, comps))) for c in comps], axis=-1)


def _case_test1(printed_source: bool) -> CaseDefinition:
    def rho(x, y, z, t):
        return np.cos(t) + x + 1.0

    def u(x, y, z, t):
        u1 = (x * np.sin(t) + 1.0) / rho(x, y, z, t)
        return _stack(u1, np.zeros_like(u1), np.zeros_like(u1))

    def f_u(x, y, z, t):
        r = x + np.cos(t) + 1.0
        w1 = x * np.sin(t) + 1.0
        f = x * np.cos(t) - w1**2 / r**2 + 2.0 * np.sin(t) * w1 / r
        zero = np.zeros_like(f)
        # the published table lists this source under the third component,
        # but the exact velocity is purely axial; see the residual oracle
        return _stack(zero, zero, f) if printed_source else _stack(f, zero, zero)

    return CaseDefinition(
        name="test1_euler",
        box=((0.0, 1.0), (0.0, 1.0), (0.0, 1.0)),
        t_end=1.0,
        mu=0.0,
        pi_bar=1e3,
        molar_masses=(UNIVERSAL_GAS_CONSTANT,),  # normalizes R Sum(y/M) to 1
        rho=rho,
        u=u,
        pi=lambda x, y, z, t: np.ones_like(np.asarray(x, dtype=float) + y + z),
        theta=lambda x, y, z, t: 1e3 / rho(x, y, z, t),
        mass_fractions=lambda x, y, z, t: np.ones_like(np.asarray(x, dtype=float) + y + z)[..., None],
        f_u=f_u,
        drho_dt=lambda x, y, z, t: np.full_like(np.asarray(x, dtype=float) + y + z, -np.sin(t)),
        f_rho=None,
    )


def _case_test2(mu: float = 1e-2) -> CaseDefinition:
    pi_ = math.pi

    def rho(x, y, z, t):
        return np.sin(pi_ * y * t) + 2.0

    def u(x, y, z, t):
        return _stack(
            np.cos(pi_ * x * t) ** 2,
            np.exp(-2.0 * pi_ * y * t) + np.zeros_like(np.asarray(x, dtype=float) + z),
            -np.cos(pi_ * x * y * t) + np.zeros_like(np.asarray(z, dtype=float)),
        )

    def pressure(x, y, z, t):
        return np.exp(x * y * z) * np.cos(t)

    def f_u(x, y, z, t):
        s2 = np.sin(pi_ * t * y) + 2.0
        cx = np.cos(pi_ * t * x)
        sx = np.sin(pi_ * t * x)
        cy = np.cos(pi_ * t * y)
        ey = np.exp(-2.0 * pi_ * t * y)
        cxy = np.cos(pi_ * t * x * y)
        sxy = np.sin(pi_ * t * x * y)
        exyz = np.exp(x * y * z) * np.cos(t)
        # viscous contributions re-derived from the stress tensor; the
        # published forms miss 2*pi^2*mu*t^2*cos(2*pi*t*x) here ...
        f1 = (
            pi_ * y * cx**2 * cy
            - 4.0 * pi_ * t * sx * cx**3 * s2
            + (8.0 / 3.0) * pi_**2 * t**2 * mu * np.cos(2.0 * pi_ * t * x)
            + pi_ * t * ey * cx**2 * cy
            + y * z * exyz
            - 2.0 * pi_ * x * sx * cx * s2
            - 2.0 * pi_ * t * ey * cx**2 * s2
        )
        # ... and -4*pi^2*mu*t^2*exp(-2*pi*t*y) here
        f2 = (
            pi_ * t * np.exp(-4.0 * pi_ * t * y) * cy
            + pi_ * y * ey * cy
            - (16.0 / 3.0) * pi_**2 * t**2 * mu * ey
            - 4.0 * pi_ * t * np.exp(-4.0 * pi_ * t * y) * s2
            + x * z * exyz
            - 2.0 * pi_ * y * ey * s2
            - 2.0 * pi_ * t * sx * ey * cx * s2
        )
        f3 = (
            2.0 * pi_ * t * ey * cxy * s2
            - pi_ * y * cxy * cy
            + pi_ * x * y * sxy * s2
            - pi_ * t * ey * cxy * cy
            - pi_**2 * t**2 * x**2 * mu * cxy
            - pi_**2 * t**2 * y**2 * mu * cxy
            + 2.0 * pi_ * t * sx * cxy * cx * s2
            + x * y * exyz
            + pi_ * t * x * ey * sxy * s2
            + pi_ * t * y * sxy * cx**2 * s2
        )
        return _stack(f1, f2, f3)

    def f_rho(x, y, z, t):
        s2 = np.sin(pi_ * t * y) + 2.0
        ey = np.exp(-2.0 * pi_ * t * y)
        cy = np.cos(pi_ * t * y)
        out = (
            pi_ * y * cy
            + pi_ * t * ey * cy
            - 2.0 * pi_ * t * ey * s2
            - pi_ * t * np.sin(2.0 * pi_ * t * x) * s2
        )
        return out + np.zeros_like(np.asarray(z, dtype=float))

    return CaseDefinition(
        name="test2_ns",
        box=((0.0, 1.0), (0.0, 1.0), (0.0, 1.0)),
        t_end=1.0,
        mu=mu,
        pi_bar=1e3,
        molar_masses=(UNIVERSAL_GAS_CONSTANT,),
        rho=rho,
        u=u,
        pi=pressure,
        theta=lambda x, y, z, t: 1e3 / rho(x, y, z, t),
        mass_fractions=lambda x, y, z, t: np.ones_like(np.asarray(x, dtype=float) + y + z)[..., None],
        f_u=f_u,
        drho_dt=lambda x, y, z, t: pi_ * y * np.cos(pi_ * y * t) + np.zeros_like(np.asarray(x, dtype=float) + z),
        f_rho=f_rho,
    )


_ALIASES = {
    "a1": "A1",
    "a2": "A2",
    "a3": "A3",
    "test1": "test1_euler",
    "test1_euler": "test1_euler",
    "test2": "test2_ns",
    "test2_ns": "test2_ns",
}


def manufactured_case(name: str, printed_source: bool = False):
    """Return a fully populated case by name (A1/A2/A3/test1/test2)."""
    key = _ALIASES.get(name.lower() if name.lower().startswith(("a", "t")) else name)
    if key is None:
        raise KeyError(f"unknown case {name!r}")
    if key == "A1":
        return _case_a1(printed_source)
    if key == "A2":
        return _case_a2()
    if key == "A3":
        return _case_a3()
    if key == "test1_euler":
        return _case_test1(printed_source)
    if key == "test2_ns":
        return _case_test2()
    raise KeyError(name)


# ---------------------------------------------------------------------------
# Residual oracle
# ---------------------------------------------------------------------------

_FD_W = (1.0, -8.0, 8.0, -1.0)
_FD_O = (-2.0, -1.0, 1.0, 2.0)


def _fd(fn, h: float):
    """4th-order central derivative of a scalar callable of one variable."""

    def d(s):
        return sum(w * fn(s + o * h) for w, o in zip(_FD_W, _FD_O)) / (12.0 * h)

    return d


def _residual_1d(case: Case1D, x: float, t: float, h: float) -> tuple[float, float]:
    c = case.coeffs
    q = lambda xx, tt: float(case.exact(np.asarray(xx, dtype=float), tt))
    dq_dt = _fd(lambda tt: q(x, tt), h)(t)
    d_lamq = _fd(lambda xx: float(c.lam(np.asarray(xx), t)) * q(xx, t), h)(x)
    if c.alpha is not None:
        def flux(xx):
            return float(c.alpha(np.asarray(xx), t)) * _fd(lambda x2: q(x2, t), h)(xx)

        d_diff = _fd(flux, h)(x)
    else:
        d_diff = 0.0
    s = float(c.source(np.asarray(x), t, np.asarray(q(x, t)))) if c.source else 0.0
    resid = dq_dt + d_lamq - d_diff - s
    scale = max(abs(dq_dt), abs(d_lamq), abs(d_diff), abs(s), 1.0)
    return resid, scale


def _residual_3d(case: CaseDefinition, p, h: float):
    """Momentum and mass residuals at one space-time sample."""
    x0, y0, z0, t0 = p
    mu = case.mu

    def at(pt):
        return np.asarray(pt, dtype=float)

    def w(pt):
        return case.w(*pt)

    def u(pt):
        return case.u(*pt)

    def shift(pt, axis, s):
        q = list(pt)
        q[axis] += s
        return tuple(q)

    def d(fn, pt, axis):
        return sum(
            wgt * np.asarray(fn(shift(pt, axis, o * h))) for wgt, o in zip(_FD_W, _FD_O)
        ) / (12.0 * h)

    pt = (x0, y0, z0, t0)
    dw_dt = d(w, pt, 3)
    div_f = sum(d(lambda q: u(q)[..., i] * w(q), pt, i) for i in range(3))
    grad_pi = np.array([d(lambda q: case.pi(*q), pt, i) for i in range(3)])

    if mu != 0.0:
        def tau(q):
            g = np.array([[d(lambda r: u(r)[..., i], q, j) for j in range(3)] for i in range(3)])
            return mu * (g + g.T) - (2.0 / 3.0) * mu * np.trace(g) * np.eye(3)

        div_tau = np.array(
            [sum(d(lambda q: tau(q)[i, j], pt, j) for j in range(3)) for i in range(3)]
        )
    else:
        div_tau = np.zeros(3)

    f = np.asarray(case.f_u(x0, y0, z0, t0))
    resid_u = dw_dt + div_f + grad_pi - div_tau - f
    scale_u = np.maximum.reduce(
        [np.abs(dw_dt), np.abs(div_f), np.abs(grad_pi), np.abs(div_tau), np.abs(f), np.ones(3)]
    )

    drho_dt = d(lambda q: case.rho(*q), pt, 3)
    div_w = sum(d(lambda q: w(q)[..., i], pt, i) for i in range(3))
    f_rho = float(case.f_rho(x0, y0, z0, t0)) if case.f_rho else 0.0
    resid_rho = drho_dt + div_w - f_rho
    scale_rho = max(abs(drho_dt), abs(div_w), abs(f_rho), 1.0)
    return resid_u, scale_u, resid_rho, scale_rho


def validate_source_terms(case, samples: int = 20, tol: float = 1e-5, seed: int = 0) -> dict:
    """Check the coded sources against the governing equations by finite
    differences at random space-time samples; raise on inconsistency.

    Returns a report with the largest relative residual per equation.
    """
    rng = np.random.default_rng(seed)
    report = {"case": getattr(case, "name", "?"), "samples": samples}

    if isinstance(case, Case1D):
        h = 1e-4 * (case.b - case.a)
        worst = 0.0
        for _ in range(samples):
            x = float(rng.uniform(case.a, case.b))
            t = float(rng.uniform(0.05, case.t_end))
            resid, scale = _residual_1d(case, x, t, h)
            rel = abs(resid) / scale
            if rel > worst:
                worst, where = rel, (x, t)
            if rel > tol:
                raise SourceConsistencyError(
                    f"{case.name}: scalar equation residual {resid:.3e} "
                    f"(relative {rel:.3e}) at x={x:.4f}, t={t:.4f}"
                )
        report["max_rel_residual"] = worst
        return report

    box = np.asarray(case.box)
    h = 1e-4 * float(np.max(box[:, 1] - box[:, 0]))
    worst_u = worst_rho = 0.0
    for _ in range(samples):
        p = tuple(float(rng.uniform(lo, hi)) for lo, hi in box) + (
            float(rng.uniform(0.05, case.t_end)),
        )
        resid_u, scale_u, resid_rho, scale_rho = _residual_3d(case, p, h)
        rel_u = float(np.max(np.abs(resid_u) / scale_u))
        rel_rho = abs(resid_rho) / scale_rho
        worst_u = max(worst_u, rel_u)
        worst_rho = max(worst_rho, rel_rho)
        if rel_u > tol:
            comp = int(np.argmax(np.abs(resid_u) / scale_u))
            raise SourceConsistencyError(
                f"{case.name}: momentum component {comp + 1} residual "
                f"{resid_u[comp]:.3e} (relative {rel_u:.3e}) at {p}"
            )
        if rel_rho > tol:
            raise SourceConsistencyError(
                f"{case.name}: mass equation residual {resid_rho:.3e} "
                f"(relative {rel_rho:.3e}) at {p}"
            )
    report["max_rel_residual_momentum"] = worst_u
    report["max_rel_residual_mass"] = worst_rho
    return report
