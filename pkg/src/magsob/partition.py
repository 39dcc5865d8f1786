"""Quadratic partitions of unity with thin overlaps, grid translations, IMS.

Cells are squares of period ``P = 2 h^rho + h^alpha`` centred at
``P l + tau``. The 1D profile equals 1 on ``|x| <= h^rho + h^alpha / 2``
and vanishes on ``|x| >= h^rho + h^alpha``; neighbouring profiles overlap
only on transition layers of width ``h^alpha`` around the midlines
``tau + P/2 + P m``. Because the normalization ``S`` factorizes over the
axes, every normalized cutoff is a product ``eta_m(x1) eta_n(x2)`` of
normalized 1D profiles, which is how everything here is evaluated.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from .fields import ScalarField
from .lattice import (LinkPhases, WaveFunction, DomainMismatchError,
                      quadratic_form)

LP_RECOVERY_C = 3.0
SLACK_TOL = 1e-12


class PartitionError(ValueError):
    """Invalid partition parameters."""


class TranslationBoundError(RuntimeError):
    """No scanned shift meets the thickened-grid mass bound."""


class InvariantViolation(RuntimeError):
    """A recovery slack is negative beyond tolerance."""


# --- 1D profile ----------------------------------------------------------

def smoothstep(t):
    """C^2 quintic ramp: 0 for t <= 0, 1 for t >= 1."""
    t = np.clip(t, 0.0, 1.0)
    return t * t * t * (10 - 15 * t + 6 * t * t)


def smoothstep_deriv(t):
    inside = (t > 0) & (t < 1)
    tc = np.clip(t, 0.0, 1.0)
    return np.where(inside, 30 * tc * tc * (1 - tc) ** 2, 0.0)


def bump(x, inner, outer):
    """Profile equal to 1 on |x| <= inner, 0 on |x| >= outer; with derivative."""
    ax = np.abs(x)
    w = outer - inner
    t = (ax - inner) / w
    val = 1.0 - smoothstep(t)
    der = -smoothstep_deriv(t) / w * np.sign(x)
    return val, der


@dataclass(frozen=True)
class PartitionSpec:
    alpha: float
    rho: float
    h: float
    tau: tuple = (0.0, 0.0)
    extent: tuple = ((-1.0, 1.0), (-1.0, 1.0))

    def __post_init__(self):
        if not self.h > 0:
            raise PartitionError(f"h must be > 0, got {self.h}")
        if not self.rho > 0:
            raise PartitionError(f"rho must be > 0, got {self.rho}")
        if self.alpha < self.rho:
            raise PartitionError(
                f"alpha >= rho is required (got alpha={self.alpha}, "
                f"rho={self.rho})")
        object.__setattr__(self, "tau", tuple(float(t) for t in self.tau))
        object.__setattr__(self, "extent",
                           tuple(tuple(float(v) for v in e) for e in self.extent))

    @property
    def period(self) -> float:
        return 2 * self.h ** self.rho + self.h ** self.alpha

    @property
    def inner(self) -> float:
        return self.h ** self.rho + 0.5 * self.h ** self.alpha

    @property
    def outer(self) -> float:
        return self.h ** self.rho + self.h ** self.alpha

    def axis_indices(self, axis):
        lo, hi = self.extent[axis]
        P, b, t = self.period, self.outer, self.tau[axis]
        m0 = int(np.floor((lo - b - t) / P))
        m1 = int(np.ceil((hi + b - t) / P))
        return [m for m in range(m0, m1 + 1)
                if t + P * m - b < hi and t + P * m + b > lo]

    @property
    def cells(self) -> list:
        return [(m, n) for m in self.axis_indices(0)
                for n in self.axis_indices(1)]

    def center(self, cell) -> np.ndarray:
        return self.period * np.asarray(cell, float) + np.asarray(self.tau)

    def with_tau(self, tau):
        return PartitionSpec(self.alpha, self.rho, self.h, tuple(tau),
                             self.extent)


class Partition:
    """Evaluator of the normalized cutoffs and their gradients."""

    def __init__(self, spec: PartitionSpec):
        self.spec = spec

    # 1D pieces ------------------------------------------------------
    def _raw(self, m, x, axis):
        c = self.spec.period * m + self.spec.tau[axis]
        return bump(np.asarray(x, float) - c, self.spec.inner, self.spec.outer)

    def _norm(self, x, axis):
        """``S1(x) = sum_m chi(x - c_m)^2`` and its derivative."""
        P = self.spec.period
        x = np.asarray(x, float)
        base = np.floor((x - self.spec.tau[axis]) / P).astype(np.int64)
        S = np.zeros_like(x)
        dS = np.zeros_like(x)
        for off in (-1, 0, 1, 2):
            c = P * (base + off) + self.spec.tau[axis]
            v, d = bump(x - c, self.spec.inner, self.spec.outer)
            S += v * v
            dS += 2 * v * d
        return S, dS

    def eta(self, m, x, axis=0):
        """Normalized 1D profile and derivative for index m on an axis."""
        v, d = self._raw(m, x, axis)
        S, dS = self._norm(x, axis)
        rs = np.sqrt(S)
        return v / rs, d / rs - 0.5 * v * dS / (S * rs)

    def eta_power_sum(self, x, q, axis=0):
        """``sum_m eta_m(x)^q`` over all m."""
        P = self.spec.period
        x = np.asarray(x, float)
        base = np.floor((x - self.spec.tau[axis]) / P).astype(np.int64)
        S, _ = self._norm(x, axis)
        tot = np.zeros_like(x)
        for off in (-1, 0, 1, 2):
            c = P * (base + off) + self.spec.tau[axis]
            v, _ = bump(x - c, self.spec.inner, self.spec.outer)
            tot += (v / np.sqrt(S)) ** q
        return tot

    def grad_sum_1d(self, x, axis=0):
        """``G(x) = sum_m eta_m'(x)^2``."""
        P = self.spec.period
        x = np.asarray(x, float)
        base = np.floor((x - self.spec.tau[axis]) / P).astype(np.int64)
        S, dS = self._norm(x, axis)
        rs = np.sqrt(S)
        tot = np.zeros_like(x)
        for off in (-1, 0, 1, 2):
            c = P * (base + off) + self.spec.tau[axis]
            v, d = bump(x - c, self.spec.inner, self.spec.outer)
            tot += (d / rs - 0.5 * v * dS / (S * rs)) ** 2
        return tot

    # 2D ---------------------------------------------------------------
    def cutoff(self, cell, X, Y):
        """``(chi, d1 chi, d2 chi)`` of one cell on arrays of points."""
        ex, dex = self.eta(cell[0], X, 0)
        ey, dey = self.eta(cell[1], Y, 1)
        return ex * ey, dex * ey, ex * dey

    def values_at(self, point) -> dict:
        """All nonzero cutoffs at a point: ``{cell: (chi, grad)}``."""
        x, y = (float(v) for v in point)
        P = self.spec.period
        out = {}
        mx = int(np.floor((x - self.spec.tau[0]) / P))
        my = int(np.floor((y - self.spec.tau[1]) / P))
        for m in range(mx - 1, mx + 3):
            for n in range(my - 1, my + 3):
                c, gx, gy = self.cutoff((m, n), np.array(x), np.array(y))
                if c != 0 or gx != 0 or gy != 0:
                    out[(m, n)] = (float(c), np.array([float(gx), float(gy)]))
        return out

    def sum_squares(self, X, Y):
        return (self.eta_power_sum(X, 2, 0) * self.eta_power_sum(Y, 2, 1))

    def grad_budget(self, X, Y):
        """``sum_l |grad chi_l|^2`` (uses ``sum_m eta_m^2 = 1``)."""
        return self.grad_sum_1d(X, 0) + self.grad_sum_1d(Y, 1)

    @property
    def D(self) -> float:
        return gradient_constant(self.spec.alpha, self.spec.rho)


def build_partition(spec: PartitionSpec) -> Partition:
    return Partition(spec)


@lru_cache(maxsize=None)
def gradient_constant(alpha, rho) -> float:
    """``D = sup sum_l |grad chi_l|^2 * h^(2 alpha)``, measured at h = 1.

    The 2D budget is ``G(x1) + G(x2)`` with G the 1D sum, so D is twice
    the supremum of G over one period. Under ``x -> h^alpha x`` the
    transition layers are rescaled copies of the h = 1 layers, so the
    value does not depend on h.
    """
    part = Partition(PartitionSpec(alpha, rho, 1.0))
    P = part.spec.period
    xs = np.linspace(0, P, 200001)
    g = part.grad_sum_1d(xs)
    i = int(np.argmax(g))
    dx = xs[1] - xs[0]
    res = minimize_scalar(lambda t: -part.grad_sum_1d(np.array(t)),
                          bounds=(xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)]),
                          method="bounded", options={"xatol": dx * 1e-6})
    sup = max(float(g[i]), -float(res.fun))
    return 2.0 * sup


# --- translations ----------------------------------------------------------

def grid_distance(X, Y, r, tau):
    """Euclidean distance to the grid ``(r Z x R) u (R x r Z)`` shifted by tau."""
    dx = np.abs((X - tau[0] + 0.5 * r) % r - 0.5 * r)
    dy = np.abs((Y - tau[1] + 0.5 * r) % r - 0.5 * r)
    return np.minimum(dx, dy)


def translation_fractions(r, delta, f: ScalarField):
    """Thickened-grid mass fraction for every scanned shift ``j delta e``."""
    if not (r > 0 and delta > 0):
        raise ValueError("r and delta must be > 0")
    vals = f.values * f.domain.weights
    if np.any(f.values < 0):
        raise ValueError("density must be nonnegative")
    total = vals.sum()
    if not total > 0:
        raise ValueError("density has no mass")
    X, Y = f.domain.meshgrid()
    e = np.array([1.0, 1.0]) / np.sqrt(2.0)
    js = np.arange(int(np.floor(r / (2 * delta))) + 2)
    fr = np.array([vals[grid_distance(X, Y, r, j * delta * e) <= delta].sum()
                   / total for j in js])
    return js, fr


def translation_bound(r, delta) -> float:
    return 3 * delta / (r + 2 * delta)


def corrected_translation_bound(r, delta) -> float:
    """Bound provable for the scanned shift set (overlap count at most 6)."""
    return 12 * delta / (r + 2 * delta)


def select_translation(r, delta, f: ScalarField, strict: bool = True):
    """Shift ``tau = j delta (1,1)/sqrt 2`` minimizing the thickened-grid mass.

    Ties go to the smallest j. With ``strict`` a minimal fraction above
    ``3 delta / (r + 2 delta)`` raises ``TranslationBoundError``.
    Returns ``(tau, fraction)``.
    """
    js, fr = translation_fractions(r, delta, f)
    k = int(np.argmin(fr))   # first occurrence = smallest j
    tau = js[k] * delta * np.array([1.0, 1.0]) / np.sqrt(2.0)
    bound = translation_bound(r, delta)
    if strict and fr[k] > bound:
        raise TranslationBoundError(
            f"best shift j={js[k]} carries fraction {fr[k]:.6f} > "
            f"3 delta/(r + 2 delta) = {bound:.6f} (r={r}, delta={delta})")
    return tau, float(fr[k])


def adapted_spec(spec: PartitionSpec, psi: WaveFunction, p, strict=False):
    """Partition translated so that |psi|^p puts little mass on the layers.

    The transition layers of the partition are the delta-neighbourhoods
    (delta = h^alpha / 2) of the grid with spacing P through the midlines,
    so a selected grid shift ``s`` maps to ``tau = s - P/2``.
    """
    P = spec.period
    delta = 0.5 * spec.h ** spec.alpha
    dens = ScalarField(psi.domain, np.abs(psi.values) ** p)
    s, frac = select_translation(P, delta, dens, strict=strict)
    return spec.with_tau(tuple(s - 0.5 * P)), frac


# --- L^p recovery and IMS -------------------------------------------------

@dataclass
class RecoveryReport:
    s_low: float
    s_up: float
    c_empirical: float
    total: float
    localized: float

    @property
    def ok(self) -> bool:
        return self.s_low >= -SLACK_TOL and self.s_up >= -SLACK_TOL


def lp_recovery_check(spec: PartitionSpec, psi: WaveFunction, p,
                      raise_on_violation=False) -> RecoveryReport:
    """Slacks of ``sum ||chi psi||_p^p <= ||psi||_p^p <= (1 + C h^(a-r)) sum``.

    ``c_empirical`` is the smallest C for which the right inequality holds.
    """
    if p < 2:
        raise ValueError("p must be >= 2")
    part = Partition(spec)
    X, Y = psi.domain.meshgrid()
    dens = np.abs(psi.values) ** p * psi.domain.weights
    total = float(dens.sum())
    weight = part.eta_power_sum(X, p, 0) * part.eta_power_sum(Y, p, 1)
    loc = float((dens * weight).sum())
    hfac = spec.h ** (spec.alpha - spec.rho)
    s_low = total - loc
    s_up = (1 + LP_RECOVERY_C * hfac) * loc - total
    c_emp = (total / loc - 1) / hfac if loc > 0 else np.inf
    rep = RecoveryReport(s_low, s_up, float(c_emp), total, loc)
    if raise_on_violation and not rep.ok:
        raise InvariantViolation(
            f"negative L^p recovery slack: s_low={s_low:.3e}, s_up={s_up:.3e}")
    return rep


def ims_decompose(spec: PartitionSpec, links: LinkPhases, psi: WaveFunction,
                  partition=None):
    """``(sum_l Q(chi_l psi), h^2 sum_l || |grad chi_l| psi ||^2)``.

    ``partition`` may be a list of cutoff arrays on the grid (overrides spec).
    """
    if links.domain != psi.domain:
        raise DomainMismatchError("links and psi live on different grids")
    d = psi.domain
    X, Y = d.meshgrid()
    w = d.weights
    loc = 0.0
    if partition is not None:
        for chi in partition:
            loc += quadratic_form(links, WaveFunction(d, chi * psi.values))
        return loc, 0.0
    part = Partition(spec)
    for cell in spec.cells:
        chi, _, _ = part.cutoff(cell, X, Y)
        if np.any(chi[d.mask] != 0):
            loc += quadratic_form(links, WaveFunction(d, chi * psi.values))
    pen = links.h ** 2 * float(
        np.sum(w * part.grad_budget(X, Y) * np.abs(psi.values) ** 2))
    return loc, pen
