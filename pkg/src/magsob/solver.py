"""Linear ground states and L^p-constrained Rayleigh minimization.

``minimize_rayleigh`` minimizes ``Q(psi) / ||psi||_p^2`` by projected
gradient descent on the L^p unit sphere. The gradient is taken in the
metric of the operator itself (each step applies ``H^{-1}`` to the
L^2 gradient), which makes the iteration count independent of the mesh;
steps are accepted by backtracking on the quotient, so the quotient is
nonincreasing along the run. At a converged point the Euler-Lagrange
equation ``H psi = lam |psi|^(p-2) psi`` holds up to ``el_tol``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.ndimage import gaussian_filter

from .fields import FieldSpec, potential_jacobian, eval_potential
from .lattice import (LatticeDomain, LinkPhases, WaveFunction, _apply,
                      build_links, lp_norm, operator_matrix, quadratic_form)

log = logging.getLogger(__name__)

POLICIES = ("linear-ground-state", "gaussian-at-well", "random-seeded")


class InnerSolverError(RuntimeError):
    """Conjugate gradients failed to reduce the residual."""


class _NegativeCurvature(Exception):
    pass


@dataclass(frozen=True)
class SolveOptions:
    max_iter: int = 400
    grad_tol: float = 1e-9       # relative eigen-residual for p = 2
    el_tol: float = 3e-7         # relative Euler-Lagrange residual for p > 2
    init: str = "linear-ground-state"
    starts: tuple = POLICIES     # multi-start policies for p > 2
    armijo: float = 1e-4
    shrink: float = 0.5
    max_backtracks: int = 40
    seed: int = 0
    inner: str = "cg"            # "cg" (matrix-free) or "direct" (sparse LU)
    inner_maxiter: int = 20000
    precond_tol: float = 1e-3
    momentum: bool = True      # Polak-Ribiere+ directions

    def __post_init__(self):
        if not (self.grad_tol > 0 and self.el_tol > 0):
            raise ValueError("tolerances must be > 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.init not in POLICIES:
            raise ValueError(f"unknown init policy {self.init!r}")
        bad = [s for s in self.starts if s not in POLICIES]
        if bad or not self.starts:
            raise ValueError(f"bad start policies {self.starts!r}")
        if self.inner not in ("cg", "direct"):
            raise ValueError(f"unknown inner solver {self.inner!r}")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink must lie in (0, 1)")


@dataclass
class RayleighResult:
    lam: float
    psi: WaveFunction
    el_residual: float
    iterations: int
    converged: bool
    p: float = 2.0
    initial_quotient: float = float("nan")
    history: list = field(default_factory=list, repr=False)
    policy: str = ""
    starts: list = field(default_factory=list)

    @property
    def multistart_spread(self) -> float:
        """Relative spread of lambda over the converged starts."""
        lams = [s["lam"] for s in self.starts if s["converged"]]
        if len(lams) < 2:
            return 0.0
        return (max(lams) - min(lams)) / min(lams)

    def report(self) -> dict:
        return {"lambda": self.lam, "el_residual": self.el_residual,
                "iterations": self.iterations, "converged": self.converged,
                "p": self.p, "policy": self.policy,
                "multistart_spread": self.multistart_spread,
                "starts": self.starts}


# --- inner linear solves -------------------------------------------------

def conjugate_gradient(apply, b, x0=None, tol=1e-10, maxiter=10000,
                       shift=0.0):
    """Solve ``(H - shift) x = b`` for Hermitian positive definite ``H - shift``.

    Raises ``_NegativeCurvature`` when a search direction exposes
    ``<p, (H - shift) p> <= 0``. Returns ``(x, iterations, rel_residual)``.
    """
    bnorm = np.sqrt(np.vdot(b, b).real)
    if bnorm == 0:
        return np.zeros_like(b), 0, 0.0
    if x0 is None:
        x = np.zeros_like(b)
        r = b.copy()
    else:
        x = x0.copy()
        r = b - (apply(x) - shift * x)
    d = r.copy()
    rs = np.vdot(r, r).real
    it = 0
    for it in range(1, maxiter + 1):
        Ad = apply(d) - shift * d
        dAd = np.vdot(d, Ad).real
        if dAd <= 0:
            raise _NegativeCurvature
        a = rs / dAd
        x += a * d
        r -= a * Ad
        rs_new = np.vdot(r, r).real
        if np.sqrt(rs_new) <= tol * bnorm:
            rs = rs_new
            break
        d *= rs_new / rs
        d += r
        rs = rs_new
    return x, it, float(np.sqrt(rs) / bnorm)


class _Inner:
    """Inner solves ``(H - shift) x = b`` on full-grid arrays."""

    def __init__(self, links: LinkPhases, kind: str, maxiter: int):
        self.links = links
        self.kind = kind
        self.maxiter = maxiter
        self.mask = links.domain.mask
        self._lu = {}
        self._mat = None
        self.cg_iterations = 0

    def apply(self, v):
        return _apply(self.links, v)

    def solve(self, b, shift=0.0, tol=1e-8, x0=None):
        if self.kind == "direct":
            if shift not in self._lu:
                if self._mat is None:
                    self._mat = operator_matrix(self.links).tocsc()
                n = self._mat.shape[0]
                self._lu = {shift: spla.splu(
                    (self._mat - shift * sp.identity(n, format="csc")).tocsc())}
            x = np.zeros_like(b)
            x[self.mask] = self._lu[shift].solve(b[self.mask])
            return x
        x, it, res = conjugate_gradient(self.apply, b, x0, tol, self.maxiter,
                                        shift)
        self.cg_iterations += it
        if res > max(1e3 * tol, 1e-2):
            raise InnerSolverError(
                f"CG stagnated: relative residual {res:.3e} after {it} "
                f"iterations (shift={shift:.6g}, tol={tol:.1e})")
        return x


# --- initial guesses -----------------------------------------------------

def _taylor_gauge_phase(spec: FieldSpec, center, X, Y):
    """Real phase ``phi`` with ``A + grad phi`` antisymmetric-linear near center.

    ``phi = -(A(c).X + X^T S X / 2)`` with S the symmetric part of the
    Jacobian of A at c, so that ``A + grad phi = B(c)/2 (-Y, X) + O(|X|^2)``.
    """
    c = np.asarray(center, float)
    a0 = eval_potential(spec, c)
    J = potential_jacobian(spec, c)
    S = 0.5 * (J + J.T)
    DX, DY = X - c[0], Y - c[1]
    quad = S[0, 0] * DX * DX + 2 * S[0, 1] * DX * DY + S[1, 1] * DY * DY
    return -(a0[0] * DX + a0[1] * DY + 0.5 * quad)


def gaussian_guess(links: LinkPhases, center=None, width=None) -> np.ndarray:
    """Gaussian bump at ``center`` dressed with the local Taylor gauge phase."""
    d = links.domain
    spec = links.spec
    X, Y = d.meshgrid()
    if center is None:
        center = (spec.well_point() if spec is not None else
                  np.array([np.mean(d.xlim), np.mean(d.ylim)]))
    if width is None:
        width = (spec.length_scale(links.h) if spec is not None
                 else np.sqrt(links.h))
    width = max(width, 2 * max(d.dx, d.dy))
    r2 = (X - center[0]) ** 2 + (Y - center[1]) ** 2
    v = np.exp(-r2 / (2 * width ** 2)).astype(complex)
    if spec is not None:
        v *= np.exp(1j * _taylor_gauge_phase(spec, center, X, Y) / links.h)
    v[~d.mask] = 0
    if not np.any(np.abs(v) > 1e-300):
        v = d.mask.astype(complex)
    return v


def random_guess(links: LinkPhases, seed: int) -> np.ndarray:
    """Gaussian at a randomly displaced center with a smooth random modulation."""
    rng = np.random.default_rng(seed)
    d = links.domain
    spec = links.spec
    center = (spec.well_point() if spec is not None else
              np.array([np.mean(d.xlim), np.mean(d.ylim)]))
    width = (spec.length_scale(links.h) if spec is not None
             else np.sqrt(links.h))
    center = center + rng.normal(scale=0.5 * width, size=2)
    if not _inside(d, center):
        center = spec.well_point() if spec is not None else center
    v = gaussian_guess(links, center, width * rng.uniform(0.7, 1.4))
    sig = (width / d.dx, width / d.dy)
    noise = (gaussian_filter(rng.normal(size=d.shape), sig)
             + 1j * gaussian_filter(rng.normal(size=d.shape), sig))
    noise /= np.max(np.abs(noise))
    v = v * (1 + 0.3 * noise)
    v[~d.mask] = 0
    return v


def _inside(d, c):
    return d.xlim[0] < c[0] < d.xlim[1] and d.ylim[0] < c[1] < d.ylim[1]


def _normalize_p(v, p, w):
    a = np.abs(v)
    n = (np.sum(a ** p) * w) ** (1.0 / p)
    return v / n


def initial_guess(links, policy, opts: SolveOptions, p=2.0):
    if policy == "linear-ground-state":
        return linear_ground_state(links, opts).psi.values.copy()
    if policy == "gaussian-at-well":
        return gaussian_guess(links)
    return random_guess(links, opts.seed)


# --- linear problem ------------------------------------------------------

def linear_ground_state(links: LinkPhases, opts: SolveOptions | None = None,
                        guess=None) -> RayleighResult:
    """Smallest eigenpair by shifted inverse iteration.

    The shift is ``lam - ||r||`` (Rayleigh quotient minus residual norm),
    which stays below the ground eigenvalue once the iterate is dominated
    by the ground state and yields quadratic convergence. Inner solves are
    matrix-free CG (``opts.inner == "cg"``) or a sparse LU.
    Converged when ``||H psi - lam psi|| <= grad_tol * lam * ||psi||``.
    """
    opts = opts or SolveOptions()
    d = links.domain
    w = d.cell_area
    inner = _Inner(links, opts.inner, opts.inner_maxiter)
    v = gaussian_guess(links) if guess is None else np.array(guess, complex)
    v[~d.mask] = 0
    v /= np.sqrt(np.vdot(v, v).real * w)
    Hv = inner.apply(v)
    lam = np.vdot(v, Hv).real * w
    lam0 = lam
    history = [lam]
    converged = False
    rn = np.inf
    it = 0
    for it in range(1, opts.max_iter + 1):
        r = Hv - lam * v
        rn = np.sqrt(np.vdot(r, r).real * w)
        if rn <= opts.grad_tol * lam:
            converged = True
            break
        shift = lam - rn if it > 3 else 0.0
        tol = float(np.clip(0.1 * rn / lam, 1e-12, 1e-2))
        for _ in range(8):
            try:
                y = inner.solve(v, shift=shift, tol=tol)
                break
            except _NegativeCurvature:
                shift -= 2 * max(rn, 1e-3 * lam)
        else:
            raise InnerSolverError("could not find a shift below the spectrum")
        v = y / np.sqrt(np.vdot(y, y).real * w)
        Hv = inner.apply(v)
        lam = np.vdot(v, Hv).real * w
        history.append(lam)
    psi = WaveFunction(d, v)
    hn = np.sqrt(np.vdot(Hv, Hv).real * w)
    return RayleighResult(
        lam=float(lam), psi=psi, el_residual=float(rn / hn),
        iterations=it, converged=converged, p=2.0, initial_quotient=lam0,
        history=history, policy="inverse-iteration",
        starts=[{"policy": "inverse-iteration", "lam": float(lam),
                 "converged": converged}])


# --- nonlinear problem ---------------------------------------------------

def _descent(links, p, v0, opts, inner, policy):
    d = links.domain
    w = d.cell_area
    mask = d.mask
    v = _normalize_p(v0, p, w)
    Hv = inner.apply(v)
    R = np.vdot(v, Hv).real * w
    R0 = R
    history = [R]
    tau = 1.0
    PG_prev = G_prev = D_prev = None
    gpg_prev = 1.0
    stall = 0
    converged = False
    res = np.inf
    it = 0
    for it in range(1, opts.max_iter + 1):
        a = np.abs(v)
        g = a ** (p - 2) * v
        G = Hv - R * g
        hn = np.sqrt(np.vdot(Hv, Hv).real)
        res = np.sqrt(np.vdot(G, G).real) / hn
        if res <= opts.el_tol:
            converged = True
            break
        PG = inner.solve(G, tol=min(opts.precond_tol, max(res, 1e-10)),
                         x0=PG_prev)
        PG[~mask] = 0
        gpg = np.vdot(G, PG).real
        D = PG
        if opts.momentum and G_prev is not None:
            # Polak-Ribiere+ in the operator metric
            beta = max(0.0, (gpg - np.vdot(G_prev, PG).real) / gpg_prev)
            D = PG + beta * D_prev
        slope = np.vdot(G, D).real * w
        if not slope > 0:
            D = PG
            slope = gpg * w
        if not slope > 0:
            D = G.copy()
            slope = np.vdot(G, D).real * w
        PG_prev, G_prev, gpg_prev, D_prev = PG, G, gpg, D
        def trial(t):
            vt = _normalize_p(v - t * D, p, w)
            Hvt = inner.apply(vt)
            return vt, Hvt, np.vdot(vt, Hvt).real * w

        t = tau
        vt, Hvt, Rt = trial(t)
        # one parabolic refinement of the step from R(0), R'(0) and R(t)
        curv = (Rt - R + 2 * slope * t) / t ** 2
        if curv > 0:
            ts = min(max(slope / curv, 0.1 * t), 10 * t)
            cand = trial(ts)
            if cand[2] < Rt:
                t, (vt, Hvt, Rt) = ts, cand
        accepted = False
        for _ in range(opts.max_backtracks):
            if Rt <= R - opts.armijo * t * 2 * slope or (
                    Rt <= R and 2 * t * slope < 1e-13 * R):
                accepted = True
                break
            t *= opts.shrink
            vt, Hvt, Rt = trial(t)
        if not accepted:
            break
        stall = stall + 1 if Rt >= R else 0
        v, Hv, R = vt, Hvt, Rt
        history.append(R)
        tau = t
        if stall >= 5:
            break   # quotient frozen at rounding level
    return v, Hv, R, res, it, converged, R0, history


def minimize_rayleigh(links: LinkPhases, p: float,
                      opts: SolveOptions | None = None,
                      guesses=None) -> RayleighResult:
    """Optimal constant ``min Q(psi) / ||psi||_p^2`` and a normalized minimizer.

    For p = 2 this dispatches to ``linear_ground_state`` (the result is
    L^2-normalized). For p > 2 every policy in ``opts.starts`` is run
    (``guesses`` may supply extra named starting arrays) and the smallest
    converged quotient is returned; per-start outcomes are kept in
    ``result.starts``. A run that exhausts ``max_iter`` returns its best
    iterate with ``converged = False``.
    """
    opts = opts or SolveOptions()
    if not p >= 2:
        raise ValueError(f"p must be >= 2, got {p}")
    if p == 2:
        return linear_ground_state(links, opts)
    inner = _Inner(links, opts.inner, opts.inner_maxiter)
    starts = [(pol, None) for pol in opts.starts]
    if guesses:
        starts += list(guesses.items())
    lin = None
    runs = []
    for policy, arr in starts:
        if arr is not None:
            v0 = np.array(arr.values if isinstance(arr, WaveFunction) else arr,
                          complex)
        elif policy == "linear-ground-state":
            lin = lin or linear_ground_state(links, replace(opts, grad_tol=1e-6))
            v0 = lin.psi.values.copy()
        else:
            v0 = initial_guess(links, policy, opts, p)
        v0[~links.domain.mask] = 0
        out = _descent(links, p, v0, opts, inner, policy)
        runs.append((policy, out))
        log.debug("start %s: lam=%.12g res=%.2e it=%d", policy, out[2],
                  out[3], out[4])
    info = [{"policy": pol, "lam": float(o[2]), "converged": bool(o[5]),
             "el_residual": float(o[3]), "iterations": int(o[4])}
            for pol, o in runs]
    conv = [r for r in runs if r[1][5]]
    pool = conv if conv else runs
    policy, (v, Hv, R, res, it, ok, R0, hist) = min(pool, key=lambda r: r[1][2])
    return RayleighResult(lam=float(R), psi=WaveFunction(links.domain, v),
                          el_residual=float(res), iterations=int(it),
                          converged=bool(ok), p=float(p),
                          initial_quotient=float(R0), history=hist,
                          policy=policy, starts=info)


def el_residual(links, psi: WaveFunction, lam, p) -> float:
    """``||H psi - lam |psi|^(p-2) psi|| / ||H psi||`` (weighted L^2)."""
    Hv = _apply(links, psi.values)
    g = np.abs(psi.values) ** (p - 2) * psi.values
    r = Hv - lam * g
    return float(np.sqrt(np.vdot(r, r).real / np.vdot(Hv, Hv).real))


# --- model constants -----------------------------------------------------

@dataclass
class ModelReport:
    value: float
    runs: list
    spread: float
    warning: str | None
    result: RayleighResult | None = field(default=None, repr=False)

    def report(self) -> dict:
        return {"lambda": self.value, "spread": self.spread,
                "warning": self.warning, "runs": self.runs,
                "el_residual": self.result.el_residual if self.result else None,
                "iterations": self.result.iterations if self.result else None,
                "converged": self.result.converged if self.result else None}


def model_domain(spec: FieldSpec, truncation, resolution):
    """Square ``[-T, T]^2`` about the well point with ``resolution`` nodes/unit."""
    n = int(round(2 * truncation * resolution)) + 1
    return LatticeDomain.square(truncation, n, center=spec.well_point())


def solve_model(spec: FieldSpec, p, truncation, resolution,
                opts: SolveOptions | None = None, h=1.0) -> tuple:
    """Single truncated-plane solve; returns ``(result, links)``."""
    if not truncation > 0:
        raise ValueError("truncation must be > 0")
    domain = model_domain(spec, truncation, resolution)
    links = build_links(domain, spec, h)
    return minimize_rayleigh(links, p, opts), links


def model_protocol(spec: FieldSpec, p, truncation=6.0, resolution=8,
                   opts=None, spread_limit=0.05) -> ModelReport:
    """Run truncations (T, 1.5T) x resolutions (r, 1.5r).

    The reported value is the run at (1.5T, 1.5r); the spread is the
    relative range over all four runs.
    """
    runs = []
    final = None
    for T in (truncation, 1.5 * truncation):
        for r in (resolution, 1.5 * resolution):
            res, _ = solve_model(spec, p, T, r, opts)
            runs.append({"truncation": T, "resolution": r, "lambda": res.lam,
                         "converged": res.converged,
                         "el_residual": res.el_residual})
            final = res
    lams = np.array([r["lambda"] for r in runs])
    spread = float((lams.max() - lams.min()) / lams.min())
    warning = None
    if spread > spread_limit:
        warning = (f"unconverged truncation: spread {spread:.3%} exceeds "
                   f"{spread_limit:.0%}")
    return ModelReport(final.lam, runs, spread, warning, final)


def model_constant(k: int, p: float, truncation: float = 6.0,
                   resolution: int = 8, strength: float = 1.0,
                   opts=None, protocol: bool = True) -> float:
    """Planar constant ``lambda^[k](p)`` for ``A = strength (0, x^(k+1)/(k+1))``.

    With ``protocol=False`` only the single (T, r) run is made.
    """
    if not p >= 2:
        raise ValueError("p must be >= 2")
    spec = FieldSpec.power(k, strength)
    if protocol:
        return model_protocol(spec, p, truncation, resolution, opts).value
    return solve_model(spec, p, truncation, resolution, opts)[0].lam


def min_param_constant(b, c1, c2, p, truncation=6.0, resolution=8,
                       opts=None, protocol=False) -> float:
    """``mu(b, c1, c2, p)`` for ``A = (-b t + c1 s t + c2 t^2 / 2, 0)``.

    The field ``b - c1 s - c2 t`` vanishes on a line with slope
    ``|c| = hypot(c1, c2)``. Truncation and resolution are given in units
    of the natural length ``|c|^(-1/3)``, and the square is centred on the
    point of the zero line closest to the origin.
    """
    if c2 == 0:
        raise ValueError("c2 must be nonzero")
    if not p >= 2:
        raise ValueError("p must be >= 2")
    spec = FieldSpec.param_model(b, c1, c2)
    ell = float(np.hypot(c1, c2)) ** (-1.0 / 3.0)
    if protocol:
        return model_protocol(spec, p, truncation * ell, resolution / ell,
                              opts).value
    return solve_model(spec, p, truncation * ell, resolution / ell, opts)[0].lam
