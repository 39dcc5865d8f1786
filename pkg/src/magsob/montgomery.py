"""Reduced 1D operators ``D_t^2 + (t^(k+1)/(k+1) - alpha)^2`` and their bands.

For p = 2 a partial Fourier transform in y turns the k-th planar model into
this family; the bottom of the planar spectrum is the minimum over alpha of
the ground band ``nu1(alpha)``.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

DEFAULT_T = 12.0
DEFAULT_N = 2048
SCAN_WINDOW = (-2.0, 6.0)
SCAN_STEP = 0.05


class BandSolverError(RuntimeError):
    """The tridiagonal eigensolver failed to converge."""


class WindowError(RuntimeError):
    """The alpha scan window does not bracket an interior minimum."""


def _grid(half_width, n):
    dt = 2.0 * half_width / (n + 1)
    t = -half_width + dt * np.arange(1, n + 1)
    return t, dt


def band_matrix(k, alpha, half_width=DEFAULT_T, n=DEFAULT_N):
    """Diagonal and off-diagonal of the 3-point Dirichlet discretization."""
    t, dt = _grid(half_width, n)
    pot = (t ** (k + 1) / (k + 1) - alpha) ** 2
    diag = 2.0 / dt ** 2 + pot
    off = np.full(n - 1, -1.0 / dt ** 2)
    return diag, off


def band_value(k: int, alpha: float, half_width: float = DEFAULT_T,
               n: int = DEFAULT_N) -> float:
    """Ground eigenvalue ``nu1(alpha)`` of the truncated Dirichlet problem."""
    if not half_width > 0:
        raise ValueError("half_width must be > 0")
    if n < 64:
        raise ValueError("n must be >= 64")
    if k < 0 or int(k) != k:
        raise ValueError("k must be an integer >= 0")
    diag, off = band_matrix(int(k), alpha, half_width, n)
    try:
        w = eigh_tridiagonal(diag, off, eigvals_only=True,
                             select="i", select_range=(0, 0))
    except LinAlgError as exc:
        raise BandSolverError(
            f"tridiagonal eigensolver failed for k={k}, alpha={alpha}, "
            f"n={n}: {exc}") from exc
    return float(w[0])


def band_ground_state(k, alpha, half_width=DEFAULT_T, n=DEFAULT_N):
    """Grid ``t`` and L^2-normalized ground state of the band operator."""
    diag, off = band_matrix(int(k), alpha, half_width, n)
    w, v = eigh_tridiagonal(diag, off, select="i", select_range=(0, 0))
    t, dt = _grid(half_width, n)
    u = v[:, 0] / np.sqrt(dt)
    return t, u * np.sign(u[np.argmax(np.abs(u))]), float(w[0])


@dataclass
class MontgomeryBand:
    k: int
    alphas: np.ndarray
    nu1: np.ndarray
    alpha0: float
    lambda2: float
    half_width: float = DEFAULT_T
    n: int = DEFAULT_N

    def slope_sign_changes(self) -> int:
        """Number of sign changes of the discrete slope of the sampled band."""
        s = np.sign(np.diff(self.nu1))
        s = s[s != 0]
        return int(np.sum(s[1:] != s[:-1]))

    def summary(self) -> dict:
        return {"k": self.k, "alpha0": self.alpha0, "lambda2": self.lambda2,
                "T": self.half_width, "n": self.n}


def scan_band(k, alphas, half_width=DEFAULT_T, n=DEFAULT_N, threads=1):
    alphas = np.asarray(alphas, dtype=float)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            vals = list(pool.map(
                lambda a: band_value(k, a, half_width, n), alphas))
    else:
        vals = [band_value(k, a, half_width, n) for a in alphas]
    return np.array(vals)


def _golden(f, a, b, tol):
    invphi = (np.sqrt(5.0) - 1) / 2
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def minimize_band(k: int, half_width: float = DEFAULT_T, n: int = DEFAULT_N,
                  window=SCAN_WINDOW, step=SCAN_STEP, alpha_tol=1e-6,
                  threads=1) -> MontgomeryBand:
    """Coarse alpha scan followed by golden-section refinement.

    For k = 0 the band is flat and ``alpha0 = 0`` by convention. A scan
    whose minimum sits on the window edge is widened once (by the window
    length on that side) before ``WindowError`` is raised.
    """
    if k < 0 or int(k) != k:
        raise ValueError("k must be an integer >= 0")
    k = int(k)
    lo, hi = window
    for attempt in range(2):
        alphas = np.arange(lo, hi + 0.5 * step, step)
        nu = scan_band(k, alphas, half_width, n, threads)
        if k == 0:
            return MontgomeryBand(k, alphas, nu, 0.0, float(nu.min()),
                                  half_width, n)
        i = int(np.argmin(nu))
        if 0 < i < len(alphas) - 1:
            break
        width = hi - lo
        if attempt == 0:
            lo, hi = (lo - width, hi) if i == 0 else (lo, hi + width)
    else:
        raise WindowError(
            f"no interior band minimum for k={k} in [{lo}, {hi}]")
    a0, v0 = _golden(lambda a: band_value(k, a, half_width, n),
                     alphas[i - 1], alphas[i + 1], alpha_tol)
    lam = min(v0, float(nu[i]))
    return MontgomeryBand(k, alphas, nu, float(a0), float(lam), half_width, n)
