"""Gauge-covariant lattice discretization of the Dirichlet magnetic form.

The form ``Q(psi) = int |(-i h grad + A) psi|^2`` is discretized with
Peierls link phases ``U = exp(-(i/h) int_edge A.dl)`` on the edges of a
uniform node grid:

    Q(psi) = h^2 sum_edges w |psi_head - U psi_tail|^2 / d_e^2

with ``w = dx dy`` the node area weight. Nodes outside the mask carry
``psi = 0`` (Dirichlet). Arrays are indexed ``[i, j]`` with ``x_i`` along
the first axis; "row-major interior order" means C order of ``values[mask]``.
"""
from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .fields import FieldSpec, eval_potential

# 4-point Gauss-Legendre on [0, 1]; exact for polynomials of degree <= 7.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(4)
_GL_NODES = 0.5 * (_GL_NODES + 1.0)
_GL_WEIGHTS = 0.5 * _GL_WEIGHTS


class DomainMismatchError(ValueError):
    pass


class LatticeDomain:
    """Uniform node grid on a bounding box with a Dirichlet interior mask."""

    def __init__(self, xlim, ylim, nx, ny, mask=None, kind="rectangle"):
        x0, x1 = map(float, xlim)
        y0, y1 = map(float, ylim)
        if nx < 3 or ny < 3:
            raise ValueError("need at least 3 nodes per axis")
        if not (x1 > x0 and y1 > y0):
            raise ValueError("empty bounding box")
        self.xlim = (x0, x1)
        self.ylim = (y0, y1)
        self.nx, self.ny = int(nx), int(ny)
        self.dx = (x1 - x0) / (self.nx - 1)
        self.dy = (y1 - y0) / (self.ny - 1)
        self.x = np.linspace(x0, x1, self.nx)
        self.y = np.linspace(y0, y1, self.ny)
        if mask is None:
            mask = np.zeros((self.nx, self.ny), dtype=bool)
            mask[1:-1, 1:-1] = True
        mask = np.array(mask, dtype=bool)
        if mask.shape != (self.nx, self.ny):
            raise ValueError("mask shape does not match the grid")
        # outer ring is always exterior so every masked node has 4 neighbours
        mask[0, :] = mask[-1, :] = False
        mask[:, 0] = mask[:, -1] = False
        if not mask.any():
            raise ValueError("mask has no interior nodes")
        mask.setflags(write=False)
        self.mask = mask
        self.kind = kind
        self.cell_area = self.dx * self.dy
        self.weights = np.where(mask, self.cell_area, 0.0)
        self._hash = None

    @classmethod
    def rectangle(cls, xlim, ylim, nx, ny=None):
        """Rectangle Omega; the boundary nodes carry the Dirichlet condition."""
        return cls(xlim, ylim, nx, nx if ny is None else ny)

    @classmethod
    def square(cls, half_width, n, center=(0.0, 0.0)):
        cx, cy = center
        T = float(half_width)
        return cls.rectangle((cx - T, cx + T), (cy - T, cy + T), n)

    @classmethod
    def disk(cls, center, radius, n):
        """Disk Omega as a staircase mask of nodes strictly inside."""
        cx, cy = map(float, center)
        xlim = (cx - radius, cx + radius)
        ylim = (cy - radius, cy + radius)
        x = np.linspace(*xlim, n)
        y = np.linspace(*ylim, n)
        X, Y = np.meshgrid(x, y, indexing="ij")
        mask = (X - cx) ** 2 + (Y - cy) ** 2 < radius ** 2
        return cls(xlim, ylim, n, n, mask=mask, kind="disk")

    def resample(self, spacing):
        """Same geometry with node spacing at most ``spacing``."""
        (x0, x1), (y0, y1) = self.xlim, self.ylim
        nx = int(np.ceil((x1 - x0) / spacing)) + 1
        if self.kind == "disk":
            return LatticeDomain.disk(((x0 + x1) / 2, (y0 + y1) / 2),
                                      (x1 - x0) / 2, nx)
        ny = int(np.ceil((y1 - y0) / spacing)) + 1
        return LatticeDomain.rectangle(self.xlim, self.ylim, nx, ny)

    def boundary_distance(self, point) -> float:
        """Distance from a point to the boundary of the continuum domain."""
        x, y = (float(v) for v in point)
        (x0, x1), (y0, y1) = self.xlim, self.ylim
        if self.kind == "disk":
            c = ((x0 + x1) / 2, (y0 + y1) / 2)
            return (x1 - x0) / 2 - float(np.hypot(x - c[0], y - c[1]))
        return min(x - x0, x1 - x, y - y0, y1 - y)

    @property
    def shape(self):
        return (self.nx, self.ny)

    @property
    def n_interior(self):
        return int(self.mask.sum())

    def meshgrid(self):
        return np.meshgrid(self.x, self.y, indexing="ij")

    def interior_points(self):
        X, Y = self.meshgrid()
        return X[self.mask], Y[self.mask]

    def mask_hash(self) -> int:
        """64-bit fingerprint of the mask (first 8 bytes of SHA-256)."""
        if self._hash is None:
            digest = hashlib.sha256(
                struct.pack("<qq", self.nx, self.ny)
                + np.packbits(self.mask, axis=None).tobytes()).digest()
            self._hash = int.from_bytes(digest[:8], "little")
        return self._hash

    def _key(self):
        return (self.xlim, self.ylim, self.nx, self.ny, self.mask_hash())

    def __eq__(self, other):
        if not isinstance(other, LatticeDomain):
            return NotImplemented
        return self is other or self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (f"LatticeDomain({self.kind}, x={self.xlim}, y={self.ylim}, "
                f"n=({self.nx}, {self.ny}), interior={self.n_interior})")


def _check_same(a, b):
    if a is not b and a != b:
        raise DomainMismatchError("objects live on different lattice domains")


class WaveFunction:
    """Complex grid function, identically zero outside the mask."""

    def __init__(self, domain: LatticeDomain, values):
        values = np.array(values, dtype=complex)
        if values.shape != domain.shape:
            raise ValueError(
                f"values shape {values.shape} != grid shape {domain.shape}")
        values[~domain.mask] = 0.0
        if not np.all(np.isfinite(values)):
            raise ValueError("wave function has non-finite values")
        self.domain = domain
        self.values = values

    @classmethod
    def zeros(cls, domain):
        return cls(domain, np.zeros(domain.shape, complex))

    @classmethod
    def from_function(cls, domain, fn):
        X, Y = domain.meshgrid()
        return cls(domain, fn(X, Y))

    @classmethod
    def from_interior(cls, domain, vec):
        values = np.zeros(domain.shape, complex)
        values[domain.mask] = vec
        return cls(domain, values)

    def interior(self) -> np.ndarray:
        return self.values[self.domain.mask]

    def copy(self):
        return WaveFunction(self.domain, self.values.copy())

    def __mul__(self, c):
        return WaveFunction(self.domain, self.values * c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return WaveFunction(self.domain, self.values / c)

    def __add__(self, other):
        _check_same(self.domain, other.domain)
        return WaveFunction(self.domain, self.values + other.values)

    def __sub__(self, other):
        _check_same(self.domain, other.domain)
        return WaveFunction(self.domain, self.values - other.values)

    def abs(self):
        return WaveFunction(self.domain, np.abs(self.values))


def inner(a: WaveFunction, b: WaveFunction) -> complex:
    """Weighted L^2 inner product, antilinear in the first slot."""
    _check_same(a.domain, b.domain)
    return complex(np.vdot(a.values, b.values) * a.domain.cell_area)


def l2_norm(psi: WaveFunction) -> float:
    return lp_norm(psi, 2.0)


def lp_norm(psi: WaveFunction, p: float) -> float:
    """``(sum_i w_i |psi_i|^p)^(1/p)`` over the interior nodes."""
    if not p >= 1:
        raise ValueError(f"lp_norm needs p >= 1, got {p}")
    a = np.abs(psi.values)
    if p == 2:
        s = np.sum(a * a)
    else:
        s = np.sum(a ** p)
    return float((s * psi.domain.cell_area) ** (1.0 / p))


@dataclass
class LinkPhases:
    """Unit-modulus factors on horizontal (``ux``) and vertical (``uy``) edges.

    ``ux[i, j]`` sits on the edge from node ``(i, j)`` to ``(i+1, j)``,
    ``uy[i, j]`` on the edge from ``(i, j)`` to ``(i, j+1)``.
    """

    domain: LatticeDomain
    h: float
    ux: np.ndarray
    uy: np.ndarray
    spec: FieldSpec | None = None

    def conj(self):
        """Links of the conjugate problem (field ``-B``)."""
        return LinkPhases(self.domain, self.h, self.ux.conj(), self.uy.conj())


def _edge_integrals(domain, spec):
    x, y = domain.x, domain.y
    dx, dy = domain.dx, domain.dy
    # horizontal edges: integrate A1 along x
    ix = np.zeros((domain.nx - 1, domain.ny))
    Yh = np.broadcast_to(y, (domain.nx - 1, domain.ny))
    for s, w in zip(_GL_NODES, _GL_WEIGHTS):
        Xs = np.broadcast_to((x[:-1] + s * dx)[:, None], Yh.shape)
        ix += w * eval_potential(spec, (Xs, Yh))[0]
    ix *= dx
    iy = np.zeros((domain.nx, domain.ny - 1))
    Xv = np.broadcast_to(x[:, None], (domain.nx, domain.ny - 1))
    for s, w in zip(_GL_NODES, _GL_WEIGHTS):
        Ys = np.broadcast_to(y[:-1] + s * dy, Xv.shape)
        iy += w * eval_potential(spec, (Xv, Ys))[1]
    iy *= dy
    return ix, iy


def build_links(domain: LatticeDomain, spec: FieldSpec, h: float,
                gauge=None) -> LinkPhases:
    """Peierls phases ``exp(-(i/h) int_edge A.dl)`` for ``spec``.

    Edge integrals use 4-point Gauss-Legendre, exact for every family in
    the catalog (all potentials are polynomials of degree <= 3). ``gauge``
    is an optional callable ``phi(X, Y)``; the links then describe
    ``A + grad phi`` with the ``grad phi`` integrals taken exactly as
    ``phi(head) - phi(tail)``.
    """
    if not h > 0:
        raise ValueError(f"h must be > 0, got {h}")
    ix, iy = _edge_integrals(domain, spec)
    if gauge is not None:
        X, Y = domain.meshgrid()
        phi = np.asarray(gauge(X, Y), dtype=float)
        ix = ix + (phi[1:, :] - phi[:-1, :])
        iy = iy + (phi[:, 1:] - phi[:, :-1])
    return LinkPhases(domain, float(h), np.exp(-1j * ix / h),
                      np.exp(-1j * iy / h), spec)


def zero_links(domain: LatticeDomain, h: float) -> LinkPhases:
    return LinkPhases(domain, float(h),
                      np.ones((domain.nx - 1, domain.ny), complex),
                      np.ones((domain.nx, domain.ny - 1), complex))


def quadratic_form(links: LinkPhases, psi: WaveFunction) -> float:
    """Discrete magnetic quadratic form (nonnegative)."""
    _check_same(links.domain, psi.domain)
    d = links.domain
    v = psi.values
    ex = v[1:, :] - links.ux * v[:-1, :]
    ey = v[:, 1:] - links.uy * v[:, :-1]
    sx = np.sum(ex.real ** 2 + ex.imag ** 2) / d.dx ** 2
    sy = np.sum(ey.real ** 2 + ey.imag ** 2) / d.dy ** 2
    return float(links.h ** 2 * d.cell_area * (sx + sy))


def apply_operator(links: LinkPhases, psi: WaveFunction) -> WaveFunction:
    """Matrix-free 5-point gauge-covariant Laplacian ``(-i h grad + A)^2``.

    Consistent with ``quadratic_form``: ``<H psi, psi> = Q(psi)``.
    """
    _check_same(links.domain, psi.domain)
    return WaveFunction(links.domain, _apply(links, psi.values))


def _apply(links, v):
    d = links.domain
    cx = links.h ** 2 / d.dx ** 2
    cy = links.h ** 2 / d.dy ** 2
    out = (2 * (cx + cy)) * v
    # horizontal edges
    fwd = links.ux.conj() * v[1:, :]
    out[:-1, :] -= cx * fwd
    out[1:, :] -= cx * (links.ux * v[:-1, :])
    # vertical edges
    out[:, :-1] -= cy * (links.uy.conj() * v[:, 1:])
    out[:, 1:] -= cy * (links.uy * v[:, :-1])
    out[~d.mask] = 0.0
    return out


def operator_matrix(links: LinkPhases) -> sp.csr_matrix:
    """Sparse Hermitian matrix of the operator on interior nodes.

    Used by the direct inner solver; ``apply_operator`` is the reference.
    """
    d = links.domain
    idx = -np.ones(d.shape, dtype=np.int64)
    idx[d.mask] = np.arange(d.n_interior)
    cx = links.h ** 2 / d.dx ** 2
    cy = links.h ** 2 / d.dy ** 2
    rows = [idx[d.mask]]
    cols = [idx[d.mask]]
    vals = [np.full(d.n_interior, 2 * (cx + cy), complex)]

    def couple(a_idx, b_idx, coef):
        # entry H[a, b] = coef where both nodes are interior
        ok = (a_idx >= 0) & (b_idx >= 0)
        rows.append(a_idx[ok])
        cols.append(b_idx[ok])
        vals.append(coef[ok])

    couple(idx[:-1, :], idx[1:, :], -cx * links.ux.conj())
    couple(idx[1:, :], idx[:-1, :], -cx * links.ux)
    couple(idx[:, :-1], idx[:, 1:], -cy * links.uy.conj())
    couple(idx[:, 1:], idx[:, :-1], -cy * links.uy)
    n = d.n_interior
    return sp.csr_matrix((np.concatenate(vals),
                          (np.concatenate(rows), np.concatenate(cols))),
                         shape=(n, n))


def rayleigh_quotient(links, psi, p=2.0) -> float:
    """``Q(psi) / ||psi||_p^2``."""
    return quadratic_form(links, psi) / lp_norm(psi, p) ** 2


# --- binary wave-function files ------------------------------------------

_HEADER = struct.Struct("<qqddddQ")


def save_wavefunction(path, psi: WaveFunction):
    """Write ``psi`` as header + interleaved (re, im) float64, little endian.

    Header: n_x, n_y (int64), x0, x1, y0, y1 (float64), mask hash (uint64).
    """
    d = psi.domain
    head = _HEADER.pack(d.nx, d.ny, d.xlim[0], d.xlim[1], d.ylim[0],
                        d.ylim[1], d.mask_hash())
    z = psi.interior()
    body = np.empty(2 * z.size, dtype="<f8")
    body[0::2] = z.real
    body[1::2] = z.imag
    with open(path, "wb") as fh:
        fh.write(head)
        fh.write(body.tobytes())


def load_wavefunction(path, domain: LatticeDomain) -> WaveFunction:
    """Read a file written by ``save_wavefunction`` onto ``domain``."""
    with open(path, "rb") as fh:
        raw = fh.read()
    nx, ny, x0, x1, y0, y1, mh = _HEADER.unpack_from(raw)
    if (nx, ny) != domain.shape or mh != domain.mask_hash():
        raise DomainMismatchError("file was written for a different domain")
    if not np.allclose((x0, x1, y0, y1), domain.xlim + domain.ylim,
                       rtol=0, atol=1e-12):
        raise DomainMismatchError("bounding box mismatch")
    body = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size)
    if body.size != 2 * domain.n_interior:
        raise ValueError("payload size does not match the interior node count")
    return WaveFunction.from_interior(domain, body[0::2] + 1j * body[1::2])
