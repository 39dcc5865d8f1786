"""Catalog of vector potentials and magnetic fields.

Sign convention: the field is ``B = d1 A2 - d2 A1``, so that the power
well ``A = (0, x**(k+1)/(k+1))`` has ``B = x**k``. Every spectral quantity
computed in this package is invariant under ``B -> -B`` (complex
conjugation of the wave function), so the choice only fixes signs of
reported field values.

All potentials are polynomials in ``(x, y)``; the azimuthal gauges of the
radial families have closed forms because their fields are polynomials in
``r**2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

FAMILIES = (
    "constant",
    "power",
    "translated_power",
    "radial_well",
    "radial_vanishing",
    "param_model",
)


class FieldConfigError(ValueError):
    """Unknown family or invalid parameters for a field."""


@dataclass(frozen=True)
class FieldSpec:
    """A named magnetic geometry.

    Parameters
    ----------
    family : str
        One of ``FAMILIES``.
    params : dict
        Family parameters:

        ``constant``          b0, center (symmetric gauge about center)
        ``power``             k, strength
        ``translated_power``  k, x0, strength
        ``radial_well``       b0, x0, curvature; ``B = b0 (1 + curvature |x-x0|^2)``
        ``radial_vanishing``  gamma0, r0, center; ``B = gamma0 (r0^2 - |x-c|^2) / (2 r0)``
        ``param_model``       b, c1, c2; ``A = (-b y + c1 x y + c2 y^2 / 2, 0)``
    """

    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise FieldConfigError(f"unknown field family {self.family!r}")
        p = dict(_DEFAULTS[self.family])
        unknown = set(self.params) - set(p)
        if unknown:
            raise FieldConfigError(
                f"unknown parameters for {self.family}: {sorted(unknown)}")
        p.update(self.params)
        for key in ("x0", "center"):
            if key in p:
                p[key] = tuple(float(v) for v in p[key])
        object.__setattr__(self, "params", p)
        _validate(self.family, p)

    # Convenience constructors -------------------------------------------

    @classmethod
    def constant(cls, b0=1.0, center=(0.0, 0.0)):
        return cls("constant", {"b0": b0, "center": center})

    @classmethod
    def power(cls, k, strength=1.0):
        return cls("power", {"k": k, "strength": strength})

    @classmethod
    def translated_power(cls, k, x0, strength=1.0):
        return cls("translated_power", {"k": k, "x0": x0, "strength": strength})

    @classmethod
    def radial_well(cls, b0=1.0, x0=(0.0, 0.0), curvature=1.0):
        return cls("radial_well", {"b0": b0, "x0": x0, "curvature": curvature})

    @classmethod
    def radial_vanishing(cls, gamma0=1.0, r0=1.0, center=(0.0, 0.0)):
        return cls("radial_vanishing",
                   {"gamma0": gamma0, "r0": r0, "center": center})

    @classmethod
    def param_model(cls, b=0.0, c1=0.0, c2=1.0):
        return cls("param_model", {"b": b, "c1": c1, "c2": c2})

    # Geometry metadata ---------------------------------------------------

    @property
    def vanishing_order(self) -> int:
        """Order of vanishing of B at the well (0 for non-vanishing fields)."""
        if self.family in ("power", "translated_power"):
            return int(self.params["k"])
        if self.family in ("radial_vanishing", "param_model"):
            return 1
        return 0

    @property
    def well_strength(self) -> float:
        """b0 for non-vanishing wells, the normal derivative for k = 1 wells.

        For power wells of order k this is the coefficient in ``B = s x^k``.
        """
        p = self.params
        if self.family in ("constant", "radial_well"):
            return float(p["b0"])
        if self.family in ("power", "translated_power"):
            return float(abs(p["strength"]))
        if self.family == "radial_vanishing":
            return float(p["gamma0"])
        return float(np.hypot(p["c1"], p["c2"]))

    def well_point(self) -> np.ndarray:
        """A point where minimizers are expected to concentrate."""
        p = self.params
        f = self.family
        if f == "constant":
            return np.array(p["center"])
        if f == "power":
            return np.zeros(2)
        if f in ("translated_power", "radial_well"):
            return np.array(p["x0"])
        if f == "radial_vanishing":
            return np.array(p["center"]) + np.array([p["r0"], 0.0])
        c = np.array([p["c1"], p["c2"]])
        return p["b"] * c / (c @ c)

    def length_scale(self, h: float) -> float:
        """Natural magnetic length at semiclassical parameter h.

        ``(h / s)**(1 / (k + 2))`` with s the well strength and k the
        vanishing order; for k = 0 this is the usual ``sqrt(h / b0)``.
        """
        k = self.vanishing_order
        return (h / self.well_strength) ** (1.0 / (k + 2))


_DEFAULTS = {
    "constant": {"b0": 1.0, "center": (0.0, 0.0)},
    "power": {"k": 0, "strength": 1.0},
    "translated_power": {"k": 0, "x0": (0.0, 0.0), "strength": 1.0},
    "radial_well": {"b0": 1.0, "x0": (0.0, 0.0), "curvature": 1.0},
    "radial_vanishing": {"gamma0": 1.0, "r0": 1.0, "center": (0.0, 0.0)},
    "param_model": {"b": 0.0, "c1": 0.0, "c2": 1.0},
}


def _validate(family, p):
    if family in ("power", "translated_power"):
        k = p["k"]
        if int(k) != k or k < 0:
            raise FieldConfigError(f"k must be an integer >= 0, got {k}")
        p["k"] = int(k)
        if p["strength"] == 0:
            raise FieldConfigError("strength must be nonzero")
    elif family in ("constant", "radial_well"):
        if not p["b0"] > 0:
            raise FieldConfigError(f"b0 must be > 0, got {p['b0']}")
        if family == "radial_well" and p["curvature"] < 0:
            raise FieldConfigError("curvature must be >= 0")
    elif family == "radial_vanishing":
        if not (p["gamma0"] > 0 and p["r0"] > 0):
            raise FieldConfigError("gamma0 and r0 must be > 0")
    elif family == "param_model":
        if p["c2"] == 0:
            raise FieldConfigError("param_model requires c2 != 0")
    for key, val in p.items():
        if not np.all(np.isfinite(val)):
            raise FieldConfigError(f"parameter {key} is not finite")


def _potential(spec: FieldSpec, x, y):
    p = spec.params
    f = spec.family
    if f == "constant":
        cx, cy = p["center"]
        b0 = p["b0"]
        return -0.5 * b0 * (y - cy), 0.5 * b0 * (x - cx)
    if f == "power":
        k = p["k"]
        return np.zeros_like(x), p["strength"] * x ** (k + 1) / (k + 1)
    if f == "translated_power":
        k = p["k"]
        return (np.zeros_like(x),
                p["strength"] * (x - p["x0"][0]) ** (k + 1) / (k + 1))
    if f == "radial_well":
        X = x - p["x0"][0]
        Y = y - p["x0"][1]
        g = p["b0"] * (0.5 + 0.25 * p["curvature"] * (X * X + Y * Y))
        return -g * Y, g * X
    if f == "radial_vanishing":
        X = x - p["center"][0]
        Y = y - p["center"][1]
        r0 = p["r0"]
        g = p["gamma0"] / (2 * r0) * (0.5 * r0 * r0 - 0.25 * (X * X + Y * Y))
        return -g * Y, g * X
    # param_model
    a1 = -p["b"] * y + p["c1"] * x * y + 0.5 * p["c2"] * y * y
    return a1, np.zeros_like(y)


def _field(spec: FieldSpec, x, y):
    p = spec.params
    f = spec.family
    if f == "constant":
        return np.full_like(x, p["b0"])
    if f == "power":
        return p["strength"] * x ** p["k"]
    if f == "translated_power":
        return p["strength"] * (x - p["x0"][0]) ** p["k"]
    if f == "radial_well":
        r2 = (x - p["x0"][0]) ** 2 + (y - p["x0"][1]) ** 2
        return p["b0"] * (1 + p["curvature"] * r2)
    if f == "radial_vanishing":
        r2 = (x - p["center"][0]) ** 2 + (y - p["center"][1]) ** 2
        return p["gamma0"] * (p["r0"] ** 2 - r2) / (2 * p["r0"])
    return p["b"] - p["c1"] * x - p["c2"] * y


def eval_potential(spec: FieldSpec, point) -> np.ndarray:
    """Vector potential at ``point`` (shape ``(2,)`` or ``(2, ...)``)."""
    x, y = np.asarray(point, dtype=float)
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("point must be finite")
    a1, a2 = _potential(spec, x, y)
    return np.array([a1, a2], dtype=float)


def eval_field(spec: FieldSpec, point):
    """Magnetic field ``B = d1 A2 - d2 A1`` at ``point``."""
    x, y = np.asarray(point, dtype=float)
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("point must be finite")
    b = _field(spec, np.asarray(x, float), np.asarray(y, float))
    return float(b) if np.ndim(b) == 0 else b


def numerical_curl(spec: FieldSpec, point, step=1e-4):
    """Central-difference curl of ``eval_potential``; accurate to O(step**2)."""
    x, y = np.asarray(point, dtype=float)
    _, a2p = _potential(spec, x + step, y)
    _, a2m = _potential(spec, x - step, y)
    a1p, _ = _potential(spec, x, y + step)
    a1m, _ = _potential(spec, x, y - step)
    return (a2p - a2m) / (2 * step) - (a1p - a1m) / (2 * step)


def potential_jacobian(spec: FieldSpec, point, step=1e-5) -> np.ndarray:
    """Jacobian ``J[i, j] = d_j A_i`` at a point, by central differences."""
    x, y = (float(v) for v in point)
    J = np.empty((2, 2))
    J[:, 0] = (eval_potential(spec, (x + step, y))
               - eval_potential(spec, (x - step, y))) / (2 * step)
    J[:, 1] = (eval_potential(spec, (x, y + step))
               - eval_potential(spec, (x, y - step))) / (2 * step)
    return J


@dataclass
class ScalarField:
    """Real values on the nodes of a lattice domain (shape ``domain.shape``)."""

    domain: "object"
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.domain.shape:
            raise ValueError(
                f"values shape {self.values.shape} != grid {self.domain.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("scalar field has non-finite values")

    @classmethod
    def from_function(cls, domain, fn: Callable):
        X, Y = domain.meshgrid()
        return cls(domain, fn(X, Y))


def gauge_transform(psi, phi: ScalarField, h: float):
    """Return ``exp(i phi / h) psi`` nodewise.

    With this convention ``Q_{A - grad phi}(exp(i phi/h) psi) = Q_A(psi)``;
    equivalently the pair ``(gauge_transform(psi, -phi, h), A + grad phi)``
    leaves the quadratic form unchanged.
    """
    from .lattice import WaveFunction

    if h <= 0:
        raise ValueError("h must be > 0")
    if phi.domain is not psi.domain and phi.domain != psi.domain:
        raise ValueError("psi and phi live on different grids")
    return WaveFunction(psi.domain, np.exp(1j * phi.values / h) * psi.values)
