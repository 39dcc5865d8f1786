"""Peierls lattice: gauge covariance, the diamagnetic inequality, and
the Dirichlet ground state of the unit square.

Run: python3 demos/01_lattice_and_gauge.py
"""
import numpy as np

from magsob import (FieldSpec, LatticeDomain, ScalarField, WaveFunction,
                    build_links, gauge_transform)
from magsob.lattice import quadratic_form, zero_links
from magsob.solver import linear_ground_state

rng = np.random.default_rng(0)
dom = LatticeDomain.square(1.0, 41)
spec = FieldSpec.radial_well(b0=1.0, x0=(0.1, 0.05), curvature=1.0)
h = 0.2

# A random state and a polynomial gauge function phi.
psi = WaveFunction(dom, rng.normal(size=dom.shape) + 1j * rng.normal(size=dom.shape))
X, Y = dom.meshgrid()
phi = lambda x, y: 0.5 * x ** 3 - x * y + 2 * y ** 2

links = build_links(dom, spec, h)
links_g = build_links(dom, spec, h, gauge=phi)
q = quadratic_form(links, psi)
qg = quadratic_form(links_g, gauge_transform(psi, ScalarField(dom, -phi(X, Y)), h))
print(f"Q_A(psi)            = {q:.15g}")
print(f"Q_(A+grad phi)(psi') = {qg:.15g}   relative gap {abs(q - qg) / q:.1e}")

# The magnetic form never goes below the free form of |psi|.
q0 = quadratic_form(zero_links(dom, h), psi.abs())
print(f"diamagnetic: Q_A(psi) = {q:.6g} >= Q_0(|psi|) = {q0:.6g}")

# Without a field, the unit-square Dirichlet eigenvalue is 2 pi^2.
sq = LatticeDomain.square(0.5, 128, center=(0.5, 0.5))
res = linear_ground_state(zero_links(sq, 1.0))
print(f"unit square ground state {res.lam:.6f}  (2 pi^2 = {2 * np.pi ** 2:.6f}),"
      f" {res.iterations} inverse iterations")
