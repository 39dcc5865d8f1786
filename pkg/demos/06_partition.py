"""Quadratic partition of unity, translated grids, and the IMS identity.

Run: python3 demos/06_partition.py
"""
import numpy as np

from magsob.fields import FieldSpec, ScalarField
from magsob.lattice import LatticeDomain, WaveFunction, build_links, quadratic_form
from magsob.partition import (Partition, PartitionSpec, gradient_constant,
                              ims_decompose, select_translation,
                              translation_bound)

alpha, rho = 7 / 16, 5 / 16
D = gradient_constant(alpha, rho)
print(f"gradient constant D({alpha}, {rho}) = {D:.4f}")

rng = np.random.default_rng(1)
for h in (1.0, 0.01, 1e-4):
    part = Partition(PartitionSpec(alpha, rho, h))
    X, Y = rng.uniform(-1, 1, 2000), rng.uniform(-1, 1, 2000)
    print(f"h={h:g}: max|sum chi^2 - 1| = "
          f"{np.max(np.abs(part.sum_squares(X, Y) - 1)):.1e}, "
          f"max h^(2 alpha) sum|grad chi|^2 = "
          f"{np.max(part.grad_budget(X, Y)) * h ** (2 * alpha):.4f}")

# Translation selection: a random density against the thickened grid.
d = LatticeDomain.square(1.0, 64)
f = ScalarField(d, rng.random(d.shape))
r, delta = 0.8, 0.1
tau, frac = select_translation(r, delta, f, strict=False)
print(f"best shift {tau}, grid mass fraction {frac:.4f}; "
      f"stated bound 3 delta/(r + 2 delta) = {translation_bound(r, delta):.4f}")
print("  (a uniform density already puts 1 - (1 - 2 delta/r)^2 = "
      f"{1 - (1 - 2 * delta / r) ** 2:.4f} of its mass there)")

# IMS: localized forms minus the gradient penalty give back Q(psi).
h = 0.1
dom = LatticeDomain.square(1.0, 128)
links = build_links(dom, FieldSpec.radial_well(1.0), h)
X, Y = dom.meshgrid()
psi = WaveFunction(dom, np.cos(np.pi * X / 2) * np.cos(np.pi * Y / 2) * np.exp(1j * X))
loc, pen = ims_decompose(PartitionSpec(alpha, rho, h), links, psi)
q = quadratic_form(links, psi)
print(f"IMS: sum Q(chi psi) - penalty = {loc - pen:.6f}, Q(psi) = {q:.6f}")
