"""Planar model constants and their exact symmetries.

* lambda^[0](2) is the Landau level 1.
* A field of strength b rescales lambda^[0](p) by b^(2/p).
* The family mu(b, c1, c2, p) does not depend on b and scales as
  |c|^(4/(3p)) lambda^[1](p).

Run: python3 demos/03_model_constants.py   (about half a minute)
"""
import numpy as np

from magsob.fields import FieldSpec
from magsob.solver import min_param_constant, model_constant, model_protocol

rep = model_protocol(FieldSpec.power(0), 2.0, truncation=6, resolution=8)
print(f"lambda^[0](2) = {rep.value:.6f}  (protocol spread {rep.spread:.2%})")

p = 4.0
lam0 = model_constant(0, p, truncation=6, resolution=8, protocol=False)
lam0_b2 = model_constant(0, p, truncation=6, resolution=12, strength=2.0,
                         protocol=False)
print(f"lambda^[0](4) = {lam0:.6f}; strength 2 gives {lam0_b2:.6f}, "
      f"ratio {lam0_b2 / lam0:.5f} vs 2^(1/2) = {np.sqrt(2):.5f}")

res = model_protocol(FieldSpec.power(0), p, truncation=6, resolution=8).result
for s in res.starts:
    print(f"   start {s['policy']:<20} lambda {s['lam']:.10f} "
          f"converged={s['converged']}")

lam1 = model_constant(1, p, protocol=False)
for b, c1, c2 in ((0, 0, 1), (1, 0, 1), (0, 3, 4)):
    mu = min_param_constant(b, c1, c2, p)
    law = np.hypot(c1, c2) ** (4 / (3 * p)) * lam1
    print(f"mu({b}, {c1}, {c2}, 4) = {mu:.6f}   |c|^(1/3) lambda^[1](4) = {law:.6f}")
