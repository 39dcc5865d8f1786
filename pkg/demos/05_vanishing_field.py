"""Semiclassical law for a field vanishing linearly on a circle.

B = gamma0 (1 - |x|^2) / 2 vanishes on the unit circle with normal
derivative of size gamma0. The minimizer lives on that circle at the
length scale h^(1/3), and lambda behaves like
lambda^[1](p) gamma0^(4/(3p)) h^(2 - 4/(3p)).

Run: python3 demos/05_vanishing_field.py   (a few minutes)
"""
from magsob.asymptotics import sweep_vanishing_field
from magsob.fields import FieldSpec
from magsob.lattice import LatticeDomain

dom = LatticeDomain.square(2.0, 161)
spec = FieldSpec.radial_vanishing(gamma0=1.0, r0=1.0)
fit = sweep_vanishing_field(dom, spec, 4.0, hs=(0.08, 0.04, 0.02))
for r in fit.rows:
    print(f"h={r['h']:.3f}  lambda={r['lambda']:.6g}  best start={r['policy']:<20}"
          f" multistart spread={r['multistart_spread']:.1e}")
print(f"fitted exponent {fit.exponent:.4f} (target {fit.target_exponent:.4f}),"
      f" prefactor ratio {fit.prefactor_ratio:.4f}")
