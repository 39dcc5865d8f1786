"""Semiclassical law near a non-degenerate magnetic well.

A radial well B = 1 + |x - x0|^2 on the square [-1, 1]^2. As h decreases
the optimal constant behaves like lambda^[0](p) h^(2 - 2/p) and the
minimizer concentrates at x0. The grid spacing follows the magnetic
length sqrt(h).

Run: python3 demos/04_well_asymptotics.py   (about a minute)
"""
from magsob.asymptotics import decay_rate_report, sweep_constant_field
from magsob.fields import FieldSpec
from magsob.lattice import LatticeDomain

dom = LatticeDomain.square(1.0, 161)
spec = FieldSpec.radial_well(1.0, (0.1, 0.05), 1.0)
p = 4.0
fit = sweep_constant_field(dom, spec, p, hs=(0.08, 0.04, 0.02, 0.01))
print(f"{'h':>8} {'lambda':>12} {'trial bound':>12} {'tail L^p':>10} {'nodes':>7}")
for r in fit.rows:
    print(f"{r['h']:8.4f} {r['lambda']:12.6g} {r['trial_bound']:12.6g} "
          f"{r['tail_lp']:10.2e} {r['nodes']:7d}")
print(f"fitted exponent {fit.exponent:.4f} (target {fit.target_exponent:.4f})")
print(f"lambda / (model h^target) at the smallest h: {fit.prefactor_ratio:.4f}")
rep = decay_rate_report(fit.profiles, fit.rows[0]["radius"])
print(f"tail decay rate estimate rho = {rep['rho']:.3f}")
