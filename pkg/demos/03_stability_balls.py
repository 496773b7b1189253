"""Certificates survive every perturbation inside their stability radius.

The radius is a sufficient bound: random directions usually stay certified
well beyond it.
"""

from bephase import (
    isotropic,
    maximally_entangled,
    p_reduction_value,
    p_stability_radius,
    perturb_and_verify,
    rank2_witness_search,
    stability_radius,
)

singlet = maximally_entangled(2).projector()
cert = rank2_witness_search(singlet)
radius = stability_radius(cert)
for scale in (0.5, 0.9, 3.0, 8.0):
    rep = perturb_and_verify(singlet, cert, scale * radius, samples=200, seed=1)
    print(f"distillability witness, eta = {scale:.1f} x {radius:.4f}: "
          f"{rep.violations} violations, worst value {rep.max_value:+.4f}")

iso = isotropic(3, 0.7)
wv = p_reduction_value(iso, maximally_entangled(3), 3)
radius = p_stability_radius(wv)
for scale in (0.9, 5.0):
    rep = perturb_and_verify(iso, wv, scale * radius, samples=200, seed=2)
    print(f"Lambda_3 witness, eta = {scale:.1f} x {radius:.5f}: "
          f"{rep.violations} violations, worst value {rep.max_value:+.5f}")
