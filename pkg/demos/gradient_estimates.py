"""Empirical constants of the local gradient estimates, and scaling checks.

For a smooth field v the gradient on the inner cylinder C_{2,3,1} is bounded
by curl, divergence and v itself on C_{1,4,1}.  We sample 50 random
band-limited fields, compute the ratio of the two sides at q = 2 and 10/3,
and look at the largest ratio: a stand-in for the unknown constant.  For
divergence-free fields built from a streamfunction, the sharper meridional
version only needs omega_theta on the right.

    python3 demos/gradient_estimates.py
"""
import numpy as np

from swirlbound.verification import check_scaling, swirling_family
from swirlbound.verification import helmholtz as hz

for kind, solenoidal, label in (("helmholtz", False, "general fields"),
                                ("axisym", True, "divergence-free, meridional form")):
    specs = hz.random_family(50, 7, solenoidal)
    print(label)
    for q in (2.0, 10 / 3):
        row = []
        for n in (97, 193):
            sweep = hz.family_sweep(specs, hz.family_grid(n), q, kind)
            row.append(sweep.max_ratio)
        med = float(np.median(sweep.ratios))
        print(f"  q = {q:.3g}: max ratio {row[0]:.4f} (97 nodes), {row[1]:.4f} (193 nodes), "
              f"median {med:.4f}")

# Both sides are 1-homogeneous, and the Navier-Stokes scaling maps norms on
# C_{A,B,R} to norms on C_{A,B,kR} with fixed powers of k.
print("\nscaling identities for a swirling closed-form flow:")
for k in (1.0, 0.5, 0.25):
    out = check_scaling(swirling_family(), k)
    worst = max(out.discrepancies.values())
    print(f"  k = {k:<5g} worst relative discrepancy {worst:.1e}")
