"""Norms on the unit disk against their closed forms.

On the unit disk the Laplace kernel is K(r) = pi I1(2r)/r and the Borel
transform of F = 1 is 1/zeta, so both sides of the norm comparison have
one-dimensional reference values.

    python demos/disk_closed_forms.py
"""

import numpy as np
from scipy import integrate, special

from borelnorm import Disk, ExpSum, galpha_norm, laplace_kernel, pbeta_norm

disk = Disk(0j, 1.0)
one = ExpSum(((1.0, 0, 0.0),), "1")

print("Laplace kernel K(r) on the unit disk")
for r in (0.1, 1.0, 5.0, 20.0):
    ref = np.pi * special.iv(1, 2 * r) / r
    val = laplace_kernel(disk, r)
    print(f"  r={r:5.1f}  K={val:.15e}  rel.err={abs(val / ref - 1):.1e}")

print("\nG^alpha norm of 1/zeta: 8 pi B(2 alpha + 1, 4 - 2 alpha)")
for alpha in (0.5, 1.0, 1.5):
    ref = 8 * np.pi * special.beta(2 * alpha + 1, 4 - 2 * alpha)
    val = galpha_norm(disk, one, alpha)
    print(f"  alpha={alpha:3.1f}  value={val.value:.12f}  exact={ref:.12f}  "
          f"refinement change={val.error_estimate:.1e}")

ref, _ = integrate.quad(lambda r: 2 * r / special.iv(1, 2 * r), 0, np.inf, epsrel=1e-13)
val = pbeta_norm(disk, one, 0.0)
print(f"\nP_0 norm of F = 1: {val.value:.12f}  (1D quadrature {ref:.12f})")
