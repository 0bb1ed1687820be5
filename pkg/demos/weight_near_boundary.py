"""The weight p(zeta) behaves like dist(zeta)^(2 beta + 2) near the domain.

Points move away from a rounded square along one normal; the normalised
weight p / dist^(2 beta + 2) settles between the explicit constants m and M,
and starts to grow once the distance is large compared with the width.

    python demos/weight_near_boundary.py
"""

import numpy as np

from borelnorm import SmoothedPolygon, p_weight
from borelnorm.constants import M_upper, m_lower

dom = SmoothedPolygon((1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j), 0.25)
beta = 0.0
theta = 0.4
z0 = dom.boundary_point(theta)
normal = np.exp(-1j * theta)
m, M = m_lower(beta, dom), M_upper(beta, dom)
print(f"sigma = {dom.metrics.sigma:.3f}, m = {m:.3e}, M = {M:.3e}")
for d in (1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0):
    p = p_weight(dom, z0 + d * normal, beta)
    print(f"  dist={d:7.3f}  p/dist^(2b+2) = {p / d ** (2 * beta + 2):.6f}")
