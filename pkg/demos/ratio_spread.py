"""How tightly the two norms track each other on an ellipse.

For each function of the standard family we print the ratio of the squared
P_beta norm of F to the squared G^(beta+1) norm of its Borel transform.  The
two-sided estimate only promises that the ratio stays within the factor C/c,
which is astronomically large; the observed spread is close to 1.

    python demos/ratio_spread.py
"""

from borelnorm import Ellipse, constant_bundle, galpha_norm, pbeta_norm
from borelnorm.expsum import family_for_beta

dom = Ellipse(1.5, 1.0, rotation=0.3)
for beta in (0.0, 0.75):
    print(f"beta = {beta}")
    ratios = []
    for f in family_for_beta(beta):
        p = pbeta_norm(dom, f, beta)
        g = galpha_norm(dom, f, beta + 1)
        ratios.append(p.value / g.value)
        print(f"  {f.name:34s} ratio={ratios[-1]:.6f}")
    cb = constant_bundle(beta, dom)
    print(f"  spread max/min = {max(ratios) / min(ratios):.4f}   C/c = {cb.spread_bound:.3e}\n")
