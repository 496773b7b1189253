"""Truncated continuous-variable bound entangled states stay PPT, and a
rank-2 search finds nothing to distill on one copy."""

from bephase import CvBesParams, cv_bes, maximally_entangled, ppt_check, rank2_witness_search
from bephase.criteria import realignment_value

for N in range(2, 9):
    rho = cv_bes(CvBesParams(a=0.4, c=0.6, N=N))
    ppt = ppt_check(rho)
    res = rank2_witness_search(rho, n=1, restarts=32, seed=N)
    print(f"N={N}  PPT={ppt.is_ppt}  min PT eig={ppt.min_eigenvalue:+.2e}  "
          f"realignment={realignment_value(rho):.4f}  search={'certificate' if res else 'nothing found'}")

# the same search on a maximally entangled pair finds the -1/2 value at once
cert = rank2_witness_search(maximally_entangled(2).projector())
print("two-qubit maximally entangled state: epsilon =", cert.epsilon)
