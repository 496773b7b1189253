"""Distillable states approximate any state: the trace distance falls as 2/(N+1)
while each approximant keeps a certificate."""

import numpy as np

from bephase import CvBesParams, DensityOperator, cv_bes, density_demo

e0 = np.zeros(64)
e0[0] = 1.0
pure = DensityOperator(np.outer(e0, e0), 8, 8)
print("product state |0,0> in 8 x 8")
for row in density_demo(pure, range(2, 7)):
    print(f"  N={row.N}  distance={row.trace_distance:.6f} (2/(N+1)={2 / (row.N + 1):.6f})"
          f"  epsilon={row.certificate.epsilon:+.6f}")

print("truncated CV bound entangled state, 10 x 10")
rho = cv_bes(CvBesParams(0.4, 0.6, 10))
for row in density_demo(rho, range(2, 8), schmidt_p=3):
    print(f"  N={row.N}  distance={row.trace_distance:.6f}  epsilon={row.certificate.epsilon:+.6f}"
          f"  Lambda_3 value={row.witness.value:+.6f}")
