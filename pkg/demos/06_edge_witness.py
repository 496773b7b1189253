"""Kernel witnesses for a 3 x 3 PPT entangled state, and probes of Schmidt rank s."""

from bephase import build_edge_witness, is_edge_state, schmidt_probe_search
from bephase.criteria import realignment_value
from bephase.fixtures import FIXTURE_PARAMETER, ppt_entangled_fixture
from bephase.witness import has_maximal_ranks, random_product_values

delta = ppt_entangled_fixture()
print(f"fixture t={FIXTURE_PARAMETER:.6f}, realignment {realignment_value(delta):.4f}")
status = is_edge_state(delta)
print(f"edge test: {status.status} (ranks {status.range_dim}, {status.pt_range_dim}; "
      f"maximal={has_maximal_ranks(delta)})")

w = build_edge_witness(delta)
print(f"epsilon={w.epsilon:.6e}  Tr(W delta)={w.value_on(delta):+.6e}")
print("min over 10^4 random product states of <e,f|W|e,f>:",
      random_product_values(w.W, w.dims, 10_000, seed=1).min())

for s in (1, 2, 3):
    probe = schmidt_probe_search(w.W_plus_eps, w.dims, s)
    print(f"s={s}: " + ("no probe" if probe is None else f"probe value {probe.value:+.4f}"))
