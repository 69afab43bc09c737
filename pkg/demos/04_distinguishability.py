"""Where the descriptions differ: the subject's own state.

For a Bell pair the collapse description leaves the subject in a pure,
uncorrelated state, while the relative-state description keeps the global
state, so the subject's reduced state stays maximally mixed and correlated
with the object. Object predictions agree; the subject's do not.
"""

import numpy as np

from relstate import HilbertStructure, StateVector
from relstate.oracles import distinguishability_report

bell = StateVector(HilbertStructure((2, 2)), np.array([1, 0, 0, 1]) / np.sqrt(2))
rep = distinguishability_report(bell, [1, 0])
print(f"purity of subject state, collapse:        {rep.cqm_purity:.6f}")
print(f"purity of subject state, relative-state:  {rep.rsqm_purity:.6f}")
print(f"correlation norm, collapse:               {rep.correlation_norm_cqm:.2e}")
print(f"correlation norm, relative-state:         {rep.correlation_norm_rsqm:.6f}")

# partially entangled states interpolate between the two
for a in (1.0, 0.9, 0.8, 1 / np.sqrt(2)):
    psi = StateVector((2, 2), np.array([a, 0, 0, np.sqrt(1 - a * a)]))
    r = distinguishability_report(psi, [1, 0])
    print(f"a = {a:.3f}: subject purity {r.rsqm_purity:.4f} (relative) vs {r.cqm_purity:.4f} (collapse)")
