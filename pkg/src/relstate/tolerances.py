"""Numerical tolerances shared across the package.

All comparisons are absolute and element-wise; every quantity handled here
is O(1) because states are normalized.
"""

EPS_NORM = 1e-10
EPS_HERM = 1e-10
EPS_IDEM = 1e-10
EPS_UNIT = 1e-10
EPS_PSD = 1e-10

# element-wise max deviation allowed when two computed objects are compared
EPS_CMP = 1e-9

# events with probability at or below this are treated as impossible
EPS_PROB = 1e-12
