"""Mach-Zehnder interferometer with and without a delayed choice.

The first beam splitter has a tunable angle; a which-way detector is
entangled with the path. With the second beam splitter in place the
detector reads an interference pattern; without it, the path statistics.
Switching the second beam splitter after the photon is already inside only
matters through the final configuration.
"""

import numpy as np

from relstate.scenarios import MachZehnderModel, expected_distribution, run_mach_zehnder

print(" theta   interference P(D_H)   which-way P(D_H)")
for theta in range(0, 181, 30):
    i = run_mach_zehnder(MachZehnderModel(theta, True)).detector_distribution["D_H"]
    w = run_mach_zehnder(MachZehnderModel(theta, False)).detector_distribution["D_H"]
    ei, ew = expected_distribution(theta, True)[0], expected_distribution(theta, False)[0]
    print(f"{theta:6d}   {i:.6f} ({ei:.6f})    {w:.6f} ({ew:.6f})")

print("\ndelayed choice, theta = 30:")
for start in (True, False):
    rep = run_mach_zehnder(MachZehnderModel(30, start, delayed_choice=True))
    for line in rep.timeline:
        print("   ", line)
    print(f"    -> {rep.parameters['mode']}: P(D_H) = {rep.detector_distribution['D_H']:.6f}")

rep = run_mach_zehnder(MachZehnderModel(45, False))
print("\nwhich-way at 45 degrees, photon state given each detector reading:")
for label, state in zip(rep.branch_labels, rep.rsqm_object_states):
    print(f"  {label}:", np.round(np.diag(state.matrix).real, 6))
