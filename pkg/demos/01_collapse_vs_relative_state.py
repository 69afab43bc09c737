"""Two descriptions, one object state.

An observer (the *subject*) sees a projective event on their own register.
Either we collapse the whole composite state and then look at the object, or
we leave the composite alone and condition the object's reduced state on the
subject's event. This script runs both on a small example and on random
states, and prints the deviation between them.
"""

import numpy as np

from relstate import (
    DensityOperator,
    HilbertStructure,
    StateVector,
    SubsystemEvent,
    collapse_pure,
    collapsed_object_state,
    partial_trace,
    relative_state,
)
from relstate.oracles import check_rs_equals_collapse
from relstate.random_states import random_event, random_mixed_state

np.set_printoptions(precision=4, suppress=True)

# %% a which-way state: photon path (object) x detector pointer (subject)
s2 = 1 / np.sqrt(2)
psi = StateVector(HilbertStructure((2, 2)), s2 * np.array([1, 0, 0, 1]))
saw_h = SubsystemEvent(1, np.diag([1.0, 0.0]))

print("reduced object state, no conditioning:")
print(partial_trace(psi, [0]).matrix)

outcome = collapse_pure(psi, saw_h)
print(f"\ncollapse: P(event) = {outcome.probability:.6f}")
print("post-collapse composite amplitudes:", outcome.post_state.amplitudes)
print("object state after collapse:")
print(collapsed_object_state(psi, saw_h, 0).matrix)

print("\nrelative state (composite untouched):")
print(relative_state(psi, saw_h, 0).matrix)

# %% a random three-party mixed state; object 0, subject 2, bystander 1
rng = np.random.default_rng(11)
rho = random_mixed_state((2, 3, 2), rng)
event = random_event(2, 2, rng)
a = collapsed_object_state(rho, event, 0).matrix
b = relative_state(rho, event, 0, path="direct").matrix
c = relative_state(rho, event, 0, path="pair").matrix
print(f"\nrandom mixed state: |collapse - direct| = {np.abs(a - b).max():.2e}, "
      f"|collapse - pair| = {np.abs(a - c).max():.2e}")
assert isinstance(rho, DensityOperator)

# %% and many random instances at once
report = check_rs_equals_collapse(300, seed=5)
print(f"\n{report.trials} random trials: max deviation {report.max_deviation:.2e}, "
      f"passed = {report.passed}")
