"""Supporting identities behind the equivalence.

* the partial scalar product ``<phi|psi>`` builds the same conditional
  operator as a partial trace of ``|phi><phi| rho``;
* expanding in rotated bases gives the same coefficients once mapped back;
* succession and coincidence give the same probability for commuting events.
"""

from relstate.oracles import (
    check_basis_independence,
    check_psp_vs_ptrace,
    check_succession_vs_coincidence,
)

for check in (check_psp_vs_ptrace, check_basis_independence, check_succession_vs_coincidence):
    rep = check(200, seed=1)
    print(f"{rep.name:28s} trials={rep.trials}  max deviation {rep.max_deviation:.2e}  "
          f"{'PASS' if rep.passed else 'FAIL'}")
