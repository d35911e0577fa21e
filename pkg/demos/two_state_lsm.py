"""Two real states in the plane, 120 degrees apart.

Builds the least-squares measurement, checks it against the square-root
formula and the implicit Gram-root identity, then compares its error
probability with a brute-force Helstrom search.
"""

from pathlib import Path

import numpy as np

import srmkit as sk

np.set_printoptions(precision=4, suppress=True)

s = sk.load_state_set((Path(__file__).parent / "data" / "two_state.json").read_text())
print("states (columns):\n", s.states.real)
print("Gram matrix:\n", sk.gram(s).real)

f = sk.svd(s.states)
print("singular values:", f.sigma, " rank:", f.r)

M = sk.lsm(s)
print("\nleast-squares measurement:\n", M.matrix.real)

# the same matrix from Phi (Phi^* Phi)^{-1/2}
root_inv = sk.pinv_sqrt(sk.gram(s))
print("(Phi^* Phi)^{-1/2}:\n", root_inv.real)
print("max |Phi S^{-1/2} - M| =", np.abs(s.states @ root_inv - M.matrix).max())
print("||M^* Phi - S^{1/2}||_F =", sk.verify_srm_implicit(s, M))

e_direct = sk.residual_error(s, M)
e_closed = sk.residual_error_closed_form(f, s.m)
print(f"\nsquared error: direct {e_direct:.6f}, closed form {e_closed:.6f}")

pe = sk.error_probability(s, M)
print(f"error probability {pe:.6f}, Helstrom search {sk.helstrom_oracle(s):.6f}")
print("Holevo verdict:", sk.holevo_conditions(s, M).verdict)

gs = sk.gram_schmidt_measurement(s)
print(f"\nGram-Schmidt baseline: error probability {sk.error_probability(s, gs):.6f},",
      "verdict", sk.holevo_conditions(s, gs).verdict)
