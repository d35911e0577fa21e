"""Three two-photon states |aa>, |bb>, |cc> with polarizations 0, 60 and 120 degrees.

The set is a cyclic orbit of (Q x Q) for a 60 degree rotation Q, so its
Gram matrix is circulant and the cyclic square-root measurement applies.
"""

from pathlib import Path

import numpy as np

import srmkit as sk

np.set_printoptions(precision=4, suppress=True)
data = Path(__file__).parent / "data"
s = sk.load_state_set((data / "trine.json").read_text())
g = sk.load_group_spec((data / "z3.json").read_text())

print("Gram matrix:\n", sk.gram(s).real)
M = sk.cyclic_srm(s)
print("measurement vectors (columns):\n", M.matrix.real)
print("max |cyclic SRM - LSM| =", np.abs(M.matrix - sk.lsm(s).matrix).max())
print("symmetry deviation:", sk.symmetry_check(M, g))

rep = sk.holevo_conditions(s, M)
print(f"error probability {rep.p_error:.6f}; verdict {rep.verdict}")
