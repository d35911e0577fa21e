"""Four states generated by diagonal sign flips: a Z2 x Z2 orbit.

The states sum to zero, so the set is linearly dependent (rank 3). The
Fourier transform over the group gives the singular values directly, and
the resulting square-root measurement inherits the symmetry of the states
and minimizes the probability of error.
"""

from pathlib import Path

import numpy as np

import srmkit as sk

np.set_printoptions(precision=4, suppress=True)
data = Path(__file__).parent / "data"

s = sk.load_state_set((data / "gu4.json").read_text())
g = sk.load_group_spec((data / "z2xz2.json").read_text())

sfun = sk.check_gu(s, g)
print("s(g) =", sfun.values.real, "over", g.order)
print("Fourier matrix:\n", sk.ft_matrix(g).real)
print("sigma(h) =", sk.gu_singular_values(sfun).values)

M = sk.gu_srm(s, g)
print("\nSRM:\n", M.matrix.real)
print("equals the LSM:", np.allclose(M.matrix, sk.lsm(s).matrix, atol=1e-12))
print("symmetry deviation:", sk.symmetry_check(M, g))

rep = sk.holevo_conditions(s, M)
print(f"\nw(0) = {M.metadata['w0']:.6f}, error probability {rep.p_error:.6f}, verdict {rep.verdict}")

# dependent set: the orthogonal realization lives in the full space
print(f"E_min = {sk.residual_error(s, M):.6f}, orthogonal E_min = {sk.orthogonal_residual(s):.6f}")
print("Neumark compression deviation:", sk.neumark_check(s))
