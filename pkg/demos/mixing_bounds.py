"""How much the minimal squared error can move when states are linearly mixed.

For Phi' = Phi A^* the change is bracketed by the extreme eigenvalues of
A A^*. Unitary mixing leaves it unchanged. The singular values of a
normalized set stay within the Frobenius norm of S - I of one.
"""

import numpy as np

import srmkit as sk

rng = np.random.default_rng(7)


def random_set(n, m):
    a = rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))
    return sk.StateSet(a / np.linalg.norm(a, axis=0))


s = random_set(4, 3)
print(" lambda_min  lambda_max     lower     actual      upper")
for scale in (0.5, 1.0, 2.0):
    a = scale * (np.eye(3) + 0.3 * (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))))
    r = sk.mixing_bounds(s, a)
    print(f"{r.lambda_min:11.4f} {r.lambda_max:11.4f} {r.lower:9.4f} {r.actual:10.4f} {r.upper:10.4f}  holds={r.holds()}")

q, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
print("\nunitary mixing |dE| =", sk.unitary_mixing_check(s, q))

bound, worst = sk.sv_perturbation_bound(s)
print(f"max |sigma_i^2 - 1| = {worst:.4f} <= sqrt(tr D^*D) = {bound:.4f}")

# weights rescaled to sum m: the weighted error sits between the two bounds
lower, actual, upper = sk.weighted_comparison_bounds(s, [0.5, 1.0, 1.5])
print(f"weighted - unweighted: {lower:.4f} <= {actual:.4f} <= {upper:.4f}")
