"""Weighted least squares as the prior of the first state moves from 0 to 1.

With weights (sqrt p, sqrt(1 - p)) the minimal weighted error peaks at
p = 1/2, where the weighted and unweighted measurements coincide, and
falls toward zero at both ends. Pass an output path to save the CSV.
"""

import sys
from pathlib import Path

import numpy as np

import srmkit as sk
from srmkit.analysis import parse_grid, sweep_csv

s = sk.load_state_set((Path(__file__).parent / "data" / "two_state.json").read_text())
rows = sk.weight_sweep(s, parse_grid("0.01:0.99:0.01"))

p_best, e_best = max(rows, key=lambda r: r[1])
print(f"peak at p = {p_best}: E_w_min = {e_best:.6f}")
print(f"unweighted E_min = {sk.residual_error(s, sk.lsm(s)):.6f} (weights all 1)")

# coarse text plot
for p, e in rows[::7]:
    print(f"p = {p:4.2f}  {e:.5f}  " + "#" * int(round(e * 500)))

half = np.sqrt(0.5)
print("\nat p = 1/2 the weighted measurement equals the LSM:",
      np.allclose(sk.wlsm(s, [half, half]).matrix, sk.lsm(s).matrix))

if len(sys.argv) > 1:
    Path(sys.argv[1]).write_text(sweep_csv(rows))
    print("wrote", sys.argv[1])
