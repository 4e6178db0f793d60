#!/usr/bin/env python3
"""Log-log plot of the sweep errors written by `fbd sweep`.

    python3 scripts/plot_sweep.py OUT_DIR
"""

import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

if len(sys.argv) != 2:
    sys.exit(__doc__)
out = sys.argv[1]
tab = np.genfromtxt(os.path.join(out, "sweep_members.csv"), delimiter=",", names=True, comments="#")
fig, ax = plt.subplots(figsize=(5, 4))
for col in ("q_error", "stefan_moving", "neg1", "neg2", "neg3", "neg4"):
    ax.loglog(tab["eps"], tab[col], "o-", label=col)
ax.loglog(tab["eps"], tab["eps"] * tab[col][0] / tab["eps"][0], "k:", label="slope 1")
ax.set_xlabel("eps")
ax.legend(fontsize=7)
fig.tight_layout()
fig.savefig(os.path.join(out, "sweep.png"), dpi=120)
