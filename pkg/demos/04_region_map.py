"""
Regime map over (alpha, v)
==========================

Classify a grid of parameters and overlay the threshold curve
``alpha = 1/sqrt(6 v)``.
"""

# %%
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from vakhnenko import alpha_star, region_scan

scan = region_scan((0.0, 3.0), (0.05, 1.0), (60, 60))
step = scan.alphas[1] - scan.alphas[0]
off = [abs(scan.alphas[i] - alpha_star(scan.vs[j])) / step for i, j in scan.transition_cells()]
print(f"{len(off)} transition cells, worst distance {max(off):.2f} grid steps")

# %%
# Loops fill the low-alpha corner; amplitude falls off with both alpha and v.
fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
ext = [scan.vs[0], scan.vs[-1], scan.alphas[0], scan.alphas[-1]]
ax1.imshow(scan.code, origin="lower", extent=ext, aspect="auto", cmap="Greys")
vv = np.linspace(scan.vs[0], scan.vs[-1], 200)
ax1.plot(vv, [alpha_star(v) for v in vv], "r", lw=1)
ax1.set(xlabel="v", ylabel="alpha", title="dark: loop, light: hump")
im = ax2.imshow(np.log10(scan.U_M), origin="lower", extent=ext, aspect="auto")
fig.colorbar(im, ax=ax2, label="log10 U_M")
ax2.set(xlabel="v", title="amplitude")
fig.tight_layout()
fig.savefig("region_map.png", dpi=120)
