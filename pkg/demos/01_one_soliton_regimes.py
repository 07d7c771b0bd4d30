"""
Loop, cusp and hump: one soliton in three regimes
=================================================

A single soliton is ``F = 1 + exp(2 eta)``.  Whether it looks like a loop,
a cusp or a hump in physical space depends only on ``lambda = 6 K omega``.
"""

# %%
# Pick one velocity and three dissipation values straddling the threshold.
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from vakhnenko import alpha_star, build_one_soliton, classify_regime, snapshot

v = 0.24
alphas = [0.1, alpha_star(v), 5.0]
for a in alphas:
    rc = classify_regime(a, v)
    print(f"alpha={a:.4f}  {rc.regime.value:5s}  lambda={rc.lam:.4f}  U_M={rc.U_M:.4f}")

# %%
# The amplitude drops as alpha grows, so the loop is always the tallest.
# At the cusp the amplitude is exactly 1/v.
print("cusp amplitude * v =", classify_regime(alpha_star(v), v).U_M * v)

# %%
# Sample the profiles.  The curve is parametrised by T; x_T < 0 marks the
# stretch that runs backwards and closes the loop.
fig, axes = plt.subplots(1, 3, figsize=(11, 3.2), sharey=True)
for ax, a in zip(axes, alphas):
    _, tau = build_one_soliton(a, v)
    prof = snapshot(tau, t=0.0, n_samples=1501)
    back = prof.xT < 0
    ax.plot(prof.x, prof.U, lw=1.2)
    ax.plot(prof.x[back], prof.U[back], ".", ms=2, color="C3")
    ax.set_title(f"alpha = {a:.3g} ({classify_regime(a, v).regime.value})")
    ax.set_xlabel("x")
axes[0].set_ylabel("U")
fig.tight_layout()
fig.savefig("one_soliton_regimes.png", dpi=120)

# %%
# The number of sign changes of x_T is the geometric version of the
# classification: two for a loop, none for a hump.
for a in alphas:
    prof = snapshot(build_one_soliton(a, v)[1], 0.0)
    print(f"alpha={a:.4f}  sign changes={prof.sign_changes}  min xT={prof.min_xT:.2e}")
