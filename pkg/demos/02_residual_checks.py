"""
How good are the tau functions?
===============================

Every construction can be checked exactly, term by term, because ``F`` is a
finite sum of exponentials.  This script runs those checks on the coupled
model and on the exact model side by side.
"""

# %%
import numpy as np

from vakhnenko import (build_one_soliton, combined_bilinear_residual, derive_coefficients,
                       exact_bilinear_residual, pde_residual)
from vakhnenko.soliton import SolitonParams

alpha, v = 0.5, 0.24

# %%
# The coupled one-soliton leaves a residual in the eliminated bilinear form.
# Only the lowest exponential order cancels.
_, tau = build_one_soliton(alpha, v)
r = combined_bilinear_residual(tau.F, alpha)
print("coupled, bilinear:", r.passed, f"{r.max_relative_coefficient:.3g} at {r.offending_exponent}")
print("coupled, PDE grid:", f"{pde_residual(tau).grid_max_abs:.3g}")

# %%
# With omega (4K^2 + alpha) = K the same ansatz solves the transformed
# equation to rounding error.
_, tau = build_one_soliton(alpha, v, dispersion="exact")
print("exact, bilinear:  ", exact_bilinear_residual(tau.F, alpha).passed)
print("exact, PDE grid:  ", f"{pde_residual(tau).grid_max_abs:.3g}")

# %%
# Two solitons.  Solve for A, B, C one exponential order at a time and
# compare with the closed forms.
params = SolitonParams.from_velocities(1.2, [0.24, 0.12])
rep = derive_coefficients(params)
for name, s, p, ok in zip("ABC", rep.solved, rep.printed, rep.formula_agrees):
    print(f"{name}: solved {s:.12f}   closed form {p:.12f}   {'agree' if ok else 'differ'}")
print("residual after the solve:", f"{rep.residual.max_relative_coefficient:.3g}",
      "at", rep.residual.offending_exponent)

# %%
# As alpha -> 0 the solved C approaches the dissipation-free value.
for a in (1e-1, 1e-3, 1e-5):
    p = SolitonParams.from_velocities(a, [0.24, 0.12])
    K1, K2 = p.modes[0].K, p.modes[1].K
    c0 = (K1 - K2) ** 2 * (K1**2 - K1 * K2 + K2**2) / ((K1 + K2) ** 2 * (K1**2 + K1 * K2 + K2**2))
    print(f"alpha={a:g}  C solved={derive_coefficients(p).solved[2]:.8f}  limit={c0:.8f}")
