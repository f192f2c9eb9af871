"""Tour of the converse machinery.

The converse bounds the sum rate through a dependence-balance argument:
the joint input-output information can exceed the average of per-sender
conditional informations only by borrowing correlation the channel itself
must spend power to build. The gap is nonnegative everywhere and closes
exactly at the symmetric covariance induced by the capacity root phi(P).
"""
import numpy as np

from feedcap import (MacParams, dependence_balance_gap, g_value, gamma_star,
                     phi_star, solve_phi, symmetric_cov)
from feedcap.sum_capacity import g_derivative, g_derivative_check

n, power = 3, 2.0
params = MacParams(n_senders=n, power=power)
sol = solve_phi(params)

print(f"dependence balance gap along symmetric covariances, N={n}, P={power}")
print(f"{'rho':>8} {'gap (bits)':>12}")
for rho in np.linspace(0.0, 0.8, 9):
    gap = dependence_balance_gap(symmetric_cov(n, power, rho))
    mark = "  <-- optimum rho=(phi-1)/(N-1)" \
        if abs(rho - sol.rho) < 0.05 else ""
    print(f"{rho:>8.2f} {gap:>12.6f}{mark}")
print(f"exact optimum rho = {sol.rho:.6f}, "
      f"gap there = {dependence_balance_gap(symmetric_cov(n, power, sol.rho)):.2e}")

gs = gamma_star(params, sol.phi)
print(f"\nweighted converse: gamma* = {gs:.6f}")
print(f"  phi*(gamma*, P) = {phi_star(n, gs, power):.8f} "
      f"(the capacity root is {sol.phi:.8f})")
print(f"  g(gamma*, P)    = {g_value(n, gs, power):.8f} "
      f"(the sum capacity is {sol.c1:.8f})")

print("\nphi* stays inside its analytic window for heavier weights:")
for gamma in (1.5, 2.5, 4.0):
    lo = (n + gamma - 1.0) / (2.0 * gamma)
    ph = phi_star(n, gamma, power)
    print(f"  gamma={gamma:<4} {lo:.4f} <= phi*={ph:.4f} < {n / 2.0}")

print("\nclosed-form derivative of the weighted value vs finite differences:")
for gamma in (1.5, 2.5):
    d = g_derivative(n, gamma, power)
    err = g_derivative_check(n, gamma, power)
    print(f"  gamma={gamma:<4} g'(x)={d:.8f}  |closed - numeric| = {err:.1e}")
