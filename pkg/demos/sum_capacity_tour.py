"""Tour of the sum-capacity solver.

Walks the capacity crossing for a few sender counts, showing how the root
phi(P) drifts from 1 (independent senders) toward N (full coherence) as
power grows, and how much feedback buys over the no-feedback sum capacity
(1/2) log2(1 + NP).
"""
import math

from feedcap import MacParams, gamma_star, solve_phi

print("phi(P) and the feedback gain over the no-feedback baseline")
print(f"{'N':>3} {'P':>7} {'phi':>10} {'rho':>8} {'C_fb':>10} "
      f"{'C_nofb':>10} {'gain %':>7}")
for n in (2, 3, 6):
    for power in (0.1, 1.0, 5.0, 20.0):
        sol = solve_phi(MacParams(n_senders=n, power=power))
        base = 0.5 * math.log2(1.0 + n * power)
        gain = 100.0 * (sol.c1 / base - 1.0)
        print(f"{n:>3} {power:>7.2f} {sol.phi:>10.6f} {sol.rho:>8.4f} "
              f"{sol.c1:>10.6f} {base:>10.6f} {gain:>6.1f}%")

print()
print("the crossing really is a crossing: C1 rises, C2 falls through it")
params = MacParams(n_senders=3, power=2.0)
sol = solve_phi(params)
from feedcap import c1, c2
for phi in (1.0, sol.phi - 0.3, sol.phi, sol.phi + 0.3, 2.9):
    tag = "  <-- root" if abs(phi - sol.phi) < 1e-12 else ""
    print(f"  phi={phi:8.5f}  C1={c1(params, phi):8.5f}  "
          f"C2={c2(params, phi):8.5f}{tag}")

print()
print("every root carries an optimal converse weight gamma* in (0, 1):")
for n, power in ((2, 1.0), (3, 2.0), (4, 10.0)):
    p = MacParams(n_senders=n, power=power)
    s = solve_phi(p)
    print(f"  N={n} P={power:<5} gamma*={gamma_star(p, s.phi):.6f}")
