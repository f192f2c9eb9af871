"""Tour of the point-to-point feedback toolkit.

A single sender with noiseless feedback turns channel coding into control:
pick an unstable open-loop filter, let the feedback loop stabilize it, and
the achievable rate equals the open loop's instability, which in turn is
the Bode sensitivity integral of the closed loop. The classic one-pole
scheme makes every link of that chain explicit.
"""
import math

import numpy as np

from feedcap import (WHITE, bode_integral, feedback_transform, instability,
                     power_integral, rate_integral, sk_filter,
                     sk_recursion_simulate)
from feedcap.p2p_gaussian import random_stabilized_filter

print("one-pole scheme: pole at beta = sqrt(1+P), all quantities coincide")
print(f"{'P':>6} {'instability':>12} {'rate':>10} {'power':>10} "
      f"{'1/2 log2(1+P)':>14}")
for power in (0.5, 1.0, 3.0, 10.0):
    f = sk_filter(power)
    b = feedback_transform(f)
    print(f"{power:>6.1f} {instability(f):>12.8f} {rate_integral(b):>10.6f} "
          f"{power_integral(b):>10.6f} {0.5 * math.log2(1 + power):>14.8f}")

print("\nthe identity survives arbitrary stabilized filters (Bode):")
rng = np.random.default_rng(3)
for k in range(4):
    f = random_stabilized_filter(rng)
    pole_str = ", ".join(f"{abs(p):.3f}" for p in f.poles)
    print(f"  filter {k}: |poles| = [{pole_str}]  "
          f"instability = {instability(f):.8f}  "
          f"bode integral = {bode_integral(f):.8f}")

print("\nscalar recursion Monte Carlo (P = 1, 25 uses, 10000 trials):")
rep = sk_recursion_simulate(1.0, 25, seed=11, trials=10000)
print(f"  MSE exponent:   {rep.exponent:.6f}  (capacity {0.5:.6f})")
print(f"  transmit power: {rep.empirical_power:.4f}  (budget 1.0)")
print(f"  state trajectory of trial 0, first 8 steps:")
print("   ", np.round(rep.x_trajectory[:8], 4))
