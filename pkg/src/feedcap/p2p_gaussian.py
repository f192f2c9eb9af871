"""Point-to-point stationary Gaussian feedback channel machinery.

Rational open-loop filters F(z) are held in zero-pole-gain form,

    F(z) = gain * prod_i (z - zero_i) / prod_j (z - pole_j),

so the open-loop instability sum needs no root finding; only the
closed-loop characteristic polynomial is factored (companion-matrix
eigenvalues via numpy.roots). The core identities exercised here:

  * instability(F) = sum of log|p| over unstable open-loop poles;
  * the Bode sensitivity integral of log|1/(1-F)| equals instability(F)
    whenever the closed loop is stable;
  * the one-pole filter at beta = sqrt(1+P) closes the chain
    instability = rate integral of log|1+B| = 1/2 log(1+P) with
    feedback power exactly P over white noise.

Integrals are composite Simpson on [-pi, pi] with automatic point doubling
until successive values agree below 1e-8 (Richardson gate), capped at 2^20
points. Rates default to bits.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import SolverError
from .sum_capacity import _LN

UNIT_CIRCLE_TOL = 1e-9
RICHARDSON_TOL = 1e-8
MAX_QUAD_POINTS = 2 ** 20


@dataclass(frozen=True)
class ZpkFilter:
    """Causal rational filter in zero-pole-gain form."""
    zeros: tuple
    poles: tuple
    gain: complex

    def __post_init__(self):
        object.__setattr__(self, "zeros", tuple(complex(z) for z in self.zeros))
        object.__setattr__(self, "poles", tuple(complex(p) for p in self.poles))
        object.__setattr__(self, "gain", complex(self.gain))
        if len(self.zeros) > len(self.poles):
            raise ValueError("filter must be proper: #zeros <= #poles")
        vals = self.zeros + self.poles + (self.gain,)
        if any(not (math.isfinite(v.real) and math.isfinite(v.imag))
               for v in vals):
            raise ValueError("filter parameters must be finite")
        for p in self.poles:
            if abs(abs(p) - 1.0) < UNIT_CIRCLE_TOL:
                raise ValueError(f"pole {p} sits on the unit circle")

    def response(self, z):
        """Evaluate F at points z (vectorized)."""
        z = np.asarray(z, dtype=complex)
        num = np.full(z.shape, self.gain, dtype=complex)
        for zz in self.zeros:
            num = num * (z - zz)
        den = np.ones(z.shape, dtype=complex)
        for p in self.poles:
            den = den * (z - p)
        return num / den


@dataclass(frozen=True)
class Arma1Spectrum:
    """Rational first-order noise spectrum with selectable modulus convention.

    The squared convention is the standard power spectral density
    |1 + alpha e^{jw}|^2 / |1 + pole_coef e^{jw}|^2; as_written drops the
    squares. Both are positive for |alpha| <= 1, |pole_coef| < 1.
    """
    alpha: float
    pole_coef: float
    convention: str = "squared"

    def __post_init__(self):
        if not -1.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [-1, 1]")
        if not -1.0 < self.pole_coef < 1.0:
            raise ValueError("pole_coef must lie strictly inside (-1, 1)")
        if self.convention not in ("squared", "as-written"):
            raise ValueError("convention must be 'squared' or 'as-written'")

    def density(self, omega):
        z = np.exp(1j * np.asarray(omega, dtype=float))
        mag = np.abs(1.0 + self.alpha * z) / np.abs(1.0 + self.pole_coef * z)
        return mag ** 2 if self.convention == "squared" else mag


WHITE = Arma1Spectrum(alpha=0.0, pole_coef=0.0)


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite quadrature on [-pi, pi]: rule and starting point count."""
    points: int = 4096
    rule: str = "simpson"

    def __post_init__(self):
        if self.points < 64 or self.points % 2:
            raise ValueError("points must be an even integer >= 64")
        if self.rule not in ("simpson", "trapezoid"):
            raise ValueError("rule must be 'simpson' or 'trapezoid'")


DEFAULT_QUAD = QuadratureSpec()


def _integrate_once(func, points, rule):
    omega = np.linspace(-np.pi, np.pi, points + 1)
    vals = func(omega)
    if not np.all(np.isfinite(vals)):
        raise SolverError("integrand not finite on the quadrature grid")
    h = omega[1] - omega[0]
    if rule == "trapezoid":
        return float(h * (0.5 * (vals[0] + vals[-1]) + vals[1:-1].sum()))
    w = np.ones(points + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return float(h / 3.0 * (w * vals).sum())


def periodic_integral(func, quad=DEFAULT_QUAD):
    """(1/2pi) integral of func over [-pi, pi] with the Richardson gate.

    Doubles the point count until two successive values agree below 1e-8;
    raises if the cap of 2^20 points is reached without agreement.
    """
    points = quad.points
    prev = _integrate_once(func, points, quad.rule) / (2 * np.pi)
    while points < MAX_QUAD_POINTS:
        points *= 2
        cur = _integrate_once(func, points, quad.rule) / (2 * np.pi)
        if abs(cur - prev) < RICHARDSON_TOL:
            return cur
        prev = cur
    raise SolverError(
        f"quadrature failed to settle below {RICHARDSON_TOL} within "
        f"{MAX_QUAD_POINTS} points")


def sk_filter(power):
    """One-pole open loop achieving the feedback capacity over white noise.

    F(z) = -(beta^2 - 1)/beta * 1/(z - beta) with beta = sqrt(1 + P):
    a single pole at beta and gain -(beta^2 - 1)/beta.
    """
    if power <= 0.0:
        raise ValueError("power must be positive")
    beta = math.sqrt(1.0 + power)
    return ZpkFilter(zeros=(), poles=(beta,), gain=-(beta * beta - 1.0) / beta)


def instability(f, base="bits"):
    """Sum of log|p| over open-loop poles outside the unit circle."""
    total = 0.0
    for p in f.poles:
        if abs(p) > 1.0:
            total += math.log(abs(p))
    return total / _LN[base]


def _char_poly(f):
    # characteristic polynomial of the loop: denominator of 1 - F
    d = np.poly(f.poles) if f.poles else np.array([1.0 + 0j])
    n = np.poly(f.zeros) if f.zeros else np.array([1.0 + 0j])
    n = f.gain * n
    q = d.astype(complex).copy()
    q[len(q) - len(n):] -= n
    return d, q


def feedback_transform(f):
    """Closed-loop filter B = F / (1 - F) in zero-pole-gain form.

    Keeps the zeros of F; the poles become the roots of the characteristic
    polynomial d - gain*n, found as companion-matrix eigenvalues.
    """
    if f.gain == 0:
        return ZpkFilter(zeros=(), poles=(), gain=0.0)
    d, q = _char_poly(f)
    lead = q[0]
    if abs(lead) < 1e-12 * max(1.0, np.abs(q).max()):
        raise SolverError("degenerate loop: 1 - F drops degree "
                          "(leading coefficient cancels)")
    poles = np.roots(q)
    return ZpkFilter(zeros=f.zeros, poles=tuple(poles),
                     gain=f.gain / lead)


def _require_stable(b):
    for p in b.poles:
        if abs(p) >= 1.0:
            raise SolverError(f"filter has a pole at {p} (|.| = {abs(p):.6f}) "
                              "outside or on the unit circle")


def power_integral(b, s_z=WHITE, quad=DEFAULT_QUAD):
    """Feedback transmit power (1/2pi) integral of |B|^2 S_Z over [-pi, pi]."""
    _require_stable(b)
    if b.gain == 0:
        return 0.0
    return periodic_integral(
        lambda om: np.abs(b.response(np.exp(1j * om))) ** 2 * s_z.density(om),
        quad)


def rate_integral(b, quad=DEFAULT_QUAD, base="bits"):
    """Achievable rate (1/2pi) integral of 1/2 log|1 + B|^2 over [-pi, pi]."""
    _require_stable(b)
    if b.gain == 0:
        return 0.0

    def integrand(om):
        mag = np.abs(1.0 + b.response(np.exp(1j * om)))
        if np.min(mag) < 1e-14:
            raise SolverError("1 + B vanishes on the quadrature grid; "
                              "the rate integrand is singular")
        return np.log(mag) / _LN[base]

    return periodic_integral(integrand, quad)


def bode_integral(f, quad=DEFAULT_QUAD, base="bits"):
    """Sensitivity integral (1/2pi) integral of log|1/(1-F)| over [-pi, pi].

    Requires the closed loop to be stable (all characteristic roots inside
    the unit circle); equals instability(f) up to quadrature error.
    """
    d, q = _char_poly(f)
    lead = q[0]
    if abs(lead) < 1e-12 * max(1.0, np.abs(q).max()):
        raise SolverError("degenerate loop: 1 - F drops degree")
    roots = np.roots(q)
    for r in roots:
        if abs(r) >= 1.0:
            raise SolverError(f"closed loop unstable: characteristic root at "
                              f"{r} (|.| = {abs(r):.6f})")

    def integrand(om):
        z = np.exp(1j * om)
        num = np.ones(z.shape)
        for p in f.poles:
            num = num * np.abs(z - p)
        den = np.full(z.shape, abs(lead))
        for r in roots:
            den = den * np.abs(z - r)
        return np.log(num / den) / _LN[base]

    return periodic_integral(integrand, quad)


def random_stabilized_filter(rng, n_unstable=None, pole_range=(1.05, 2.0),
                             radius_margin=0.9, gain_grid=None):
    """Draw a random open loop with unstable poles that 1/(1-F) stabilizes.

    Picks 1-3 real poles in pole_range, n-1 real zeros inside the unit
    disk, then scans a gain grid for a value placing every closed-loop
    characteristic root below radius_margin. A static gain cannot stabilize
    two or more such poles, hence the zeros. Retries with fresh draws and
    raises only if many consecutive draws fail.
    """
    if gain_grid is None:
        gain_grid = np.linspace(-50.0, 50.0, 2001)
    for _attempt in range(50):
        k = int(n_unstable) if n_unstable else int(rng.integers(1, 4))
        poles = tuple(rng.uniform(pole_range[0], pole_range[1], size=k))
        zeros = tuple(rng.uniform(-0.8, 0.8, size=k - 1))
        for g in gain_grid:
            if g == 0.0:
                continue
            cand = ZpkFilter(zeros=zeros, poles=poles, gain=float(g))
            _d, q = _char_poly(cand)
            if abs(q[0]) < 1e-12:
                continue
            roots = np.roots(q)
            if np.max(np.abs(roots)) < radius_margin:
                return cand
    raise SolverError("no stabilizing gain found after 50 random draws")


def entropy_rate(s_z, quad=DEFAULT_QUAD, base="bits"):
    """Entropy rate of the stationary Gaussian source with spectrum S_Z.

    (1/2pi) integral of 1/2 log(2 pi e S_Z); a unit white spectrum gives
    1/2 log(2 pi e).
    """

    def integrand(om):
        s = s_z.density(om)
        if np.min(s) <= 0.0:
            raise SolverError("spectrum must be positive on the grid")
        return 0.5 * np.log(2.0 * np.pi * np.e * s) / _LN[base]

    return periodic_integral(integrand, quad)


@dataclass(frozen=True)
class SkSimReport:
    """Scalar feedback-code Monte Carlo summary (rates in bits)."""
    power: float
    n_steps: int
    trials: int
    seed: int
    mse: float
    relative_mse: float
    exponent: float
    empirical_power: float
    x_trajectory: np.ndarray
    rng_algorithm: str = "philox4x64 keyed by (seed, trial)"


def sk_recursion_simulate(power, n_steps, seed, trials=10000, noise_var=1.0):
    """Simulate the scalar recursion X_i = beta (X_{i-1} - a Y_{i-1}).

    beta = sqrt(1 + P), a = (beta^2 - 1)/beta^2; the real message is uniform
    on (0, 1), mapped to X_1 = sqrt(12 P) (M - 1/2) so the transmit power is
    P from the first step. The receiver combines all n outputs into the
    linear estimate of X_1 whose error is exactly beta^{-n} X_{n+1}, and the
    reported exponent is -(1/2n) log2 of the message MSE relative to the
    prior variance 1/12, which converges to log2(beta) = 1/2 log2(1+P).
    """
    if power <= 0.0:
        raise ValueError("power must be positive")
    if n_steps < 1 or trials < 1:
        raise ValueError("n_steps and trials must be >= 1")
    beta = math.sqrt(1.0 + power)
    a = (beta * beta - 1.0) / (beta * beta)
    scale = math.sqrt(12.0 * power)
    sq = 0.0
    pow_acc = 0.0
    traj = None
    for trial in range(trials):
        key = (int(seed) & ((1 << 64) - 1)) | (trial << 64)
        g = np.random.Generator(np.random.Philox(key=key))
        m = g.random()
        z = g.normal(0.0, math.sqrt(noise_var), size=n_steps) if noise_var > 0 \
            else np.zeros(n_steps)
        x = scale * (m - 0.5)
        x1 = x
        xs = np.empty(n_steps)
        comb = 0.0
        wt = 1.0
        for i in range(n_steps):
            xs[i] = x
            pow_acc += x * x
            y = x + z[i]
            comb += wt * y
            wt /= beta
            x = beta * (x - a * y)
        if traj is None:
            traj = xs
        xhat1 = a * comb
        merr = (x1 - xhat1) / scale
        sq += merr * merr
    mse = sq / trials
    rel = mse / (1.0 / 12.0)
    return SkSimReport(
        power=float(power), n_steps=n_steps, trials=trials, seed=int(seed),
        mse=mse, relative_mse=rel,
        exponent=-math.log2(rel) / (2.0 * n_steps),
        empirical_power=pow_acc / (trials * n_steps),
        x_trajectory=traj)


@dataclass(frozen=True)
class SearchResult:
    """Best member of the searched filter family."""
    filter: ZpkFilter
    rate: float
    power: float


def grid_capacity_search(s_z, power, pole_grid=None, gains_per_pole=2,
                         quad=DEFAULT_QUAD, base="bits"):
    """Search one-real-pole feedback filters B(z) = g / (z - p) for rate.

    For each stable pole candidate the power integral scales as g^2, so the
    admissible gain magnitude is pinned by the power budget; candidates are
    both signs at that boundary plus, when gains_per_pole > 2, interior
    points (all feasible by construction). The best rate_integral wins.
    Candidates whose rate integrand is near-singular are skipped.

    Over white noise the optimum is p = 1/sqrt(1+P) with rate
    1/2 log2(1+P); grid resolution bounds the achieved gap.
    """
    if power <= 0.0:
        raise ValueError("power must be positive")
    if pole_grid is None:
        pole_grid = np.linspace(0.0, 0.99, 100)
    best = None
    for p in np.asarray(pole_grid, dtype=float):
        if abs(p) >= 1.0 - UNIT_CIRCLE_TOL:
            continue
        unit = ZpkFilter(zeros=(), poles=(p,), gain=1.0)
        u = power_integral(unit, s_z, quad)
        if u <= 0.0:
            continue
        g_max = math.sqrt(power / u)
        if gains_per_pole <= 2:
            gains = [-g_max, g_max]
        else:
            inner = np.linspace(-g_max, g_max, gains_per_pole - 2)
            gains = [-g_max, g_max] + [g for g in inner if g != 0.0]
        for g in gains:
            cand = ZpkFilter(zeros=(), poles=(p,), gain=g)
            try:
                r = rate_integral(cand, quad, base)
            except SolverError:
                continue
            if best is None or r > best.rate:
                best = SearchResult(filter=cand, rate=r,
                                    power=g * g * u)
    if best is None:
        raise SolverError("no feasible filter in the searched family")
    return best
