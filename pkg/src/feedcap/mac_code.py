"""Optimal linear feedback code for the N-sender AWGN multiple access
channel: LQG controller synthesis, exact covariance propagation, Monte
Carlo simulation, and the innovation-form recursion.

The code is built on the symmetric diagonal system A = beta * diag(omega_j)
with omega_j the n-th roots of unity and B the all-ones column. Each sender
runs the state recursion

    S_i(j) = beta omega_j S_{i-1}(j) + Y_{i-1},      Y_0 = 0,

transmits X_ji = -c_j S_i(j), and the decoder mirrors the same recursion
from a zero start, giving the exact error identity M - Mhat = A^{-n} S_n on
every trajectory. The gains c_j come from the Riccati solution G through
C = (B'GB + 1)^{-1} B'GA, which stabilizes A - BC.

Messages are complex points uniform on the unit square (0,1)x(0,1); they
are centered (1/2 subtracted per axis) before seeding the state, so the
initial covariance is diagonal with 1/6 per sender (1/12 per real axis).
Channel noise is circular complex Gaussian with unit total variance (1/2
per axis). Rates and exponents are reported per complex symbol in bits by
default.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import SolverError
from .riccati import dale_solve, dare_circulant
from .sum_capacity import MacParams, solve_phi, _LN

CENTER = 0.5 + 0.5j
MESSAGE_VAR = 1.0 / 6.0           # two uniform(0,1) axes, 1/12 each
RNG_ALGORITHM = "philox4x64 keyed by (seed, trial)"
_CHUNK = 1024                     # fixed so results do not depend on threads


@dataclass(frozen=True)
class MacSystem:
    """Symmetric code system: A = beta * diag(n-th roots of unity), B = ones."""
    n: int
    beta: float
    A: np.ndarray
    B: np.ndarray

    @property
    def betas(self):
        return (self.beta,) * self.n

    @property
    def phases(self):
        return tuple(np.exp(2j * np.pi * np.arange(self.n) / self.n))

    @property
    def a_diag(self):
        return np.diag(self.A)


@dataclass(frozen=True)
class LinearController:
    """Row of per-sender feedback gains C = [c_1 ... c_n]."""
    gains: np.ndarray


@dataclass(frozen=True)
class SimReport:
    """Aggregated Monte Carlo results; exponents are in bits."""
    n_steps: int
    trials: int
    per_sender_mse: np.ndarray
    mse_exponents: np.ndarray
    empirical_powers: np.ndarray
    seed: int
    rng_algorithm: str = RNG_ALGORITHM


@dataclass(frozen=True)
class ExactStats:
    """Covariance-propagated counterparts of the Monte Carlo estimates."""
    per_sender_mse: np.ndarray
    mse_exponents: np.ndarray
    mean_powers: np.ndarray


def build_system(n, beta):
    """Symmetric system with phases at the n-th roots of unity."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not beta > 1.0:
        raise ValueError("beta must exceed 1 (beta = 1 carries zero rate)")
    w = np.exp(2j * np.pi * np.arange(n) / n)
    A = np.diag(beta * w)
    B = np.ones((n, 1), dtype=complex)
    return MacSystem(n=n, beta=float(beta), A=A, B=B)


def lqg_controller(sys):
    """Stabilizing gains C = (B'GB + 1)^{-1} B'GA from the Riccati solution.

    G has constant row sums, so B'G = lambda_1 B' and every gain has the
    same magnitude lambda_1 beta / (1 + n lambda_1).
    """
    G = dare_circulant(sys.n, sys.beta).G
    s = 1.0 + (sys.B.conj().T @ G @ sys.B).real.item()
    gains = np.asarray(sys.B.conj().T @ G @ sys.A).ravel() / s
    ctrl = LinearController(gains=gains)
    rad = closed_loop_radius(sys, ctrl)
    if rad >= 1.0:
        raise SolverError(f"controller failed to stabilize: radius {rad}")
    return ctrl


def closed_loop(sys, ctrl):
    """State matrix A - BC of the loop driven only by channel noise."""
    return sys.A - sys.B @ ctrl.gains[None, :]


def closed_loop_radius(sys, ctrl):
    from .matrix_core import spectral_radius
    return spectral_radius(closed_loop(sys, ctrl))


def beta_for_power(n, power, tol=1e-12):
    """Gain beta = (1 + n P phi(P))^{1/(2n)} meeting the power constraint P.

    With this beta the Riccati diagonal is exactly P and the top eigenvalue
    lambda_1 is P phi(P), so the code transmits at power P per sender and
    n log2(beta) equals the sum capacity.
    """
    if power <= 0.0:
        raise ValueError("power must be positive")
    phi = solve_phi(MacParams(n_senders=n, power=power), tol=tol).phi
    return float((1.0 + n * power * phi) ** (1.0 / (2 * n)))


def encode_step(sys, ctrl, state, y_prev):
    """One encoder step from the previous state and channel output.

    Returns (new_state, per_sender_symbols, channel_input) where
    new_state(j) = beta omega_j state(j) + y_prev and the channel input is
    the sum of the per-sender symbols -c_j new_state(j).
    """
    state = np.asarray(state, dtype=complex)
    new_state = sys.a_diag * state + y_prev
    symbols = -ctrl.gains * new_state
    return new_state, symbols, complex(symbols.sum())


def decode(sys, y_history):
    """Decode a centered message estimate from the output sequence.

    Mirrors the encoder recursion from a zero start (the step-1 input is
    the conventional Y_0 = 0, so the final element of y_history never
    enters) and returns Mhat = -A^{-n} Shat_n. The estimate is centered:
    add 1/2 per axis to land back in the unit square.
    """
    y = np.asarray(y_history, dtype=complex).ravel()
    n_steps = y.size
    if n_steps < 1:
        raise ValueError("y_history must contain at least one output")
    a = sys.a_diag
    sh = np.zeros(sys.n, dtype=complex)
    prev = 0.0 + 0.0j
    for i in range(n_steps):
        sh = a * sh + prev
        prev = y[i]
    return -(a ** (-n_steps)) * sh


def exact_mse(sys, ctrl, n_steps, k0=None):
    """Per-sender MSE from stationary closed-loop covariance propagation.

    Iterates K_i = (A - BC) K_{i-1} (A - BC)' + BB' from K_0 (default: the
    uniform-message diagonal, 1/6 per sender) and returns
    beta^{-2 n_steps} diag(K_n). The recursion applies the stationary loop
    from the very first step; simulate() has no feedback term at step 1
    (the first output does not exist yet), a transient difference that
    decays at the closed-loop spectral radius. exact_trajectory_stats
    propagates that exact timing instead.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    K = np.eye(sys.n, dtype=complex) * MESSAGE_VAR if k0 is None \
        else np.asarray(k0, dtype=complex).copy()
    F = closed_loop(sys, ctrl)
    BBt = (sys.B @ sys.B.conj().T)
    for _ in range(n_steps):
        K = F @ K @ F.conj().T + BBt
        K = (K + K.conj().T) / 2
    return sys.beta ** (-2.0 * n_steps) * K.diagonal().real


def exact_trajectory_stats(sys, ctrl, n_steps, noise_var=1.0):
    """Exact covariances under the same timing simulate() uses.

    Step 1 is pure state amplification (Y_0 = 0); noise and feedback enter
    from step 2 on. Returns the per-sender MSE at n_steps, its exponents,
    and the per-sender powers averaged over steps 1..n_steps.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    A = sys.A
    F = closed_loop(sys, ctrl)
    BBt = sys.B @ sys.B.conj().T
    K = np.eye(sys.n, dtype=complex) * MESSAGE_VAR
    diag_sum = np.zeros(sys.n)
    for i in range(1, n_steps + 1):
        if i == 1:
            K = A @ K @ A.conj().T
        else:
            K = F @ K @ F.conj().T + noise_var * BBt
        K = (K + K.conj().T) / 2
        diag_sum += K.diagonal().real
    mse = sys.beta ** (-2.0 * n_steps) * K.diagonal().real
    powers = (np.abs(ctrl.gains) ** 2) * diag_sum / n_steps
    return ExactStats(per_sender_mse=mse,
                      mse_exponents=-np.log2(mse) / (2.0 * n_steps),
                      mean_powers=powers)


def exact_step_table(sys, ctrl, n_steps, noise_var=1.0):
    """Per-step exact decoding MSE and transmit powers for plotting.

    Yields (step, mse_row, power_row) for step = 1..n_steps under the same
    timing as exact_trajectory_stats: mse_row(j) = beta^{-2 step} (K_step)_jj
    and power_row(j) = |c_j|^2 (K_step)_jj.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    A = sys.A
    F = closed_loop(sys, ctrl)
    BBt = sys.B @ sys.B.conj().T
    K = np.eye(sys.n, dtype=complex) * MESSAGE_VAR
    gains_sq = np.abs(ctrl.gains) ** 2
    for i in range(1, n_steps + 1):
        if i == 1:
            K = A @ K @ A.conj().T
        else:
            K = F @ K @ F.conj().T + noise_var * BBt
        K = (K + K.conj().T) / 2
        diag = K.diagonal().real
        yield i, sys.beta ** (-2.0 * i) * diag, gains_sq * diag


def _trial_stream(seed, trial):
    # 128-bit Philox key: low word the run seed, high word the trial index
    key = (int(seed) & ((1 << 64) - 1)) | (int(trial) << 64)
    return np.random.Generator(np.random.Philox(key=key))


def _run_chunk(sys, ctrl, n_steps, seed, trials_range, noise_var):
    n = sys.n
    a = sys.a_diag
    count = len(trials_range)
    msgs = np.empty((count, n), dtype=complex)
    noise = np.empty((count, n_steps), dtype=complex)
    scale = math.sqrt(noise_var / 2.0)
    for row, trial in enumerate(trials_range):
        g = _trial_stream(seed, trial)
        u = g.random(size=(n, 2))
        msgs[row] = u[:, 0] + 1j * u[:, 1]
        z = g.normal(0.0, scale, size=(n_steps, 2)) if noise_var > 0 \
            else np.zeros((n_steps, 2))
        noise[row] = z[:, 0] + 1j * z[:, 1]
    S = msgs - CENTER
    Sh = np.zeros_like(S)
    y = np.zeros(count, dtype=complex)
    pow_acc = np.zeros(n)
    for i in range(n_steps):
        S = S * a + y[:, None]
        Sh = Sh * a + y[:, None]
        symbols = -ctrl.gains * S
        pow_acc += (np.abs(symbols) ** 2).sum(axis=0)
        y = symbols.sum(axis=1) + noise[:, i]
    mhat = -(a ** (-n_steps)) * Sh
    err = (msgs - CENTER) - mhat
    return (np.abs(err) ** 2).sum(axis=0), pow_acc


def simulate(sys, ctrl, n_steps, trials, seed, noise_var=1.0, threads=1):
    """Monte Carlo run of the code over trials independent messages.

    Every trial draws its message and noise from its own counter-based
    stream keyed by (seed, trial index), so the report is bit-identical
    for a fixed seed regardless of thread count or execution order.
    Aggregation happens over fixed-size chunks in index order.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if seed < 0 or int(seed) >> 64:
        raise ValueError("seed must fit in an unsigned 64-bit integer")
    chunks = [range(lo, min(lo + _CHUNK, trials))
              for lo in range(0, trials, _CHUNK)]
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(
                lambda c: _run_chunk(sys, ctrl, n_steps, seed, c, noise_var),
                chunks))
    else:
        parts = [_run_chunk(sys, ctrl, n_steps, seed, c, noise_var)
                 for c in chunks]
    sq_err = np.zeros(sys.n)
    pow_acc = np.zeros(sys.n)
    for se, pa in parts:
        sq_err += se
        pow_acc += pa
    mse = sq_err / trials
    return SimReport(
        n_steps=n_steps, trials=trials,
        per_sender_mse=mse,
        mse_exponents=-np.log2(mse) / (2.0 * n_steps),
        empirical_powers=pow_acc / (trials * n_steps),
        seed=int(seed))


def asymptotic_powers(sys, ctrl):
    """Stationary per-sender powers |c_j|^2 Kbar_jj from the Lyapunov solution."""
    F = closed_loop(sys, ctrl)
    kbar = dale_solve(F, sys.B @ sys.B.conj().T)
    return (np.abs(ctrl.gains) ** 2) * kbar.diagonal().real


def kramer_innovation_step(sys, k_state, x_state, y_prev):
    """One step of the innovation-form code.

    The state transmits its own estimation error scaled by A:
        X_i = A (X_{i-1} - K B (1 + B'KB)^{-1} Y_{i-1})
    and the covariance K advances through the Riccati recursion. At the
    Riccati fixed point the covariance is stationary. For n = 1 this is the
    classic scalar recursion with coefficient (beta^2 - 1)/beta^2.

    Returns (next_x, next_k).
    """
    K = np.asarray(k_state, dtype=complex)
    x = np.asarray(x_state, dtype=complex)
    a = sys.a_diag
    kb = (K @ sys.B).ravel()
    s = 1.0 + (sys.B.conj().T @ K @ sys.B).real.item()
    x_next = a * (x - kb / s * y_prev)
    akb = (a * kb)[:, None]
    k_next = sys.A @ K @ sys.A.conj().T - (akb @ akb.conj().T) / s
    k_next = (k_next + k_next.conj().T) / 2
    return x_next, k_next


def stationary_posterior_variances(sys, n_steps):
    """Prior and posterior per-sender variances under stationary coding.

    Starts the innovation code at its stationary covariance Ktilde and
    propagates the cross-covariance J_i = Cov(U, X_i) of the initial state
    U with the running state. Outputs are mutually independent under
    innovation coding, so the posterior variance after n outputs is the
    prior minus the accumulated per-output energy:

        Var(U_m | Y^n) = Ktilde_mm - sum_i |(J_i B)_m|^2 / (1 + B'Ktilde B)

    which collapses to Ktilde_mm beta^{-2n}.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    K = dare_circulant(sys.n, sys.beta).G
    s = 1.0 + (sys.B.conj().T @ K @ sys.B).real.item()
    kb = K @ sys.B
    J = K.copy()
    acc = np.zeros(sys.n)
    for _ in range(n_steps):
        jb = J @ sys.B
        acc += (np.abs(jb.ravel()) ** 2) / s
        J = (J - (jb @ kb.conj().T) / s) @ sys.A.conj().T
    prior = K.diagonal().real
    return prior, prior - acc


def mutual_info_identity_check(sys, n_steps, base="bits"):
    """Residual of I(U_m; Y^n) = n log(beta), maximized over senders.

    The information is computed from propagated Gaussian covariances as
    1/2 log(prior/posterior) per sender.
    """
    prior, post = stationary_posterior_variances(sys, n_steps)
    mi = 0.5 * np.log(prior / post) / _LN[base]
    target = n_steps * math.log(sys.beta) / _LN[base]
    return float(np.max(np.abs(mi - target)))
