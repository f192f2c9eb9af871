"""Discrete algebraic Riccati and Lyapunov solvers for diagonal unstable
systems driven through an all-ones input column.

The Riccati equation solved here is the estimation form

    K = A K A' - A K B (1 + B' K B)^{-1} (A K B)'

whose unique positive-definite solution is the stationary covariance of the
feedback code. Two routes are provided: fixed-point iteration of the
recursion itself, and a closed-form circulant construction for the
symmetric system (equal gains beta, phases at the n-th roots of unity).
The closed form carries a geometric eigenvalue ladder on the DFT bins:

    lambda_1 = (beta^{2n} - 1) / n,   lambda_k = lambda_{k-1} / beta^2.

Cross-identities (sum rule 1 + B'KB = prod beta_j^2 and its leave-one-out
variant) are exposed as a verification record.
"""
from dataclasses import dataclass

import numpy as np

from .errors import SolverError
from .matrix_core import as_matrix, dft_matrix, spectral_radius

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100000


@dataclass(frozen=True)
class SystemAB:
    """Diagonal system A = diag(beta_j * omega_j) with all-ones input B.

    betas must all exceed 1 (every mode unstable) and the diagonal entries
    must be pairwise distinct, which is what makes the pair (A, B)
    detectable: repeated unstable entries cannot be told apart through the
    scalar output sum.
    """
    n: int
    betas: tuple
    phases: tuple
    A: np.ndarray
    B: np.ndarray


def make_system(betas, phases):
    """Build a validated SystemAB from per-sender gains and unit phases."""
    betas = tuple(float(b) for b in betas)
    phases = tuple(complex(w) for w in phases)
    if len(betas) != len(phases) or len(betas) == 0:
        raise ValueError("betas and phases must be non-empty, equal length")
    n = len(betas)
    if any(b <= 1.0 for b in betas):
        raise ValueError("every beta must exceed 1")
    if any(abs(abs(w) - 1.0) > 1e-12 for w in phases):
        raise ValueError("phases must lie on the unit circle")
    diag = np.array([b * w for b, w in zip(betas, phases)])
    for i in range(n):
        for j in range(i + 1, n):
            if abs(diag[i] - diag[j]) <= 1e-12:
                raise ValueError(
                    f"diagonal entries {i} and {j} coincide; the system is "
                    "not detectable through the scalar output")
    A = np.diag(diag)
    B = np.ones((n, 1), dtype=complex)
    return SystemAB(n=n, betas=betas, phases=phases, A=A, B=B)


@dataclass(frozen=True)
class DareSolution:
    """Positive-definite Riccati solution with solver metadata."""
    G: np.ndarray
    iterations: int
    residual: float


def riccati_residual(K, A, B):
    """Frobenius residual of K against one application of the Riccati map."""
    return float(np.linalg.norm(K - _riccati_map(K, A, B)))


def _riccati_map(K, A, B):
    s = 1.0 + (B.conj().T @ K @ B).real.item()
    akb = A @ K @ B
    out = A @ K @ A.conj().T - (akb @ akb.conj().T) / s
    # re-symmetrize each application to suppress round-off drift
    return (out + out.conj().T) / 2


def _check_psd_hermitian(k0):
    k0 = as_matrix(k0, square=True)
    if np.max(np.abs(k0 - k0.conj().T)) > 1e-10 * max(1.0, np.abs(k0).max()):
        raise ValueError("k0 must be Hermitian")
    eig_min = float(np.min(np.linalg.eigvalsh((k0 + k0.conj().T) / 2)))
    if eig_min < -1e-10 * max(1.0, np.abs(k0).max()):
        raise ValueError(f"k0 must be positive-semidefinite (min eig {eig_min})")
    return k0, eig_min


def dare_iterate(sys, k0, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Solve the Riccati equation by iterating its own recursion.

    Converges to the unique positive-definite fixed point from any
    positive-definite start. Zero is also a fixed point of the recursion
    (there is no process noise to re-excite a collapsed covariance), and a
    singular start can never leave its own range; singular seeds k0 are
    therefore lifted to k0 + I, which has no effect on the limit.

    Args:
        sys: SystemAB (or any object with fields A, B, n, betas).
        k0: Hermitian positive-semidefinite start.
        tol: convergence threshold on the Riccati residual.
        max_iter: iteration cap.

    Returns:
        DareSolution with the fixed point, iteration count, and residual.

    Raises:
        SolverError: if max_iter is hit before the residual drops below tol.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    A, B = sys.A, sys.B
    k0, eig_min = _check_psd_hermitian(k0)
    if k0.shape[0] != sys.n:
        raise ValueError("k0 dimension does not match the system")
    K = k0.astype(complex)
    if eig_min <= 1e-12 * max(1.0, np.abs(k0).max()):
        K = K + np.eye(sys.n)
    last = np.inf
    for it in range(1, max_iter + 1):
        K_next = _riccati_map(K, A, B)
        last = float(np.linalg.norm(K_next - K))
        K = K_next
        if last <= tol:
            return DareSolution(G=K, iterations=it,
                                residual=riccati_residual(K, A, B))
    raise SolverError(
        f"Riccati iteration did not converge in {max_iter} steps "
        f"(last residual {last:.3e})")


def dare_circulant(n, beta):
    """Closed-form circulant Riccati solution for the symmetric system.

    The solution is Q diag(lambda) Q' with Q the n-point DFT matrix and the
    geometric ladder lambda_k = lambda_1 / beta^{2k}, lambda_1 =
    (beta^{2n} - 1)/n. Every row sum equals lambda_1, so K B = lambda_1 B.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if beta <= 1.0:
        raise ValueError("beta must exceed 1")
    q = dft_matrix(n)
    lam1 = (beta ** (2 * n) - 1.0) / n
    lam = lam1 * beta ** (-2.0 * np.arange(n))
    G = q @ np.diag(lam) @ q.conj().T
    G = (G + G.conj().T) / 2
    sys = symmetric_system(n, beta)
    return DareSolution(G=G, iterations=0,
                        residual=riccati_residual(G, sys.A, sys.B))


def symmetric_system(n, beta):
    """SystemAB with equal gains and phases at the n-th roots of unity."""
    phases = np.exp(2j * np.pi * np.arange(n) / n)
    return make_system([beta] * n, phases)


def dale_solve(f, q, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Solve the discrete Lyapunov equation K = f K f' + q by iteration.

    Requires spectral_radius(f) < 1; convergence is then geometric.
    """
    f = as_matrix(f, square=True)
    q, _ = _check_psd_hermitian(q)
    rad = spectral_radius(f)
    if rad >= 1.0:
        raise SolverError(f"Lyapunov iteration requires a stable f; "
                          f"spectral radius is {rad:.6f}")
    K = np.zeros_like(q, dtype=complex)
    for _ in range(max_iter):
        K_next = f @ K @ f.conj().T + q
        K_next = (K_next + K_next.conj().T) / 2
        if np.linalg.norm(K_next - K) <= tol:
            return K_next
        K = K_next
    raise SolverError(f"Lyapunov iteration did not converge in {max_iter} steps")


@dataclass(frozen=True)
class RiclemCheck:
    """Residuals of the two Riccati sum identities."""
    residual_a: float
    residual_b: float


def riclem_verify(sol, sys):
    """Check the sum identities satisfied by the Riccati solution.

    (a) 1 + B'GB = prod_j beta_j^2.
    (b) for each row m, with sigma_m the m-th row sum:
        1 + B_m' G B_m - |sigma_m - G_mm|^2 / G_mm = prod_{j != m} beta_j^2,
        where B_m is the all-ones column with entry m zeroed.

    Returns both residuals; each should be at machine level for a valid
    solution.
    """
    G = sol.G
    n = sys.n
    B = sys.B
    prod_all = float(np.prod(np.asarray(sys.betas) ** 2))
    res_a = abs(1.0 + (B.conj().T @ G @ B).real.item() - prod_all)
    res_b = 0.0
    for m in range(n):
        bm = np.ones((n, 1), dtype=complex)
        bm[m] = 0.0
        sigma = G[m, :].sum()
        gmm = G[m, m].real
        val = 1.0 + (bm.conj().T @ G @ bm).real.item() \
            - (abs(sigma - G[m, m]) ** 2) / gmm
        target = prod_all / (sys.betas[m] ** 2)
        res_b = max(res_b, abs(val - target))
    return RiclemCheck(residual_a=res_a, residual_b=res_b)
