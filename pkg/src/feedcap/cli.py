"""Single-binary command line surface.

Subcommands expose every solver plus verification suites:

    feedcap sumcap   --n 3 --power 2          sum-capacity root and weights
    feedcap dare     --n 3 --beta 1.1         Riccati solution as JSON
    feedcap lqg      --n 3 --beta 1.1         gains, radius, powers
    feedcap simulate --n 3 --power 2 ...      Monte Carlo report
    feedcap p2p sk|bode|search ...            point-to-point machinery
    feedcap verify converse|all ...           pass/fail property suites
    feedcap sweep    ...                      CSV capacity tables

JSON results are wrapped in an envelope {tool_version, config, payload,
wall_time_ms}; the payload bytes are reproducible for identical config and
seed. CSV goes to stdout with the resolved config echoed in a leading
comment. Exit codes: 0 ok, 2 usage, 3 numeric failure. FEEDCAP_THREADS
caps simulation worker threads.
"""
import argparse
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .errors import SolverError
from .matrix_core import matrix_to_json
from .riccati import dare_circulant, dare_iterate, riclem_verify
from .sum_capacity import (MacParams, c2_concavity_probe,
                           dependence_balance_gap, g_derivative_check,
                           gamma_star, g_value, phi_star, solve_phi,
                           symmetric_cov)
from .mac_code import (asymptotic_powers, beta_for_power, build_system,
                       closed_loop_radius, decode, encode_step,
                       exact_trajectory_stats, exact_mse, lqg_controller,
                       mutual_info_identity_check, simulate)
from .p2p_gaussian import (DEFAULT_QUAD, Arma1Spectrum, QuadratureSpec,
                           WHITE, ZpkFilter, bode_integral, feedback_transform,
                           grid_capacity_search, instability, power_integral,
                           random_stabilized_filter, rate_integral, sk_filter)


def _complex_json(c):
    return {"re": float(np.real(c)), "im": float(np.imag(c))}


def _emit(args, payload, t0):
    envelope = {
        "tool_version": __version__,
        "config_echo": {k: v for k, v in sorted(vars(args).items())
                        if k != "func" and not k.startswith("_")},
        "payload": payload,
        "wall_time_ms": int((time.perf_counter() - t0) * 1000),
    }
    print(json.dumps(envelope, sort_keys=True))
    return 0


def _threads():
    raw = os.environ.get("FEEDCAP_THREADS", "")
    try:
        return max(1, int(raw)) if raw else 1
    except ValueError:
        return 1


# ---------------------------------------------------------------- sumcap

def _cmd_sumcap(args, t0):
    params = MacParams(n_senders=args.n, power=args.power)
    sol = solve_phi(params, tol=args.tol, base=args.base)
    payload = {
        "n": args.n, "power": args.power, "base": args.base,
        "phi": sol.phi, "rho": sol.rho, "c1": sol.c1, "c2": sol.c2,
        "residual": sol.residual, "sum_capacity": sol.c1,
        "gamma_star": gamma_star(params, sol.phi) if args.power > 0 else None,
    }
    return _emit(args, payload, t0)


# ------------------------------------------------------------------ dare

def _cmd_dare(args, t0):
    if args.method == "circulant":
        sol = dare_circulant(args.n, args.beta)
    else:
        from .riccati import symmetric_system
        sysab = symmetric_system(args.n, args.beta)
        sol = dare_iterate(sysab, np.eye(args.n), tol=args.tol)
    from .riccati import symmetric_system
    check = riclem_verify(sol, symmetric_system(args.n, args.beta))
    payload = {
        "n": args.n, "beta": args.beta, "method": args.method,
        "G": matrix_to_json(sol.G),
        "iterations": sol.iterations,
        "residual": sol.residual,
        "identity_residuals": {"a": check.residual_a, "b": check.residual_b},
    }
    return _emit(args, payload, t0)


# ------------------------------------------------------------------- lqg

def _cmd_lqg(args, t0):
    sysm = build_system(args.n, args.beta)
    ctrl = lqg_controller(sysm)
    payload = {
        "n": args.n, "beta": args.beta,
        "gains": [_complex_json(c) for c in ctrl.gains],
        "spectral_radius": closed_loop_radius(sysm, ctrl),
        "asymptotic_powers": asymptotic_powers(sysm, ctrl).tolist(),
        "G": matrix_to_json(dare_circulant(args.n, args.beta).G),
    }
    return _emit(args, payload, t0)


# -------------------------------------------------------------- simulate

def _cmd_simulate(args, t0):
    sysm = build_system(args.n, beta_for_power(args.n, args.power))
    ctrl = lqg_controller(sysm)
    if args.csv:
        from .mac_code import exact_step_table
        print(f"# config: n={args.n} power={args.power} steps={args.steps}")
        cols = ["step"] + [f"d_{j+1}" for j in range(args.n)] \
            + [f"power_{j+1}" for j in range(args.n)]
        print(",".join(cols))
        for step, d_row, p_row in exact_step_table(sysm, ctrl, args.steps):
            vals = [str(step)] + [f"{v:.12g}" for v in d_row] \
                + [f"{v:.12g}" for v in p_row]
            print(",".join(vals))
        return 0
    report = simulate(sysm, ctrl, args.steps, args.trials, args.seed,
                      threads=_threads())
    payload = {
        "n": args.n, "power": args.power, "beta": sysm.beta,
        "n_steps": report.n_steps, "trials": report.trials,
        "seed": report.seed, "rng_algorithm": report.rng_algorithm,
        "per_sender_mse": report.per_sender_mse.tolist(),
        "mse_exponents": report.mse_exponents.tolist(),
        "empirical_powers": report.empirical_powers.tolist(),
    }
    if args.exact:
        stats = exact_trajectory_stats(sysm, ctrl, args.steps)
        payload["exact"] = {
            "per_sender_mse": stats.per_sender_mse.tolist(),
            "mse_exponents": stats.mse_exponents.tolist(),
            "mean_powers": stats.mean_powers.tolist(),
        }
    return _emit(args, payload, t0)


# ------------------------------------------------------------------- p2p

def _parse_complex_list(text):
    if not text:
        return ()
    return tuple(complex(tok) for tok in text.split(","))


def _sensitivity_csv(f, s_z, points=2048):
    omega = np.linspace(-np.pi, np.pi, points + 1)
    z = np.exp(1j * omega)
    s_mag = np.abs(1.0 / (1.0 - f.response(z)))
    dens = s_z.density(omega)
    print("omega,sensitivity_mag,noise_density,log2_sensitivity")
    for om, sm, sd in zip(omega, s_mag, dens):
        print(f"{om:.10g},{sm:.12g},{sd:.12g},{np.log2(sm):.12g}")


def _cmd_p2p_sk(args, t0):
    f = sk_filter(args.power)
    b = feedback_transform(f)
    if args.csv:
        print(f"# config: power={args.power}")
        _sensitivity_csv(f, WHITE)
        return 0
    payload = {
        "power": args.power,
        "beta": float(np.sqrt(1.0 + args.power)),
        "poles": [_complex_json(p) for p in f.poles],
        "gain": _complex_json(f.gain),
        "instability": instability(f, args.base),
        "rate_integral": rate_integral(b, base=args.base),
        "power_integral": power_integral(b, WHITE),
        "closed_loop_pole": [_complex_json(p) for p in b.poles],
    }
    return _emit(args, payload, t0)


def _cmd_p2p_bode(args, t0):
    f = ZpkFilter(zeros=_parse_complex_list(args.zeros),
                  poles=_parse_complex_list(args.poles),
                  gain=complex(args.gain))
    if args.csv:
        print(f"# config: poles={args.poles} zeros={args.zeros} gain={args.gain}")
        _sensitivity_csv(f, WHITE)
        return 0
    val = bode_integral(f, base=args.base)
    inst = instability(f, args.base)
    payload = {
        "poles": [_complex_json(p) for p in f.poles],
        "zeros": [_complex_json(z) for z in f.zeros],
        "gain": _complex_json(f.gain),
        "instability": inst,
        "bode_integral": val,
        "residual": abs(val - inst),
    }
    return _emit(args, payload, t0)


def _cmd_p2p_search(args, t0):
    s_z = Arma1Spectrum(alpha=args.alpha, pole_coef=args.pole_coef,
                        convention=args.convention)
    try:
        n_poles, n_gains = (int(v) for v in args.grid.split("x"))
    except ValueError:
        print(f"error: --grid expects POLESxGAINS, got {args.grid!r}",
              file=sys.stderr)
        return 2
    grid = np.linspace(0.0, 0.99, n_poles)
    best = grid_capacity_search(s_z, args.power, pole_grid=grid,
                                gains_per_pole=n_gains, base=args.base)
    payload = {
        "alpha": args.alpha, "pole_coef": args.pole_coef,
        "convention": args.convention, "power": args.power,
        "grid": args.grid,
        "pole": _complex_json(best.filter.poles[0]),
        "gain": _complex_json(best.filter.gain),
        "rate": best.rate,
        "power_used": best.power,
    }
    return _emit(args, payload, t0)


# ---------------------------------------------------------------- verify

def _converse_checks(n, power, seed):
    checks = []
    params = MacParams(n_senders=n, power=power)
    sol = solve_phi(params)
    k_opt = symmetric_cov(n, power, sol.rho)
    gap = dependence_balance_gap(k_opt)
    checks.append(("dependence balance zero at optimum",
                   abs(gap) <= 1e-8, f"gap={gap:.3e}"))
    rng = np.random.default_rng(seed)
    worst = np.inf
    for _ in range(200):
        dim = int(rng.integers(2, 5))
        worst = min(worst, dependence_balance_gap(
            np.diag(rng.uniform(0.01, 10.0, size=dim))))
    checks.append(("dependence balance nonnegative on diagonals",
                   worst >= -1e-10, f"min gap={worst:.3e}"))
    worst = np.inf
    for _ in range(200):
        dim = int(rng.integers(2, 5))
        m1 = rng.normal(size=(dim, dim))
        m2 = rng.normal(size=(dim, dim))
        for t in (0.25, 0.5, 0.75):
            worst = min(worst, c2_concavity_probe(
                m1 @ m1.T + 1e-3 * np.eye(dim),
                m2 @ m2.T + 1e-3 * np.eye(dim), t))
    checks.append(("conditional-information concavity",
                   worst >= -1e-10, f"min margin={worst:.3e}"))
    ok = True
    worst_d = 0.0
    for gamma in np.linspace(1.01, 5.0, 8):
        prev = None
        for x in np.linspace(0.0, 10.0, 9):
            ph = phi_star(n, gamma, x)
            lo = (n + gamma - 1.0) / (2.0 * gamma)
            ok = ok and (lo - 1e-12 <= ph < n / 2.0)
            ok = ok and (prev is None or ph > prev)
            prev = ph
            if x > 0:
                worst_d = max(worst_d, g_derivative_check(n, gamma, x))
    checks.append(("phi* bounds and monotonicity", ok, ""))
    checks.append(("weighted-capacity derivative identity",
                   worst_d <= 1e-5, f"max residual={worst_d:.3e}"))
    return checks


def _solver_checks(n, power, seed):
    checks = []
    params = MacParams(n_senders=n, power=power)
    sol = solve_phi(params)
    checks.append(("capacity functions cross at phi",
                   sol.residual <= 1e-9, f"|c1-c2|={sol.residual:.3e}"))
    beta = beta_for_power(n, power)
    from .riccati import symmetric_system
    sysab = symmetric_system(n, beta)
    closed = dare_circulant(n, beta)
    iterated = dare_iterate(sysab, np.eye(n))
    diff = float(np.linalg.norm(closed.G - iterated.G))
    checks.append(("Riccati closed form matches iteration",
                   diff <= 1e-8, f"|diff|={diff:.3e}"))
    rc = riclem_verify(closed, sysab)
    checks.append(("Riccati sum identities",
                   max(rc.residual_a, rc.residual_b) <= 1e-8,
                   f"a={rc.residual_a:.3e} b={rc.residual_b:.3e}"))
    gd = float(np.max(np.abs(closed.G.diagonal().real - power)))
    checks.append(("Riccati diagonal equals the power budget",
                   gd <= 1e-6, f"max|G_jj-P|={gd:.3e}"))
    sysm = build_system(n, beta)
    ctrl = lqg_controller(sysm)
    rad = closed_loop_radius(sysm, ctrl)
    checks.append(("closed loop stable", rad < 1.0, f"radius={rad:.6f}"))
    pw = asymptotic_powers(sysm, ctrl)
    checks.append(("asymptotic powers equal the budget",
                   float(np.max(np.abs(pw - power))) <= 1e-6,
                   f"max|P_j-P|={float(np.max(np.abs(pw - power))):.3e}"))
    rate_gap = abs(n * np.log2(beta) - sol.c1)
    checks.append(("sum rate n log2(beta) equals capacity",
                   rate_gap <= 1e-9, f"gap={rate_gap:.3e}"))
    # cap beta^{2 steps} near 2^20 so the posterior subtraction stays
    # comfortably above float64 round-off
    mi_steps = max(4, int(10.0 / math.log2(beta)))
    mi = mutual_info_identity_check(sysm, mi_steps)
    checks.append(("mutual information identity",
                   mi <= 1e-8, f"residual={mi:.3e} at n={mi_steps}"))
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        msg = rng.random(n) + 1j * rng.random(n) - (0.5 + 0.5j)
        state = msg.copy()
        y_hist = []
        y_prev = 0.0 + 0.0j
        for _step in range(25):
            state, _symbols, chan = encode_step(sysm, ctrl, state, y_prev)
            y_prev = chan + complex(*rng.normal(scale=np.sqrt(0.5), size=2))
            y_hist.append(y_prev)
        mhat = decode(sysm, y_hist)
        lhs = msg - mhat
        rhs = sysm.a_diag ** (-25.0) * state
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    checks.append(("trajectory error identity",
                   worst <= 1e-12, f"max residual={worst:.3e}"))
    # the gap equals log2(K_n,jj)/(2n) with K stationary well before 200
    # steps; if 200 is not enough for this power, grow the horizon (the
    # covariance no longer changes, so the larger-n gap follows exactly)
    n_exp = 200
    exact = exact_mse(sysm, ctrl, n_exp)
    log2_k = np.log2(exact) + 2.0 * n_exp * np.log2(beta)
    worst = float(np.max(np.abs(log2_k)))
    if worst / (2.0 * n_exp) > 0.01:
        n_exp = int(np.ceil(worst / 0.01))
    expo_gap = worst / (2.0 * n_exp)
    checks.append(("exponent approaches log2(beta)",
                   expo_gap <= 0.01, f"gap={expo_gap:.4f} at n={n_exp}"))
    gs = gamma_star(params, sol.phi)
    rt = abs(phi_star(n, gs, power) - sol.phi)
    checks.append(("weight round trip", rt <= 1e-8, f"|phi*-phi|={rt:.3e}"))
    gv = abs(g_value(n, gs, power) - sol.c1)
    checks.append(("weighted value equals capacity",
                   gv <= 1e-8, f"gap={gv:.3e}"))
    return checks


def _p2p_checks(seed):
    checks = []
    worst = 0.0
    for p in (0.5, 1.0, 3.0, 10.0):
        f = sk_filter(p)
        b = feedback_transform(f)
        target = 0.5 * np.log2(1.0 + p)
        worst = max(worst,
                    abs(instability(f) - target),
                    abs(rate_integral(b) - target),
                    abs(power_integral(b, WHITE) - p))
    checks.append(("one-pole capacity chain", worst <= 1e-6,
                   f"max gap={worst:.3e}"))
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(5):
        f = random_stabilized_filter(rng)
        worst = max(worst, abs(bode_integral(f) - instability(f)))
    checks.append(("sensitivity integral equals instability",
                   worst <= 2e-6, f"max gap={worst:.3e}"))
    return checks


def _cmd_verify(args, t0):
    if args.suite == "converse":
        checks = _converse_checks(args.n, args.power, args.seed)
    else:
        checks = (_converse_checks(args.n, args.power, args.seed)
                  + _solver_checks(args.n, args.power, args.seed)
                  + _p2p_checks(args.seed))
    print(f"# verify {args.suite}: n={args.n} power={args.power} "
          f"seed={args.seed}")
    failed = 0
    for name, ok, detail in checks:
        status = "PASS" if ok else "FAIL"
        failed += 0 if ok else 1
        suffix = f" ({detail})" if detail else ""
        print(f"{status} {name}{suffix}")
    print(f"# {len(checks) - failed}/{len(checks)} checks passed")
    return 0 if failed == 0 else 3


# ----------------------------------------------------------------- sweep

def _parse_range(text):
    # "start:stop:count" inclusive linspace, or a comma list; "" is empty
    if not text:
        return []
    if ":" in text:
        start, stop, count = text.split(":")
        return list(np.linspace(float(start), float(stop), int(count)))
    return [float(tok) for tok in text.split(",")]


def _cmd_sweep(args, t0):
    # an explicitly empty range gives a header-only table
    if args.n_list is None:
        n_values = [args.n]
    else:
        n_values = [int(v) for v in _parse_range(args.n_list)]
    if args.powers is None:
        p_values = [args.power]
    else:
        p_values = _parse_range(args.powers)
    p_values = sorted(p_values)
    print(f"# config: n={n_values} powers={p_values}")
    print("n,power,phi,rho,sum_capacity,beta,g_jj,error")
    for n in sorted(n_values):
        for p in p_values:
            try:
                sol = solve_phi(MacParams(n_senders=n, power=p))
                if p > 0:
                    beta = beta_for_power(n, p)
                    gjj = float(np.max(dare_circulant(n, beta)
                                       .G.diagonal().real))
                else:
                    beta, gjj = 1.0, 0.0
                print(f"{n},{p:.12g},{sol.phi:.12g},{sol.rho:.12g},"
                      f"{sol.c1:.12g},{beta:.12g},{gjj:.12g},")
            except (SolverError, ValueError) as exc:
                print(f"{n},{p:.12g},,,,,,{exc}")
    return 0


# ---------------------------------------------------------------- parser

def build_parser():
    parser = argparse.ArgumentParser(
        prog="feedcap",
        description="Feedback sum capacity of the N-sender AWGN multiple "
                    "access channel: solvers, codes, and verification.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sc = sub.add_parser("sumcap", help="solve the sum-capacity root phi(P)")
    sc.add_argument("--n", type=int, required=True)
    sc.add_argument("--power", type=float, required=True)
    sc.add_argument("--base", choices=("bits", "nats"), default="bits")
    sc.add_argument("--tol", type=float, default=1e-12,
                    help="bisection bracket tolerance (default 1e-12)")
    sc.set_defaults(func=_cmd_sumcap)

    da = sub.add_parser("dare", help="solve the Riccati equation")
    da.add_argument("--n", type=int, required=True)
    da.add_argument("--beta", type=float, required=True)
    da.add_argument("--method", choices=("iterate", "circulant"),
                    default="circulant")
    da.add_argument("--tol", type=float, default=1e-10,
                    help="iteration step tolerance (default 1e-10)")
    da.set_defaults(func=_cmd_dare)

    lq = sub.add_parser("lqg", help="synthesize the feedback gains")
    lq.add_argument("--n", type=int, required=True)
    lq.add_argument("--beta", type=float, required=True)
    lq.set_defaults(func=_cmd_lqg)

    si = sub.add_parser("simulate", help="Monte Carlo run of the code")
    si.add_argument("--n", type=int, required=True)
    si.add_argument("--power", type=float, required=True)
    si.add_argument("--steps", type=int, default=20)
    si.add_argument("--trials", type=int, default=10000)
    si.add_argument("--seed", type=int, default=0)
    si.add_argument("--exact", action="store_true",
                    help="attach covariance-propagated exact values")
    si.add_argument("--csv", action="store_true",
                    help="emit per-step exact (D_j, power_j) CSV instead")
    si.set_defaults(func=_cmd_simulate)

    p2p = sub.add_parser("p2p", help="point-to-point Gaussian machinery")
    p2p_sub = p2p.add_subparsers(dest="p2p_command", required=True)

    sk = p2p_sub.add_parser("sk", help="one-pole capacity-achieving filter")
    sk.add_argument("--power", type=float, required=True)
    sk.add_argument("--base", choices=("bits", "nats"), default="bits")
    sk.add_argument("--csv", action="store_true",
                    help="dump (omega, |S|, S_Z, log2|S|) samples")
    sk.set_defaults(func=_cmd_p2p_sk)

    bo = p2p_sub.add_parser("bode", help="sensitivity integral of a filter")
    bo.add_argument("--poles", type=str, required=True,
                    help="comma-separated complex poles, e.g. 1.3,1.7")
    bo.add_argument("--zeros", type=str, default="")
    bo.add_argument("--gain", type=str, default="1")
    bo.add_argument("--base", choices=("bits", "nats"), default="bits")
    bo.add_argument("--csv", action="store_true")
    bo.set_defaults(func=_cmd_p2p_bode)

    se = p2p_sub.add_parser("search", help="grid search one-pole filters")
    se.add_argument("--alpha", type=float, default=0.0)
    se.add_argument("--pole-coef", dest="pole_coef", type=float, default=0.0)
    se.add_argument("--power", type=float, required=True)
    se.add_argument("--grid", type=str, default="200x2",
                    help="POLESxGAINS candidate counts")
    se.add_argument("--convention", choices=("squared", "as-written"),
                    default="squared")
    se.add_argument("--base", choices=("bits", "nats"), default="bits")
    se.set_defaults(func=_cmd_p2p_search)

    ve = sub.add_parser("verify", help="run property suites")
    ve.add_argument("suite", choices=("converse", "all"))
    ve.add_argument("--n", type=int, default=3)
    ve.add_argument("--power", type=float, default=2.0)
    ve.add_argument("--seed", type=int, default=1)
    ve.set_defaults(func=_cmd_verify)

    sw = sub.add_parser("sweep", help="CSV capacity table over P or N")
    sw.add_argument("--n", type=int, default=2)
    sw.add_argument("--n-list", dest="n_list", type=str, default=None,
                    help="comma list or start:stop:count of N values")
    sw.add_argument("--power", type=float, default=1.0)
    sw.add_argument("--powers", type=str, default=None,
                    help="comma list or start:stop:count of P values")
    sw.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        return args.func(args, t0)
    except (SolverError, ValueError, ArithmeticError,
            np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
