# Copyright (c) 2026 Pl4yer-ONE
# This file is part of DualTap.
# Licensed under GPLv3 or commercial license.

"""
Invariant Suite
Fast self-checks run by `main.py validate`: reduction oracles, warm-start
inertness, weight bounds, multiplication tallies, the error-memory
recursion and the theory identities.
"""

from dataclasses import dataclass, asdict
from typing import Any, Callable, Dict, List, Tuple

import numpy as np

from src.config import ACTIVE_BLOCKS, DDSAF_PARAMS, DEFAULT_MASTER_SEED, FILTER_LENGTH, RZA_PARAMS
from src.filters import (
    AlgorithmConfig,
    AlgorithmKind,
    FilterState,
    MULTIPLICATIONS_PER_TAP,
    dd_weight,
    error_memory_update,
    filter_step,
    rza_weight,
    sgn,
)
from src.logger import logger
from src.signal_model import Channel, SystemSpec, TrialStream, build_system, regressor_matrix
from src.theory import TheoryInputs, delta_msd, steady_state_msd

SignFunction = Callable[[np.ndarray], np.ndarray]

REDUCTION_ITERATIONS = 10_000
WARM_START = 200
OP_COUNT_LENGTHS = (8, 128, 1024)
DOMINANCE_SAMPLES = 10_000


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _signals(n_iters: int, seed: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    system = build_system(
        SystemSpec(M=FILTER_LENGTH, blocks=ACTIVE_BLOCKS),
        TrialStream(seed, 0, Channel.SYSTEM),
    )
    x = TrialStream(seed, 0, Channel.INPUT).normal(n_iters)
    v = 0.01 * TrialStream(seed, 0, Channel.NOISE).normal(n_iters)
    X = np.ascontiguousarray(regressor_matrix(x, system.M))
    return system.coefficients, X, X @ system.coefficients + v


def _trajectory(
    config: AlgorithmConfig, X: np.ndarray, d: np.ndarray, sign: SignFunction
) -> np.ndarray:
    """w(0) .. w(N) stacked row-wise."""
    state = FilterState.initial(X.shape[1])
    weights = [state.w]
    for n in range(X.shape[0]):
        state, _ = filter_step(state, config, X[n], d[n], sign=sign)
        weights.append(state.w)
    return np.stack(weights)


def _first_mismatch(a: np.ndarray, b: np.ndarray) -> int:
    rows = np.flatnonzero(np.any(a != b, axis=1))
    return int(rows[0]) if rows.size else -1


# =============================================================================
# CHECKS
# =============================================================================

def check_reductions(sign: SignFunction, seed: int) -> CheckResult:
    """
    rho0 = 0 gives LMS; DD-SAF with beta_q = 0, beta_w = eps, n_warm = 0 gives
    RZA-LMS; ZA is RZA with eps = 0. From w = 0 the attractor is idle, so the
    first RZA step is the LMS step.
    """
    _, X, d = _signals(REDUCTION_ITERATIONS, seed)
    mu, eps = 0.005, RZA_PARAMS["epsilon"]
    rho0 = RZA_PARAMS["zero_attraction_gain"] * mu

    lms = _trajectory(AlgorithmConfig.lms(mu), X, d, sign)
    rza = _trajectory(AlgorithmConfig.rza(mu, rho0, eps), X, d, sign)
    pairs = {
        "RZA first step from w=0 vs LMS": (rza[:2], lms[:2]),
        "RZA(rho0=0) vs LMS": (_trajectory(AlgorithmConfig.rza(mu, 0.0, eps), X, d, sign), lms),
        "DD-SAF(rho0=0) vs LMS": (
            _trajectory(AlgorithmConfig.ddsaf(mu, 0.0, eps, 2.0, 0.97, WARM_START), X, d, sign), lms,
        ),
        "DD-SAF(beta_q=0) vs RZA": (
            _trajectory(AlgorithmConfig.ddsaf(mu, rho0, eps, 0.0, 0.97, 0), X, d, sign), rza,
        ),
        "ZA vs RZA(eps=0)": (
            _trajectory(AlgorithmConfig.za(mu, rho0), X, d, sign),
            _trajectory(AlgorithmConfig.rza(mu, rho0, 0.0), X, d, sign),
        ),
    }
    failures = [
        f"{label} differs from n={_first_mismatch(a, b)}"
        for label, (a, b) in pairs.items()
        if not np.array_equal(a, b)
    ]
    if failures:
        return CheckResult("reductions", False, "; ".join(failures))
    return CheckResult("reductions", True, f"{len(pairs)} oracles bit-exact over {REDUCTION_ITERATIONS} iterations")


def check_warm_start(sign: SignFunction, seed: int) -> CheckResult:
    """DD-SAF equals LMS for n <= n_warm."""
    _, X, d = _signals(2 * WARM_START, seed)
    mu = 0.01
    dd = AlgorithmConfig.ddsaf(
        mu, DDSAF_PARAMS["zero_attraction_gain"] * mu, DDSAF_PARAMS["beta_w"],
        DDSAF_PARAMS["beta_q"], DDSAF_PARAMS["gamma_q"], WARM_START,
    )
    a = _trajectory(dd, X, d, sign)[: WARM_START + 1]
    b = _trajectory(AlgorithmConfig.lms(mu), X, d, sign)[: WARM_START + 1]
    if not np.array_equal(a, b):
        return CheckResult("warm_start", False, f"differs from n={_first_mismatch(a, b)}")
    return CheckResult("warm_start", True, f"w(n) identical to LMS for n <= {WARM_START}")


def check_weight_bounds(seed: int) -> CheckResult:
    """0 < s_DD <= s_RZA <= 1 on random (w, q)."""
    stream = TrialStream(seed, 0, Channel.CALIBRATION)
    w = 10.0 * stream.normal(10_000)
    q = 10.0 * stream.normal(10_000)
    s_dd = dd_weight(w, q, DDSAF_PARAMS["beta_w"], DDSAF_PARAMS["beta_q"])
    s_rza = rza_weight(w, DDSAF_PARAMS["beta_w"])
    ok = bool(np.all(s_dd > 0) and np.all(s_dd <= s_rza) and np.all(s_rza <= 1.0))
    return CheckResult("weight_bounds", ok, "0 < s_DD <= s_RZA <= 1" if ok else "weight bound violated")


def check_op_counts() -> CheckResult:
    """One iteration costs 2M, 3M, 4M, 6M multiplications."""
    configs = {
        AlgorithmKind.LMS: AlgorithmConfig.lms(0.01),
        AlgorithmKind.ZA: AlgorithmConfig.za(0.01, 1e-4),
        AlgorithmKind.RZA: AlgorithmConfig.rza(0.01, 1e-4, 0.02),
        AlgorithmKind.DDSAF: AlgorithmConfig.ddsaf(0.01, 1e-4, 0.02, 2.0, 0.97, 0),
    }
    bad = []
    for M in OP_COUNT_LENGTHS:
        x = np.ones(M)
        for kind, config in configs.items():
            state, _ = filter_step(FilterState.initial(M), config, x, 1.0)
            if state.mult_count != MULTIPLICATIONS_PER_TAP[kind] * M:
                bad.append(f"{kind.label} M={M}: {state.mult_count}")
    if bad:
        return CheckResult("op_counts", False, "; ".join(bad))
    return CheckResult("op_counts", True, "LMS 2M, RZA 4M, DD-SAF 6M (ZA 3M)")


def check_error_memory(seed: int) -> CheckResult:
    """Ten recursive steps of q match the full weighted sum of e(l) x(l)."""
    gamma, M, steps = 0.97, 8, 10
    stream = TrialStream(seed, 0, Channel.PILOT_INPUT)
    errors = stream.normal(steps)
    regressors = stream.normal(steps * M).reshape(steps, M)

    q = np.zeros(M)
    worst = 0.0
    for n in range(1, steps + 1):
        q = error_memory_update(q, errors[n - 1], regressors[n - 1], gamma)
        brute = sum(gamma ** l * errors[n - 1 - l] * regressors[n - 1 - l] for l in range(n))
        worst = max(worst, float(np.max(np.abs(q - brute) / np.maximum(np.abs(brute), 1e-300))))
    return CheckResult("error_memory", worst <= 1e-12, f"max relative error {worst:.2e}")


def check_theory_identities(seed: int) -> CheckResult:
    """delta_msd is a difference of steady-state MSDs, small-step gap, dominance."""
    rng = TrialStream(seed, 1, Channel.CALIBRATION)
    M, K = FILTER_LENGTH, 8
    problems = []

    # delta_msd identity and dominance on random inputs
    for _ in range(DOMINANCE_SAMPLES):
        u = rng.uniform(3)
        mu = 1e-4 + 0.015 * u[0]
        rho0 = 1e-3 * u[1]
        sigma_v2 = 10.0 ** (-4.0 * u[2])
        s_rza = rng.uniform(K)
        s_dd = s_rza * rng.uniform(K)
        rza = TheoryInputs(M, K, 1.0, sigma_v2, mu, rho0, s_rza)
        dd = TheoryInputs(M, K, 1.0, sigma_v2, mu, rho0, s_dd)
        msd_rza = steady_state_msd(rza, approximate=True)
        msd_dd = steady_state_msd(dd, approximate=True)
        tolerance = 8 * np.finfo(np.float64).eps * msd_rza
        if not np.isclose(delta_msd(rza, dd), msd_rza - msd_dd, rtol=1e-9, atol=tolerance):
            problems.append(f"delta_msd identity at mu={mu:.5g}")
            break
        if msd_dd > msd_rza or steady_state_msd(dd) > steady_state_msd(rza):
            problems.append(f"dominance at mu={mu:.5g}")
            break

    # small-step form within 1% of the exact form when mu sigma_x^2 (1+M) < 0.02
    for mu in np.linspace(1e-5, 0.0195 / (1 + M), 20):
        point = TheoryInputs(M, K, 1.0, 1e-3, mu, 0.28 * mu, np.full(K, 0.5))
        exact, approx = steady_state_msd(point), steady_state_msd(point, approximate=True)
        if abs(exact / approx - 1.0) >= 0.01:
            problems.append(f"small-step gap {abs(exact / approx - 1.0):.3%} at mu={mu:.5g}")
            break

    if problems:
        return CheckResult("theory_identities", False, "; ".join(problems))
    return CheckResult("theory_identities", True, f"{DOMINANCE_SAMPLES} random operating points")


def run_checks(sign: SignFunction = sgn, seed: int = DEFAULT_MASTER_SEED) -> List[CheckResult]:
    """
    Run every check; a check that raises is reported as failed.

    Args:
        sign: Sign convention handed to filter_step (mutation hook)
        seed: Master seed for the synthetic signals
    """
    checks = [
        ("reductions", lambda: check_reductions(sign, seed)),
        ("warm_start", lambda: check_warm_start(sign, seed)),
        ("weight_bounds", lambda: check_weight_bounds(seed)),
        ("op_counts", check_op_counts),
        ("error_memory", lambda: check_error_memory(seed)),
        ("theory_identities", lambda: check_theory_identities(seed)),
    ]
    results = []
    for name, check in checks:
        try:
            result = check()
        except Exception as exc:  # reported, not raised
            result = CheckResult(name, False, f"{type(exc).__name__}: {exc}")
        logger.info("check %s: %s", name, "pass" if result.passed else "FAIL")
        results.append(result)
    return results
