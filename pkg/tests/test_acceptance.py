"""Exit criteria for the package. Each test records one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py``; the lines appear in the
"acceptance criteria" section of the terminal summary.
"""

import io
import math
import random
import time

from scipy.special import roots_genlaguerre

from dsrisk import specfun
from dsrisk.cli import run
from dsrisk.oracle import TrialConfig, nb_exact, poisson_exact, simulate_race
from dsrisk.risk import catchup_time_free, catchup_timed, table_probability
from dsrisk.tables import FIXTURE_Z, Q_AXIS, R_AXIS, compare_fixture, generate_table, load_fixture

Q_GRID = [0.02 * k for k in range(1, 14)]


def test_1_table_reproduction(criterion):
    start = time.perf_counter()
    reports = [compare_fixture(generate_table(z), load_fixture(z), 0.005 + 1e-9) for z in FIXTURE_Z]
    elapsed = time.perf_counter() - start
    compared = sum(r.compared for r in reports)
    passed_cells = compared - sum(len(r.mismatches) for r in reports)
    anchors = {
        (1, 1.0, 0.1): 19.57,
        (2, 3.5, 0.26): 66.67,
        (6, 1.0, 0.1): 0.02,
        (9, 3.5, 0.26): 50.64,
    }
    anchor_ok = all(abs(100 * table_probability(z, q, r) - v) <= 0.005 for (z, r, q), v in anchors.items())
    ok = compared == 4095 and passed_cells == 4095 and anchor_ok and elapsed < 5.0
    criterion("1. table reproduction", ok, f"{passed_cells}/{compared} cells, anchors ok={anchor_ok}, {elapsed:.2f}s")
    assert ok


def test_2_time_free_cross_validation(criterion):
    worst = max(abs(catchup_time_free(z, q) - nb_exact(z, q)) for z in range(1, 11) for q in Q_GRID)
    ok = worst <= 1e-10
    criterion("2. time-free vs negative binomial", ok, f"max |diff| = {worst:.3e} (tol 1e-10)")
    assert ok


def test_3_timed_cross_validation(criterion):
    worst = 0.0
    count = 0
    for z in FIXTURE_Z:
        for q in Q_AXIS:
            for r in R_AXIS:
                kappa = (1 - q) * r
                worst = max(worst, abs(catchup_timed(z, q, kappa) - poisson_exact(z, q, kappa)))
                count += 1
    ok = count == 9 * 35 * 13 and worst <= 1e-12
    criterion("3. timed vs Poisson sum", ok, f"{count} points, max |diff| = {worst:.3e} (tol 1e-12)")
    assert ok


def test_4_marginalization(criterion):
    worst = 0.0
    for z in (1, 3, 6, 9):
        # kappa * z is the honest mining time in units of tau0 / p: Gamma(z, 1)
        nodes, weights = roots_genlaguerre(200, z - 1)
        norm = math.gamma(z)
        for q in (0.1, 0.26):
            average = math.fsum(w * catchup_timed(z, q, x / z) for x, w in zip(nodes, weights)) / norm
            worst = max(worst, abs(average - catchup_time_free(z, q)))
    ok = worst <= 1e-6
    criterion("4. marginalization over Gamma(z,1)", ok, f"max |diff| = {worst:.3e} (tol 1e-6)")
    assert ok


def test_5_degenerate_reductions(criterion):
    worst = max(
        abs(catchup_timed(z, q, 0.0) - (q / (1 - q)) ** z) for z in range(1, 31) for q in Q_GRID + [0.4999]
    )
    gamma_exact = all(specfun.reg_gamma_upper(z, 0) == 1.0 for z in range(1, 101))
    beta_exact = all(
        specfun.reg_inc_beta(1.0, a, b) == 1.0 for a in (0.5, 1, 2, 6, 30, 100) for b in (0.5, 1, 3)
    )
    ok = worst <= 1e-15 and gamma_exact and beta_exact
    criterion(
        "5. degenerate reductions",
        ok,
        f"kappa=0 max |diff| = {worst:.3e}, Q(z,0)==1: {gamma_exact}, I_1==1: {beta_exact}",
    )
    assert ok


def test_6_monte_carlo_calibration(criterion):
    rnd = random.Random(6)
    points = [(rnd.randint(1, 9), rnd.choice(Q_AXIS), rnd.choice(R_AXIS)) for _ in range(100)]
    start = time.perf_counter()
    covered = 0
    for i, (z, q, r) in enumerate(points):
        kappa = (1 - q) * r
        outcome = simulate_race(z, q, TrialConfig(trials=10**6, seed=1_000_003 * i + 17, kappa=kappa))
        exact = table_probability(z, q, r)
        # binomial standard error at the exact probability; the empirical one is 0 when no race is won
        se = math.sqrt(exact * (1 - exact) / outcome.trials)
        if abs(outcome.estimate - exact) <= 3 * se + outcome.truncation_bias_bound:
            covered += 1
    elapsed = time.perf_counter() - start
    ok = covered >= 99 and elapsed < 60.0
    criterion("6. Monte Carlo calibration", ok, f"{covered}/100 within 3 SE, {elapsed:.1f}s")
    assert ok


def test_7_special_function_accuracy(criterion):
    worst_beta = 0.0
    for k in range(1, 41):
        a = 0.5 * k
        for b in (0.5, 1.0):
            for j in range(1, 100):
                x = j / 100
                worst_beta = max(
                    worst_beta, abs(specfun.reg_inc_beta(x, a, b) + specfun.reg_inc_beta(1 - x, b, a) - 1)
                )
    worst_gamma = 0.0
    for n in range(1, 21):
        for j in range(0, 500):
            x = 0.01 + j * (50 - 0.01) / 499
            term = math.exp(-x)
            terms = [term]
            for k in range(1, n):
                term *= x / k
                terms.append(term)
            worst_gamma = max(worst_gamma, abs(specfun.reg_gamma_upper(n, x) - math.fsum(terms)))
    ok = worst_beta <= 1e-12 and worst_gamma <= 1e-12
    criterion(
        "7. special-function accuracy",
        ok,
        f"beta complement {worst_beta:.3e}, gamma vs Poisson sum {worst_gamma:.3e} (tol 1e-12)",
    )
    assert ok


def test_8_cli_contract(criterion, tmp_path):
    def call(*argv):
        out, err = io.StringIO(), io.StringIO()
        return run(list(argv), {}, out, err), out.getvalue(), err.getvalue()

    verify_code, verify_out, _ = call("verify", "--all")
    risk_code, risk_out, _ = call("risk", "--z", "1", "--q", "0.1", "--time", "600")
    bad = tmp_path / "bad.csv"
    bad.write_text("100,1700000000\n101,noon\n")
    ingest_code, _, ingest_err = call("ingest", "--file", str(bad), "--z", "1", "--q", "0.1")
    ok = (
        verify_code == 0
        and "4095 cells compared, 0 mismatches" in verify_out
        and risk_code == 0
        and "19.57" in risk_out
        and ingest_code == 3
        and "line 2" in ingest_err
    )
    criterion(
        "8. CLI contract",
        ok,
        f"verify exit {verify_code}, risk prints 19.57: {'19.57' in risk_out}, bad ingest exit {ingest_code}",
    )
    assert ok
