"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one PASS/FAIL line (run with ``pytest -s`` to see them all
live).  Criterion 13 is extended/optional: a disagreement there is reported
as a transcription/mapping diagnostic (xfail), not a build failure.
"""

import json
import time
from fractions import Fraction

import numpy as np
import pytest
from click.testing import CliRunner

from irgalab.cli import main as cli_main
from irgalab.irga import check_conjecture, random_pd
from irgalab.linalg import load_matrix
from irgalab.majorization import birkhoff, majorizes, shannon_entropy
from irgalab.search import SearchConfig, run as search_run
from irgalab.sos import (
    SoSCertificate,
    builtin_certificate,
    builtin_expression,
    builtin_polynomial,
    data_path,
    entry_polynomial,
    identity_test,
    symbolic_gram,
    _hadamard_gram_adjugate,
)
from irgalab.spdd import (
    assemble_gpdd,
    block_plan,
    kron_spdd,
    make_gauge,
    make_spdd,
    unitary_class_check,
    verify_majorization_theorem,
    verify_mapping,
)


def _report(index: int, description: str, ok: bool, extra: str = ""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({extra})" if extra else ""
    print(f"ACCEPTANCE {index:02d} {status}: {description}{suffix}")
    return ok


def _cli(args):
    runner = CliRunner()
    return runner.invoke(cli_main, args, catch_exceptions=False)


def _random_doubly_stochastic(rng, n):
    weights = rng.dirichlet(np.ones(int(rng.integers(2, (n - 1) ** 2 + 2))))
    s = np.zeros((n, n))
    for w in weights:
        s[np.arange(n), rng.permutation(n)] += w
    return s


def test_01_worked_example_reproduction():
    started = time.perf_counter()
    result = _cli(["irga", "check", str(data_path("gauge4_demo.mat"))])
    elapsed = time.perf_counter() - started
    report = json.loads(result.stdout)["payload"]["report"]
    s = np.array(report["s"])
    expected = load_matrix(data_path("gauge4_demo_irga.mat"))
    deviation = float(np.abs(s - expected).max())
    ok = (
        result.exit_code == 0
        and deviation < 5e-5
        and report["doubly_stochastic"] is True
        and report["pd"] is True
        and elapsed < 1.0
    )
    assert _report(
        1,
        "worked 4x4 example reproduces the reference IRGA",
        ok,
        f"max dev {deviation:.2e}, {elapsed:.2f}s",
    )


def test_02_size_three_certificate():
    started = time.perf_counter()
    certificate = builtin_certificate("n3")
    derived = entry_polynomial(3, 2, 3)
    transcribed = builtin_polynomial("pn3")
    check_derived = certificate.verify(derived)
    check_text = certificate.verify(transcribed)
    elapsed = time.perf_counter() - started
    ok = (
        check_derived.ok
        and check_text.ok
        and check_derived.rational
        and derived == transcribed
        and elapsed < 1.0
    )
    assert _report(
        2,
        "size-3 certificate equals derived and transcribed polynomials exactly",
        ok,
        f"{elapsed:.2f}s",
    )


def test_03_size_four_certificate_and_diagnostics():
    symbolic_gram.cache_clear()
    _hadamard_gram_adjugate.cache_clear()
    entry_polynomial.cache_clear()
    started = time.perf_counter()
    derived = entry_polynomial(4, 1, 2)
    derivation_time = time.perf_counter() - started

    certificate = builtin_certificate("n4")
    check = certificate.verify(derived)

    terms = list(certificate.terms)
    multiplier, body = terms[0]
    terms[0] = (multiplier + Fraction(1, 3), body)
    perturbed_check = SoSCertificate(certificate.variables, terms).verify(derived)

    ok = (
        check.ok
        and check.rational
        and derivation_time < 60.0
        and not perturbed_check.ok
        and len(perturbed_check.difference) > 0
    )
    assert _report(
        3,
        "25-term certificate equals the derived size-4 polynomial exactly; "
        "perturbation emits a monomial difference",
        ok,
        f"derivation {derivation_time:.2f}s, diff size {len(perturbed_check.difference)}",
    )


def test_04_conjecture_sweep_sizes_two_to_six():
    started = time.perf_counter()
    failures = []
    for n in range(2, 7):
        for seed in range(1000):
            report = check_conjecture(random_pd(n, seed).p, tol=1e-10)
            if not report.doubly_stochastic:
                failures.append((n, seed, report.min_entry))
    elapsed = time.perf_counter() - started
    ok = not failures and elapsed < 30.0
    assert _report(
        4,
        "1000 random PD gauges per size 2..6 all have doubly stochastic IRGA",
        ok,
        f"failures {failures if failures else 'none'}, {elapsed:.1f}s",
    )


def test_05_counterexamples_at_size_seven():
    started = time.perf_counter()
    result = _cli(
        ["irga", "search-counterexample", "--n", "7", "--trials", "100000"]
    )
    elapsed = time.perf_counter() - started
    payload = json.loads(result.stdout)["payload"]
    ok = (
        result.exit_code == 0
        and payload["found"] is True
        and payload["min_entry_exact"].startswith("-")
        and payload["hit_rate"] > 0
        and elapsed < 120.0
    )
    assert _report(
        5,
        "size-7 search certifies an exact negative IRGA entry",
        ok,
        f"trial {payload.get('trial_index')}, exact min ~{payload.get('min_entry_float', 0):.3e}, "
        f"hit rate {payload.get('hit_rate', 0):.2e}, {elapsed:.1f}s",
    )


def test_06_majorization_theorem_sweep():
    rng = np.random.default_rng(606)
    all_hold = True
    for trial in range(500):
        n = int(rng.integers(2, 7))
        gauge = make_gauge(random_pd(n, int(rng.integers(0, 2**31))).p)
        if not gauge.valid:
            all_hold = False
            break
        spectrum = rng.uniform(1e-6, 10.0, n)
        verdict = verify_majorization_theorem(make_spdd(gauge, spectrum), tol=1e-9)
        if not verdict.holds:
            all_hold = False
            break
    # Fixed regression: P = [[2,1],[1,1]], e = (3,1) has diagonal (5,-1).
    matrix = make_spdd(make_gauge(np.array([[2.0, 1.0], [1.0, 1.0]])), [3.0, 1.0])
    regression = (
        np.abs(matrix.diagonal - np.array([5.0, -1.0])).max() < 1e-9
        and verify_majorization_theorem(matrix).holds
    )
    ok = all_hold and regression
    assert _report(
        6,
        "500 random SPDD matrices: diagonal majorizes spectrum (plus 2x2 regression)",
        ok,
    )


def test_07_kronecker_retention():
    rng = np.random.default_rng(707)
    all_ok = True
    for trial in range(100):
        na, nb = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        a = make_spdd(
            make_gauge(random_pd(na, int(rng.integers(0, 2**31))).p),
            rng.uniform(0.1, 10.0, na),
        )
        b = make_spdd(
            make_gauge(random_pd(nb, int(rng.integers(0, 2**31))).p),
            rng.uniform(0.1, 10.0, nb),
        )
        composed = kron_spdd(a, b)
        if not (verify_mapping(composed, tol=1e-9).ok and verify_majorization_theorem(composed).holds):
            all_ok = False
            break
    # Named regression: 4x4 (x) 3x3 = 12x12.
    a = make_spdd(make_gauge(random_pd(4, 74).p), np.arange(1.0, 5.0))
    b = make_spdd(make_gauge(random_pd(3, 75).p), np.arange(1.0, 4.0))
    twelve = kron_spdd(a, b)
    regression = (
        twelve.n == 12
        and verify_mapping(twelve, tol=1e-9).ok
        and verify_majorization_theorem(twelve).holds
    )
    ok = all_ok and regression
    assert _report(7, "100 Kronecker compositions retain mapping and majorization", ok)


def test_08_gpdd_construction():
    plans_ok = True
    for n in range(2, 65):
        plan = block_plan(n)
        if plan.total != n or not all(size in (2, 3, 4) for size in plan):
            plans_ok = False
            break
    sweeps_ok = True
    for n in (5, 6, 7, 9, 11):
        gauge = assemble_gpdd(block_plan(n), seed=800 + n)
        if not gauge.valid:
            sweeps_ok = False
            break
        rng = np.random.default_rng(n)
        for _ in range(20):
            matrix = make_spdd(gauge, rng.uniform(0.1, 10.0, n))
            if not verify_majorization_theorem(matrix).holds:
                sweeps_ok = False
                break
    ok = plans_ok and sweeps_ok
    assert _report(8, "block plans cover 2..64; assembled gauges pass the sweep", ok)


def test_09_unitary_contrast():
    rng = np.random.default_rng(909)
    ok = True
    for trial in range(500):
        n = int(rng.integers(2, 9))
        spectrum = rng.uniform(-5.0, 5.0, n)
        if not unitary_class_check(n, seed=trial, spectrum=spectrum, tol=1e-9).holds:
            ok = False
            break
    assert _report(9, "500 orthogonal trials: spectrum majorizes diagonal", ok)


def test_10_birkhoff_decomposition():
    rng = np.random.default_rng(1010)
    ok = True
    for trial in range(200):
        n = int(rng.integers(2, 9))
        s = _random_doubly_stochastic(rng, n)
        decomposition = birkhoff(s, tol=1e-9)
        if (
            len(decomposition) > (n - 1) ** 2 + 1
            or np.abs(decomposition.reconstruct() - s).max() > 1e-9
            or abs(sum(decomposition.weights) - 1.0) > 1e-10
        ):
            ok = False
            break
    assert _report(10, "200 Birkhoff decompositions within budget and tolerance", ok)


def test_11_entropy_implication():
    rng = np.random.default_rng(1111)
    ok = True
    for trial in range(500):
        n = int(rng.integers(2, 9))
        y = rng.uniform(0.0, 3.0, n)
        if y.sum() <= 0:
            continue
        s = _random_doubly_stochastic(rng, n)
        x = s @ y
        if not majorizes(y, x, tol=1e-9).holds:
            ok = False
            break
        if shannon_entropy(x) < shannon_entropy(y) - 1e-9:
            ok = False
            break
    assert _report(11, "500 stochastic mixes: H(S y) >= H(y) and majorization holds", ok)


def test_12_manifold_search():
    # CLI path on the worked 2x2 gauge.
    runner = CliRunner()
    with runner.isolated_filesystem():
        with open("gauge.mat", "w") as handle:
            handle.write("2 1\n1 1\n")
        result = runner.invoke(
            cli_main,
            ["search", "run", "gauge.mat", "--e0", "3,1", "--delta", "1",
             "--direction", "max_entropy"],
            catch_exceptions=False,
        )
    trace = json.loads(result.stdout)["payload"]["trace"]
    spectra = [tuple(state["spectrum"]) for state in trace["states"]]
    cli_ok = (
        result.exit_code == 0
        and spectra == [(3.0, 1.0), (2.0, 2.0)]
        and trace["termination"] == "local_optimum"
    )

    rng = np.random.default_rng(1212)
    invariants_ok = True
    for trial in range(50):
        n = int(rng.integers(2, 5))
        gauge = make_gauge(random_pd(n, int(rng.integers(0, 2**31))).p)
        direction = "max_entropy" if trial % 2 == 0 else "min_entropy"
        config = SearchConfig(delta=0.25, direction=direction, max_iters=80)
        trace_obj = search_run(gauge, rng.uniform(0.5, 4.0, n), config)
        total = trace_obj.states[0].spectrum.sum()
        previous = None
        for state in trace_obj.states:
            if abs(state.spectrum.sum() - total) > 1e-9:
                invariants_ok = False
            if previous is not None:
                if direction == "max_entropy":
                    step_ok = majorizes(previous.diagonal, state.diagonal).holds
                else:
                    step_ok = majorizes(state.diagonal, previous.diagonal).holds
                if not step_ok:
                    invariants_ok = False
            previous = state
    ok = cli_ok and invariants_ok
    assert _report(12, "worked search trace exact; 50 random traces keep invariants", ok)


def test_13_appendix_identity_test():
    started = time.perf_counter()
    expression = builtin_expression("s6-entry12")
    report = identity_test(expression, 6, 1, 2, trials=20, seed=0)
    elapsed = time.perf_counter() - started
    ok = report.all_agree and elapsed < 300.0
    _report(
        13,
        "bundled size-6 polynomial agrees with the exact oracle at 20 points",
        ok,
        f"{report.agreements}/{report.trials} agree, {elapsed:.1f}s",
    )
    if not report.all_agree:
        pytest.xfail(
            "transcription/mapping diagnostic (extended criterion): "
            f"first disagreement {report.first_disagreement}"
        )
    assert ok
