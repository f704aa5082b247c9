"""Acceptance criteria 1-11, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they are
produced; they are also repeated in the terminal summary.
"""

import subprocess
import sys
import time

import numpy as np
import pytest

from ocx.bench import flip_benchmark, median_bandwidth, two_panel_benchmark
from ocx.dtd import input_relevance, sa_gradient, softmin_coefficients, student_coefficients, sv_relevance
from ocx.flipping import flip_curve
from ocx.kernels import KernelSpec
from ocx.measures import outlierness, outlierness_via_network
from ocx.ocsvm import make_model, outlier_mask, train

from conftest import ACCEPTANCE_LINES, FAMILY_Q, random_model, random_point
from oracles import finite_difference_gradient, numerical_ig


def report(n, ok, detail, elapsed, budget=None):
    within = budget is None or elapsed < budget
    status = "PASS" if ok and within else "FAIL"
    limit = f" (limit {budget:g} s)" if budget else ""
    line = f"{status} criterion {n}: {detail}; {elapsed:.1f} s{limit}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line
    assert within, line


def trial_set(seed=2024, n=1000):
    rng = np.random.default_rng(seed)
    for i in range(n):
        family, q = FAMILY_Q[i % len(FAMILY_Q)]
        model = random_model(rng, family, q)
        yield model, random_point(rng, model)


def test_criterion_1_conservation():
    t0 = time.perf_counter()
    worst = 0.0
    for model, x in trial_set():
        o = outlierness(model, x)
        worst = max(worst, abs(sv_relevance(model, x).r.sum() - o) / abs(o))
    report(1, worst <= 1e-9, f"max |sum R - o| / o = {worst:.2e} over 1000 models", time.perf_counter() - t0, 10)


def test_criterion_2_network_equivalence():
    t0 = time.perf_counter()
    worst = 0.0
    for model, x in trial_set():
        o = outlierness(model, x)
        worst = max(worst, abs(outlierness_via_network(model, x) - o) / abs(o))
    report(2, worst <= 1e-9, f"max relative gap = {worst:.2e} over 1000 models", time.perf_counter() - t0, 10)


def test_criterion_3_integrated_gradients():
    t0 = time.perf_counter()
    worst = 0.0
    for model, x in trial_set(seed=3, n=100):
        ref = numerical_ig(model, x, steps=100_000)
        got = input_relevance(model, x).r
        worst = max(worst, float(np.max(np.abs(got - ref) / np.abs(ref))))
    report(3, worst <= 1e-4, f"max per-coordinate relative error = {worst:.2e} over 100 cases",
           time.perf_counter() - t0, 60)


def test_criterion_4_constancy():
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(1000):
        h = rng.uniform(0.05, 20.0, size=int(rng.integers(1, 51)))
        c = student_coefficients(h)
        for scale in (1e-3, 0.37, 2.0, 1e3):
            worst = max(worst, float(np.max(np.abs(student_coefficients(scale * h) - c) / c)))
        g = rng.uniform(-5.0, 20.0, size=int(rng.integers(1, 51)))
        p, eps = softmin_coefficients(g)
        for shift in (-7.5, -1.0, 3.0, 50.0):
            p2, eps2 = softmin_coefficients(g + shift)
            worst = max(worst, float(np.max(np.abs(p2 - p) / p)),
                        float(np.max(np.abs(eps2 - eps) / np.maximum(1.0, np.abs(eps)))))
    report(4, worst <= 1e-12, f"max deviation = {worst:.2e} over 1000 vectors", time.perf_counter() - t0, 5)


def test_criterion_5_asymptotics():
    # The exponential kernel exp(-d^q / (q sigma^q)) gives o(tx) ~ ||tx||^q / q for
    # sigma = 1, so the ratio is compared with 1 after multiplying by q (identical
    # to the raw ratio for q = 1).
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    t = 1e4
    worst_st = worst_ex = 0.0
    for i in range(100):
        q = (1.0, 2.0, 4.0)[i % 3]
        model = random_model(rng, "tstudent", q, d=int(rng.integers(1, 21)))
        x = rng.normal(size=model.dim)
        ratio = outlierness(model, t * x) / np.linalg.norm(t * x) ** q
        worst_st = max(worst_st, abs(ratio - model.m) / model.m)
        m = int(rng.integers(1, 51))
        U = rng.normal(size=(m, model.dim))
        ex = make_model(U, rng.dirichlet(np.ones(m)), KernelSpec.exponential(1.0, q))
        ratio = q * outlierness(ex, t * x) / np.linalg.norm(t * x) ** q
        worst_ex = max(worst_ex, abs(ratio - 1.0))
    ok = worst_st <= 0.05 and worst_ex <= 0.05
    report(5, ok, f"t-Student max |ratio/m - 1| = {worst_st:.2e}, exponential max |q ratio - 1| = {worst_ex:.2e}",
           time.perf_counter() - t0, 5)


def test_criterion_6_nu_property():
    t0 = time.perf_counter()
    hits = {}
    for nu in (0.05, 0.1, 0.3):
        ok = 0
        for seed in range(20):
            X = np.random.default_rng(seed).normal(size=(500, 2))
            model = train(X, KernelSpec.gaussian(1.0), nu)
            ok += abs(outlier_mask(model, X).mean() - nu) <= 0.05
        hits[nu] = ok
    detail = ", ".join(f"nu={nu}: {k}/20" for nu, k in hits.items())
    report(6, all(k >= 18 for k in hits.values()), detail, time.perf_counter() - t0, 120)


def test_criterion_7_gradient():
    t0 = time.perf_counter()
    worst = 0.0
    for model, x in trial_set(seed=7, n=100):
        fd = finite_difference_gradient(lambda z: outlierness(model, z), x, step=1e-5)
        g = sa_gradient(model, x)
        worst = max(worst, float(np.max(np.abs(g - fd) / np.abs(g))))
    report(7, worst <= 1e-5, f"max per-coordinate relative error = {worst:.2e} at 100 points",
           time.perf_counter() - t0, 5)


def test_criterion_8_terminal_values():
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    worst = 0.0
    for i, (model, x) in enumerate(trial_set(seed=8, n=100)):
        final = flip_curve(model, x, rng.permutation(model.dim)).scores[-1]
        target = 0.0 if model.kernel.is_exponential else model.m * model.kernel.a
        worst = max(worst, abs(final - target))
    report(8, worst <= 1e-9, f"max |terminal - expected| = {worst:.2e} over 100 models",
           time.perf_counter() - t0, 5)


CONFIGS = [(f, q) for f in ("exponential", "tstudent") for q in (1.0, 2.0, 4.0)]


@pytest.fixture(scope="module")
def flip_results():
    t0 = time.perf_counter()
    res = {cfg: flip_benchmark(*cfg, seeds=range(20), methods=("dtd", "nn", "sa", "random")) for cfg in CONFIGS}
    return res, time.perf_counter() - t0


def test_criterion_9_flip_ordering(flip_results):
    res, elapsed = flip_results
    dtd, nn, sa, rnd = res[("exponential", 2.0)].T
    ordered = int(np.sum((dtd < nn) & (nn <= sa) & (sa < rnd)))
    beats = {cfg: int(np.sum(r[:, 0] < r[:, 3])) for cfg, r in res.items()}
    ok = ordered >= 16 and all(v == 20 for v in beats.values())
    names = ", ".join(f"{f[:3]} q={q:g}: {v}/20" for (f, q), v in beats.items())
    report(9, ok, f"Gaussian DTD < NN <= SA < Random in {ordered}/20; DTD < Random: {names}", elapsed, 300)


def test_flip_dominance_over_sensitivity(flip_results):
    res, _ = flip_results
    r = res[("exponential", 2.0)]
    assert np.sum(r[:, 0] < r[:, 2]) >= 16


@pytest.fixture(scope="module")
def two_panel():
    t0 = time.perf_counter()
    res = two_panel_benchmark(n=500)
    return res, time.perf_counter() - t0


def test_criterion_10_two_panel(two_panel):
    res, elapsed = two_panel
    t1 = res.labels == "typeI"
    right = float(np.mean(res.dtd[t1, 1] > res.dtd[t1, 0]))
    mvn_left = float(np.median(res.left_share("mvn", "typeII")))
    dtd_left = float(np.median(res.left_share("dtd", "typeII")))
    ok = right >= 0.95 and mvn_left < dtd_left
    report(10, ok, f"type-I right > left in {right:.1%}; type-II median left share MVN {mvn_left:.3f} "
           f"vs DTD {dtd_left:.3f}", elapsed, 120)


def test_inlier_relevance_is_small(two_panel):
    res, _ = two_panel
    totals = res.dtd.sum(axis=1)
    assert totals[res.labels == "inlier"].mean() < 0.1 * totals[res.labels == "typeI"].mean()


def _cli(*argv, cwd):
    proc = subprocess.run([sys.executable, "-m", "ocx", *map(str, argv)], cwd=cwd, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr


def test_criterion_11_determinism(tmp_path):
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)
    np.savetxt(tmp_path / "data.csv", rng.normal(size=(120, 6)), delimiter=",", fmt="%.17g")
    img = rng.integers(0, 256, size=(16, 16), dtype=np.uint8)
    from ocx.imageio import write_image
    write_image(tmp_path / "img.pgm", img)
    outputs = []
    for run in ("a", "b"):
        d = tmp_path / run
        d.mkdir()
        _cli("fit", "--input", "../data.csv", "--sigma", "auto", "--nu", 0.2, "--out", "m.json", cwd=d)
        _cli("explain", "--model", "m.json", "--input", "../data.csv", "--row", 3, "--out", "h.csv", cwd=d)
        _cli("render", "--input", "h.csv", "--shape", "2x3", "--out", "h.pgm", cwd=d)
        _cli("flip", "--model", "m.json", "--input", "../data.csv", "--method", "random", "--seed", 9,
             "--out", "c.csv", cwd=d)
        _cli("image-fit", "--input", "../img.pgm", "--patch", 3, "--subsample", 100, "--seed", 4, "--nu", 0.2,
             "--out", "im.json", cwd=d)
        _cli("image-explain", "--model", "im.json", "--input", "../img.pgm", "--out", "ih.csv",
             "--render", "ih.pgm", cwd=d)
        names = ("m.json", "h.csv", "h.pgm", "c.csv", "im.json", "ih.csv", "ih.pgm")
        outputs.append({n: (d / n).read_bytes() for n in names})
    same = [n for n in outputs[0] if outputs[0][n] == outputs[1][n]]
    report(11, len(same) == len(outputs[0]), f"{len(same)}/{len(outputs[0])} output files byte-identical",
           time.perf_counter() - t0)
