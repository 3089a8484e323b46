"""End-to-end acceptance checks.

Each test covers one numbered acceptance criterion and prints a single
`[acceptance] criterion NN PASS` line on success, so `pytest -v -s` yields
one pass/fail line per criterion. Criterion 10 needs real-network files
supplied through environment variables and is skipped otherwise.
"""
import itertools
import json
import os
import time

import numpy as np
import pytest

from specmix import (
    DcmmParams,
    augment,
    cli,
    default_ratio_threshold,
    detect,
    eigen_ratio_matrix,
    expected_adjacency,
    hamming_error,
    kmeans,
    leading_eigenpairs,
    mixed_hamming,
    project,
    regularized_laplacian,
    run_experiment,
    sample_adjacency,
    select_embedding_dim,
    signal_weakness,
    threshold_ratios,
)

from conftest import random_dcmm_params


def _passed(num, message):
    print(f"[acceptance] criterion {num:02d} PASS: {message}")


def _pure_block_params(per_block, k, diag, off, theta):
    n = per_block * k
    pi = np.zeros((n, k))
    for b in range(k):
        pi[per_block * b : per_block * (b + 1), b] = 1.0
    mixing = np.full((k, k), off)
    np.fill_diagonal(mixing, diag)
    return DcmmParams(
        memberships=pi, mixing=mixing, degree_weights=np.full(n, theta)
    )


def test_criterion_01_pipeline_invariants():
    start = time.perf_counter()
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = int(rng.integers(50, 301))
        k = int(rng.integers(2, 5))
        params = random_dcmm_params(rng, n, k)
        g = sample_adjacency(expected_adjacency(params), seed=int(rng.integers(2**32)))

        result = detect(g, k)
        assert np.all(result.memberships >= 0.0)
        assert np.max(np.abs(result.memberships.sum(axis=1) - 1.0)) <= 1e-10

        lap = regularized_laplacian(g)
        eig = leading_eigenpairs(lap, k + 1)
        eigen_residual = lap.matrix @ eig.vectors - eig.vectors * eig.values
        assert np.max(np.linalg.norm(eigen_residual, axis=0)) <= 1e-8

        num_vectors = select_embedding_dim(eig, k)
        assert num_vectors == result.num_vectors
        ratios = threshold_ratios(
            eigen_ratio_matrix(eig, num_vectors), default_ratio_threshold(g.n)
        )
        system = augment(ratios, kmeans(ratios.entries, k, seed=0, restarts=10))
        coefficients = project(system)
        normal_residual = (system.rows - coefficients @ system.vertices) @ system.vertices.T
        assert np.max(np.abs(normal_residual)) <= 1e-8
    elapsed = time.perf_counter() - start
    assert elapsed < 120
    _passed(1, f"100 random graphs, invariants and residuals hold ({elapsed:.1f}s)")


def test_criterion_02_metric_oracle_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(22)
    for k in (2, 3, 4, 5, 6):
        perms = list(itertools.permutations(range(k)))
        for _ in range(200):
            n = int(rng.integers(5, 25))
            est = rng.gamma(1.0, size=(n, k)) + 1e-6
            est /= est.sum(axis=1, keepdims=True)
            truth = rng.gamma(1.0, size=(n, k)) + 1e-6
            truth /= truth.sum(axis=1, keepdims=True)

            cost = np.abs(est[:, :, None] - truth[:, None, :]).sum(axis=0)
            oracle = min(cost[np.arange(k), perm].sum() for perm in perms) / n
            assert mixed_hamming(est, truth, method="assignment").mixed_hamming == oracle
            assert mixed_hamming(est, truth, method="brute").mixed_hamming == oracle

            est_labels = rng.integers(1, k + 1, size=n)
            truth_labels = rng.integers(1, k + 1, size=n)
            confusion = np.zeros((k, k))
            np.add.at(confusion, (est_labels - 1, truth_labels - 1), 1.0)
            best = min(
                n - int(confusion[np.arange(k), perm].sum()) for perm in perms
            )
            assert hamming_error(est_labels, truth_labels, k=k) == best / n
    elapsed = time.perf_counter() - start
    assert elapsed < 30
    _passed(2, f"200 instances per k in 2..6 match enumeration exactly ({elapsed:.1f}s)")


def test_criterion_03_exact_recovery_strong_signal():
    start = time.perf_counter()
    params = _pure_block_params(100, 3, diag=0.9, off=0.05, theta=0.9)
    omega = expected_adjacency(params)
    truth = np.argmax(params.memberships, axis=1) + 1
    errors = []
    for seed in range(10):
        g = sample_adjacency(omega, seed=seed)
        result = detect(g, 3)
        errors.append(hamming_error(result.labels, truth, k=3))
    elapsed = time.perf_counter() - start
    assert float(np.median(errors)) == 0.0
    assert max(errors) <= 0.02
    assert elapsed < 60
    _passed(3, f"10 seeds, median 0, max {max(errors):.4f} ({elapsed:.1f}s)")


def test_criterion_04_weak_signal_branch():
    params = _pure_block_params(50, 4, diag=0.9, off=0.05, theta=0.9)
    g = sample_adjacency(expected_adjacency(params), seed=0)

    eig = leading_eigenpairs(regularized_laplacian(g), 4)
    weakness = signal_weakness(eig, 3)
    assert 0.0 < weakness <= 0.1  # the instance really is borderline for k=3

    wide = detect(g, 3, weak_signal_threshold=0.1)
    assert wide.num_vectors == 4
    assert np.max(np.abs(wide.memberships.sum(axis=1) - 1.0)) <= 1e-10

    narrow = detect(g, 3, weak_signal_threshold=0.0)
    assert narrow.num_vectors == 3
    assert np.max(np.abs(narrow.memberships.sum(axis=1) - 1.0)) <= 1e-10
    _passed(4, f"weakness {weakness:.4f}: embeds 4 vectors at t=0.1, 3 at t=0")


def test_criterion_05_pure_fraction_trend():
    start = time.perf_counter()
    rows = run_experiment("1b", repetitions=10, seed=1, threads=4)
    means = [row["mean_error"] for row in rows]
    elapsed = time.perf_counter() - start
    assert means[-1] < means[0]  # n0=160 beats n0=40
    violations = sum(means[i + 1] > means[i] + 1e-12 for i in range(len(means) - 1))
    assert violations <= 1
    assert elapsed < 300
    _passed(
        5,
        f"error falls {means[0]:.3f} -> {means[-1]:.3f}, "
        f"{violations} increase(s) ({elapsed:.1f}s)",
    )


def test_criterion_06_mixing_level_trend():
    start = time.perf_counter()
    rows = run_experiment("2a", repetitions=10, seed=1, threads=4)
    means = [row["mean_error"] for row in rows]
    elapsed = time.perf_counter() - start
    assert means[-1] > means[0]  # rho=0.35 is harder than rho=0
    assert elapsed < 300
    _passed(6, f"error rises {means[0]:.3f} -> {means[-1]:.3f} ({elapsed:.1f}s)")


def test_criterion_07_generator_calibration():
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    params = random_dcmm_params(rng, 60, 3)
    omega = expected_adjacency(params)
    samples = 2000
    total = np.zeros_like(omega)
    for seed in range(samples):
        total += sample_adjacency(omega, seed=seed).adjacency()
    mean = total / samples

    upper = np.triu_indices(60, k=1)
    picks = rng.choice(upper[0].size, size=100, replace=False)
    worst = 0.0
    for p in picks:
        i, j = upper[0][p], upper[1][p]
        sd = np.sqrt(omega[i, j] * (1.0 - omega[i, j]) / samples)
        z = abs(mean[i, j] - omega[i, j]) / sd
        worst = max(worst, z)
        assert z <= 4.0
    elapsed = time.perf_counter() - start
    assert elapsed < 60
    _passed(7, f"100 entries within 4 sigma, worst {worst:.2f} ({elapsed:.1f}s)")


def test_criterion_08_kmeans_kmedians_parity():
    start = time.perf_counter()
    km = run_experiment("3b", repetitions=10, seed=1, method="kmeans", threads=4)
    kd = run_experiment("3b", repetitions=10, seed=1, method="kmedians", threads=4)
    means_km = [row["mean_error"] for row in km]
    means_kd = [row["mean_error"] for row in kd]
    elapsed = time.perf_counter() - start
    gaps = [abs(a - b) for a, b in zip(means_km, means_kd)]
    assert abs(float(np.mean(means_km)) - float(np.mean(means_kd))) <= 0.05
    assert max(gaps) <= 0.05
    assert elapsed < 300
    _passed(8, f"largest per-point gap {max(gaps):.4f} ({elapsed:.1f}s)")


def test_criterion_09_simulation_determinism(tmp_path):
    outputs = [tmp_path / name for name in ("a.csv", "b.csv", "c.csv")]
    base = ["simulate", "--experiment", "4a", "--reps", "5", "--seed", "11"]
    assert cli.main(base + ["--threads", "1", "--out", str(outputs[0])]) == 0
    assert cli.main(base + ["--threads", "1", "--out", str(outputs[1])]) == 0
    assert cli.main(base + ["--threads", "8", "--out", str(outputs[2])]) == 0
    first = outputs[0].read_bytes()
    assert outputs[1].read_bytes() == first
    assert outputs[2].read_bytes() == first
    _passed(9, "repeat runs and thread counts give byte-identical tables")


def test_criterion_10_real_network_optional(tmp_path, capsys):
    edges = os.environ.get("SPECMIX_REAL_EDGES")
    labels = os.environ.get("SPECMIX_REAL_LABELS")
    if not edges or not labels:
        pytest.skip(
            "criterion 10 optional: set SPECMIX_REAL_EDGES and "
            "SPECMIX_REAL_LABELS (and optionally SPECMIX_REAL_K, "
            "SPECMIX_REAL_ONE_BASED, SPECMIX_REAL_MAX_ERROR) to run"
        )
    k = int(os.environ.get("SPECMIX_REAL_K", "2"))
    band = float(os.environ.get("SPECMIX_REAL_MAX_ERROR", "0.10"))
    est = tmp_path / "est.csv"
    args = ["detect", "--edges", edges, "--k", str(k), "--out", str(est)]
    if os.environ.get("SPECMIX_REAL_ONE_BASED", "1").lower() not in ("0", "false"):
        args.append("--one-based")
    assert cli.main(args) == 0
    capsys.readouterr()
    assert cli.main(["eval", "--est", str(est), "--truth", labels, "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["hamming_error"] < band
    _passed(10, f"real network error {report['hamming_error']:.4f} < {band}")
