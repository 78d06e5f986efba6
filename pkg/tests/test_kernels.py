from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest

from cloudgdm import kernels
from cloudgdm.lp import TOL, lp_from_arrays, solve_lp
from cloudgdm.weights import build_weight_lp

backends = kernels.available_backends()
compiled = pytest.mark.skipif("cython" not in backends, reason="compiled extension not built")


@compiled
def test_certainty_agrees():
    rng = np.random.default_rng(0)
    x = rng.normal(size=10_000)
    en = np.abs(rng.normal(1, 0.5, 10_000))
    en[:10] = 0.0
    x[:5] = 0.0
    a = backends["cython"].certainty(x, 0.0, en)
    b = backends["python"].certainty(x, 0.0, en)
    assert np.allclose(a, b, rtol=4e-16 * 8, atol=0)
    assert np.array_equal(a[:10], b[:10])


@compiled
def test_iaa_sweep_agrees():
    rng = np.random.default_rng(1)
    for _ in range(500):
        d = int(rng.integers(1, 10))
        ends = np.sort(rng.integers(0, 8, (d, 2)).astype(float), axis=1)
        a = backends["cython"].iaa_sweep(ends[:, 0].copy(), ends[:, 1].copy())
        b = backends["python"].iaa_sweep(ends[:, 0].copy(), ends[:, 1].copy())
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


@compiled
def test_simplex_agrees():
    rng = np.random.default_rng(2)
    for _ in range(20):
        he = rng.uniform(0.1, 5, (int(rng.integers(1, 5)), int(rng.integers(2, 5))))
        lp = build_weight_lp(he)
        results = []
        for name in ("cython", "python"):
            original = (kernels.simplex_iterate, kernels.pivot)
            kernels.simplex_iterate, kernels.pivot = backends[name].simplex_iterate, backends[name].pivot
            try:
                results.append(solve_lp(lp))
            finally:
                kernels.simplex_iterate, kernels.pivot = original
        assert results[0].objective == pytest.approx(results[1].objective, abs=TOL)
        # same pivoting rule, so both backends land on the same vertex
        assert results[0].values == pytest.approx(results[1].values, abs=1e-12)


def test_env_var_forces_fallback():
    env = dict(os.environ, CLOUDGDM_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from cloudgdm import kernels; print(kernels.BACKEND)"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "python"


def test_fallback_solves():
    sol = solve_lp(lp_from_arrays([1.0], [[1.0]], [">="], [3.0]))
    assert sol.objective == pytest.approx(3.0)
