import math

import numpy as np
import pytest

import sigdev


def unit_line():
    return sigdev.Path(np.array([0.0, 1.0]), np.array([[0.0], [1.0]]))


def test_path_round_trip():
    p = sigdev.gen_fbm(0.75, 16, 2, 7)
    assert len(p) == 16 and p.dim == 2
    q = sigdev.Path(p.times, p.points)
    assert np.array_equal(q.points, p.points)
    assert p.points[0].tolist() == [0.0, 0.0]


def test_straight_line_kernel():
    line = unit_line()
    const = sigdev.Path(np.array([0.0, 1.0]), np.array([[0.0], [0.0]]))
    j1 = 0.5767248077568734
    assert sigdev.exact_straight_line(1.0, 0.0, 1.0) == pytest.approx(j1, abs=1e-12)
    assert sigdev.k_sd(line, const, scheme="explicit", lam=6) == pytest.approx(j1, abs=5e-3)
    assert sigdev.k_sd(line, line, scheme="series") == pytest.approx(1.0, abs=1e-10)
    value, tail, level = sigdev.series_oracle(line, 1e-10)
    assert value == pytest.approx(j1, abs=1e-10) and tail <= 1e-10 and level % 2 == 0


def test_signature_kernel_bessel():
    g = sigdev.Path(np.array([0.0, 1.0]), np.array([[0.0, 0.0], [1.0, 0.0]]))
    s = sigdev.Path(np.array([0.0, 1.0]), np.array([[0.0, 0.0], [1.0, 1.0]]))
    value, _, _ = sigdev.signature_kernel(g, s, 1e-12)
    assert value == pytest.approx(2.2795853023360673, abs=1e-10)


def test_free_probability():
    assert sigdev.catalan(5) == 42
    assert len(sigdev.nc2_enumerate(6)) == 5
    assert sigdev.semicircular_moment([1, 2, 1, 2]) == 0
    assert sigdev.semicircular_moment([1, 2, 2, 1]) == 1
    assert sigdev.generation_labels("()()(()(()))") == [3, 2, 1, 3, 2, 3]


def test_mmd_and_gram():
    a = [sigdev.gen_fbm(0.75, 5, 2, s).scaled(0.2) for s in range(3)]
    b = [sigdev.gen_fbm(0.6, 5, 2, 10 + s).scaled(0.2) for s in range(3)]
    assert sigdev.mmd2(a, a) == 0.0
    g = sigdev.gram(a)
    assert g.shape == (3, 3)
    assert np.array_equal(g, g.T)
    assert np.linalg.eigvalsh(g).min() >= -1e-6
    assert sigdev.mmd2(a, b) >= -1e-6


def test_monte_carlo_is_seeded():
    line = unit_line()
    r1 = sigdev.rk_montecarlo(line, 40, 20, seed=5)
    r2 = sigdev.rk_montecarlo(line, 40, 20, seed=5)
    assert r1 == r2
    assert r1["max_unitarity_defect"] <= 1e-10
    assert abs(r1["estimate"] - 0.5767) < 0.05


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        sigdev.Path(np.array([0.0, 0.0]), np.array([[1.0], [2.0]]))
    with pytest.raises(ValueError):
        sigdev.k_sd(unit_line(), unit_line(), scheme="bogus")
    big = sigdev.Path(np.array([0.0, 1.0]), np.array([[0.0] * 5, [9.0] * 5]))
    with pytest.raises(RuntimeError):
        sigdev.series_oracle(big, 1e-12)


def test_selftest_passes():
    results = sigdev.selftest()
    assert results and all(ok for _, ok, _ in results), [r for r in results if not r[1]]
