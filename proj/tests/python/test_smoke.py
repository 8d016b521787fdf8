import math

import numpy as np
import pytest

import hcma


def test_version_and_exceptions():
    assert hcma.__version__
    assert issubclass(hcma.NonConvergence, hcma.HcmaError)
    with pytest.raises(hcma.DomainError):
        hcma.eval_family(1.0, 1.5, 0j)


def test_poisson_kernel_mass():
    q = hcma.QuadratureSpec()
    val, err = hcma.harmonic_extend(lambda t: 1.0, lambda t: 1.0, 0.0, 0.5, quad=q)
    assert abs(val - 1.0) < 1e-8
    assert err < 1e-8


def test_ijk_asymptotics():
    prev = math.inf
    for lam in (5.0, 10.0, 20.0, 40.0):
        v = hcma.ijk_functionals(lam)
        assert abs(v.K) <= v.J
        r = abs(v.J / (2 * lam) - 1)
        assert r < prev
        prev = r


def test_obstruction_scalar_and_matrix():
    one = np.eye(1, dtype=complex)
    v = hcma.check_obstruction(one, 0 * one, 3 * one)
    assert not v.satisfied
    assert v.margin == pytest.approx(-1.0)
    s = hcma.check_obstruction_sampled(one, 0 * one, 3 * one, seed=2)
    assert s.margin == pytest.approx(-1.0, abs=1e-9)
    omega = np.eye(2, dtype=complex)
    q = np.zeros((2, 2), dtype=complex)
    q[0, 0] = 0.5
    assert hcma.check_obstruction(omega, np.zeros((2, 2)), q).margin == pytest.approx(1.5)
    with pytest.raises(hcma.InvalidPotential):
        hcma.check_obstruction(one, -2 * one, 0 * one)


def test_sharp_family():
    c = hcma.verify_family(1.0, 32)
    assert c.min_c == pytest.approx(0.5)
    assert c.max_abs_det == pytest.approx(1.388622212780e-03, rel=1e-9)
    rows = hcma.sharpness_limit([1.0, 0.01])
    assert rows[1].margin == pytest.approx(0.01980198, rel=1e-6)


def test_grid_values_roundtrip(tmp_path):
    g = hcma.GridSpec.torus(8, 3)
    f = hcma.GridFunction(g, 1.0)
    a = np.arange(3 * 8 * 8, dtype=float).reshape(3, 8, 8) / 100
    f.values = a
    np.testing.assert_array_equal(f.values, a)
    path = str(tmp_path / "u.csv")
    hcma.save_grid_csv(path, f)
    np.testing.assert_array_equal(hcma.load_grid_csv(path).values, a)
    with pytest.raises(hcma.ValidationError):
        f.values = np.zeros((2, 8, 8))


def test_solve_constant_and_smooth():
    pb = hcma.torus_problem(np.full((16, 16), 0.75))
    r = hcma.solve_envelope(pb)
    t = np.array([pb.grid.t(k) for k in range(pb.grid.nt)])
    np.testing.assert_allclose(r.u.values[:, 3, 5], 0.75 * t, atol=1e-12)
    tr = hcma.linear_trace_test(r)
    assert tr.a_fit == pytest.approx(0.75)

    x = np.arange(16) / 16
    v = 0.07 * np.cos(2 * np.pi * x)[:, None] * np.ones(16)[None, :]
    v = 0.5 * (v + np.roll(v[::-1, ::-1], 1, axis=(0, 1)))
    r = hcma.solve_envelope(hcma.torus_problem(v))
    assert r.barrier_violation <= 1e-7
    assert r.u.symmetric

    pb = hcma.torus_problem(v)
    pb.grid.nt = 2
    with pytest.raises(hcma.InsufficientResolution):
        hcma.solve_envelope(pb)


def test_family_dirichlet():
    pb = hcma.family_problem(16)
    r = hcma.solve_envelope(pb)
    exact = hcma.sample_family(1.0, pb.grid).values
    assert np.max(np.abs(r.u.values - exact)) < 2e-2
    rows = hcma.blowup_rows(r.u, [0.1, 0.2])
    assert rows[1].oscillation >= rows[0].oscillation


def test_builder():
    b = hcma.build_symmetric_potential(hcma.GridSpec.torus(32, 1), 1.0, -0.5, -0.5 + 0j)
    assert b.vzzbar0 == pytest.approx(-0.5, abs=1e-9)
    assert b.min_c > 0
    assert b.v.values.shape == (1, 32, 32)
