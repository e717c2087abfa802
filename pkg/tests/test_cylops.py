import numpy as np
import pytest
import sympy as sp

from swirlbound import make_grid
from swirlbound.cylops import (AxisymVectorField, curl_axisym, divergence_axisym,
                               gradient_axisym, gradient_matrix, laplacian_axisym,
                               solve_streamfunction, stokes_operator,
                               velocity_from_streamfunction)
from swirlbound.errors import NonConvergenceError

GRID = make_grid(1, 4, -2, 2, 61, 81)
INNER = (slice(1, -1), slice(1, -1))
r_, z_ = sp.symbols("r z")


def interior(a):
    return a[INNER]


def field(*components, grid=GRID):
    return AxisymVectorField(grid, *[grid.evaluate(c) if callable(c) else c
                                     for c in components])


@pytest.mark.parametrize("f, expected", [
    (lambda r, z: r ** 2, 4.0),
    (lambda r, z: np.log(r), 0.0),
    (lambda r, z: z ** 2, 2.0),
])
def test_laplacian_of_simple_profiles(f, expected):
    lap = laplacian_axisym(GRID, GRID.evaluate(f))
    # r**2 and z**2 are exact; log r has leading truncation error -h**2 / (6 r**4)
    trunc = GRID.dr ** 2 / (6 * GRID.r_min ** 4)
    assert np.allclose(interior(lap), expected, atol=1.01 * trunc)
    assert np.isnan(lap[0]).all() and np.isnan(lap[:, -1]).all()


@pytest.mark.parametrize("f, dr, dz", [
    (lambda r, z: r, lambda r, z: 1.0, lambda r, z: 0.0),
    (lambda r, z: z, lambda r, z: 0.0, lambda r, z: 1.0),
    (lambda r, z: r * z, lambda r, z: z, lambda r, z: r),
])
def test_gradient_of_linear_fields(f, dr, dz):
    gr, gz = gradient_axisym(GRID, GRID.evaluate(f), edges=True)
    assert np.allclose(gr, GRID.evaluate(dr), atol=1e-12)
    assert np.allclose(gz, GRID.evaluate(dz), atol=1e-12)


@pytest.mark.parametrize("v_r, v_z", [
    (lambda r, z: 1 / r, 0.0),
    (lambda r, z: r, lambda r, z: -2 * z),
    (0.0, 1.0),
])
def test_divergence_free_examples(v_r, v_z):
    div = divergence_axisym(field(v_r, 0.0, v_z))
    # 1/r is not polynomial: (r v_r) = 1 is, so the difference is still exact
    assert np.allclose(interior(div), 0.0, atol=1e-12)


def test_curl_of_rigid_rotation():
    w = curl_axisym(field(0.0, lambda r, z: r, 0.0), edges=True)
    assert np.allclose(w.omega_z, 2.0, atol=1e-12)
    assert np.allclose(w.omega_r, 0.0) and np.allclose(w.omega_theta, 0.0)


def test_curl_of_potential_vortex():
    w = curl_axisym(field(0.0, lambda r, z: 1 / r, 0.0))
    # leading truncation error of d(1/r)/dr is -h**2 / r**4
    bound = GRID.dr ** 2 / GRID.rr ** 4
    assert np.all(np.abs(interior(w.omega_z)) <= 1.01 * interior(bound))


def test_curl_of_axial_profile():
    w = curl_axisym(field(0.0, 0.0, lambda r, z: 1 - r ** 2), edges=True)
    assert np.allclose(w.omega_theta, 2 * GRID.rr, atol=1e-12)
    i = int(np.argmin(np.abs(GRID.r - 2)))
    assert w.omega_theta[i, 10] == pytest.approx(4.0)


def test_curl_of_gradient_flow_vanishes_at_second_order():
    errs = []
    for n in (41, 81):
        g = make_grid(1, 4, -2, 2, n, n)
        # v = grad(sin r cos z)
        v = AxisymVectorField(g, g.evaluate(lambda r, z: np.cos(r) * np.cos(z)), 0.0,
                              g.evaluate(lambda r, z: -np.sin(r) * np.sin(z)))
        errs.append(np.nanmax(np.abs(curl_axisym(v).omega_theta)))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.2)


def test_stokes_kernel_is_preserved():
    bc = GRID.evaluate(lambda r, z: r ** 2 / 2)
    psi = solve_streamfunction(GRID, np.zeros(GRID.shape), bc)
    assert np.allclose(psi, bc, atol=1e-12)


def test_zero_data_gives_zero_streamfunction():
    psi = solve_streamfunction(GRID, np.zeros(GRID.shape))
    assert np.array_equal(psi, np.zeros(GRID.shape))


def test_streamfunction_residual_and_boundary():
    w = GRID.evaluate(lambda r, z: np.sin(r * z) + r)
    bc = GRID.evaluate(lambda r, z: r * z)
    psi = solve_streamfunction(GRID, w, bc)
    res = stokes_operator(GRID, psi) + GRID.rr * w
    assert np.max(np.abs(interior(res))) <= 1e-10 * np.max(np.abs(GRID.rr * w))
    b = GRID.boundary
    assert np.array_equal(psi[b], bc[b])


def test_periodic_streamfunction():
    g = make_grid(1, 4, -2, 2, 61, 64, True)
    w = g.evaluate(lambda r, z: np.cos(np.pi * z / 2) * (r - 1) * (4 - r))
    psi = solve_streamfunction(g, w)
    res = stokes_operator(g, psi) + g.rr * w
    assert np.max(np.abs(res[1:-1])) <= 1e-10 * np.max(np.abs(g.rr * w))


def test_non_finite_data_is_refused():
    w = np.zeros(GRID.shape)
    w[5, 5] = np.nan
    with pytest.raises((NonConvergenceError, ValueError)):
        solve_streamfunction(GRID, w)


def _meridional_oracle():
    """Divergence-free (v_r, v_z) from psi = r**2 (r - 1)**2 (4 - r)**2 cos(z)."""
    psi = r_ ** 2 * (r_ - 1) ** 2 * (4 - r_) ** 2 * sp.cos(z_) / 40
    v_r = -sp.diff(psi, z_) / r_
    v_z = sp.diff(psi, r_) / r_
    f = lambda e: sp.lambdify((r_, z_), e, "numpy")
    return f(psi), f(v_r), f(v_z)


def test_round_trip_curl_solve_velocity_second_order():
    psi_f, vr_f, vz_f = _meridional_oracle()
    errs = []
    for n in (41, 81, 161):
        g = make_grid(1, 4, -2, 2, n, n)
        v = AxisymVectorField(g, g.evaluate(vr_f), 0.0, g.evaluate(vz_f))
        w = curl_axisym(v, edges=True).omega_theta
        psi = solve_streamfunction(g, w, g.evaluate(psi_f))
        v_r, v_z = velocity_from_streamfunction(g, psi)
        errs.append(max(np.max(np.abs(v_r - v.v_r)), np.max(np.abs(v_z - v.v_z))))
    ratios = [a / b for a, b in zip(errs, errs[1:])]
    assert all(3.2 < q < 4.8 for q in ratios), ratios


def test_velocity_examples():
    u = velocity_from_streamfunction(GRID, GRID.evaluate(lambda r, z: r ** 2 / 2))
    assert np.allclose(u[0], 0.0, atol=1e-12) and np.allclose(u[1], 1.0, atol=1e-12)
    u = velocity_from_streamfunction(GRID, np.zeros(GRID.shape))
    assert not np.any(u[0]) and not np.any(u[1])
    # psi = r**2 z: v_r = -r, v_z = 2 z, both exact for a quadratic
    v_r, v_z = velocity_from_streamfunction(GRID, GRID.evaluate(lambda r, z: r ** 2 * z))
    assert np.allclose(v_r, -GRID.rr, atol=1e-12)
    assert np.allclose(v_z, 2 * GRID.zz, atol=1e-12)


def test_recovered_velocity_is_discretely_divergence_free():
    # centred differences in r and z commute, so the discrete divergence of
    # (-psi_z / r, psi_r / r) vanishes to rounding, not just at O(h**2)
    psi_f = lambda r, z: np.sin(r) * np.cos(2 * z) * r
    for n in (41, 81):
        g = make_grid(1, 4, -2, 2, n, n)
        v_r, v_z = velocity_from_streamfunction(g, g.evaluate(psi_f))
        div = divergence_axisym(AxisymVectorField(g, v_r, 0.0, v_z))
        assert np.nanmax(np.abs(div[2:-2, 2:-2])) < 1e-12


def test_gradient_matrix_examples():
    r = GRID.rr
    V = gradient_matrix(field(0.0, 0.0, 0.0), edges=True)
    assert np.allclose(V.rr, -1 / r ** 2) and not V.zr.any() and not V.rz.any() and not V.zz.any()
    V = gradient_matrix(field(0.0, 0.0, lambda r, z: 1 - r ** 2), edges=True)
    assert np.allclose(V.zr, -2 * r, atol=1e-12)
    V = gradient_matrix(field(lambda r, z: r, 0.0, lambda r, z: -2 * z), edges=True)
    assert np.allclose(V.rr, 1 - 1 / r ** 2, atol=1e-12)
    assert np.allclose(V.zz, -2.0, atol=1e-12)
    assert np.allclose(V.zr, 0) and np.allclose(V.rz, 0)
    assert np.allclose(V.max_abs(), np.maximum(np.abs(1 - 1 / r ** 2), 2.0))
