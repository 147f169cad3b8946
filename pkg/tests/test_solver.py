"""Structured least-squares solver, simplex projection, and Slater LP."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from clarke_kkt.solver import project_simplex, slater_direction, solve_structured_ls


# --- simplex projection -----------------------------------------------------

def test_project_simplex_fixes_simplex_points():
    v = np.array([0.2, 0.5, 0.3])
    np.testing.assert_allclose(project_simplex(v), v, atol=1e-12)


def test_project_simplex_corner():
    np.testing.assert_allclose(project_simplex(np.array([10.0, 0.0])), [1.0, 0.0])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=8))
def test_project_simplex_feasible(values):
    out = project_simplex(np.array(values))
    assert np.all(out >= -1e-12)
    assert abs(out.sum() - 1.0) <= 1e-9


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=2, max_size=5), st.integers(0, 10**6))
def test_project_simplex_is_closest(values, seed):
    # any random simplex point is no closer than the projection
    v = np.array(values)
    proj = project_simplex(v)
    rng = np.random.default_rng(seed)
    other = rng.dirichlet(np.ones(v.size))
    assert np.linalg.norm(v - proj) <= np.linalg.norm(v - other) + 1e-9


# --- structured least squares ----------------------------------------------

def grid_min_residual(G, J1=None, J2_active=None, z_box=2.0, step=1e-3):
    """Brute-force oracle: residual min over a dense grid of (lam, z1, z2).

    Supports k <= 3, m <= 1, a <= 1; vectorized so a few million grid points
    stay fast.  Independent of the projected-gradient path it checks.
    """
    G = np.asarray(G, dtype=float)
    n, k = G.shape
    assert k <= 3
    ticks = np.arange(0.0, 1.0 + step / 2, step)
    if k == 1:
        lams = np.array([[1.0]])
    elif k == 2:
        lams = np.column_stack([ticks, 1.0 - ticks])
    else:
        a_grid, b_grid = np.meshgrid(ticks, ticks, indexing="ij")
        mask = a_grid + b_grid <= 1.0 + 1e-12
        lams = np.column_stack([a_grid[mask], b_grid[mask], 1.0 - a_grid[mask] - b_grid[mask]])
    points = lams @ G.T  # (L, n)
    best = np.inf
    z_ticks = np.arange(-z_box, z_box + step / 2, step)
    z2_ticks = np.arange(0.0, z_box + step / 2, step)
    if J1 is None and J2_active is None:
        return float(np.min(np.linalg.norm(points, axis=1)))
    if J1 is not None and J2_active is None:
        row = np.asarray(J1, dtype=float).reshape(1, n)[0]
        for z1 in z_ticks:
            best = min(best, float(np.min(np.linalg.norm(points + z1 * row, axis=1))))
        return best
    if J1 is None and J2_active is not None:
        row = np.asarray(J2_active, dtype=float).reshape(1, n)[0]
        for z2 in z2_ticks:
            best = min(best, float(np.min(np.linalg.norm(points + z2 * row, axis=1))))
        return best
    row1 = np.asarray(J1, dtype=float).reshape(1, n)[0]
    row2 = np.asarray(J2_active, dtype=float).reshape(1, n)[0]
    for z1 in z_ticks:
        shifted = points + z1 * row1
        for z2 in z2_ticks:
            best = min(best, float(np.min(np.linalg.norm(shifted + z2 * row2, axis=1))))
    return best


def test_single_zero_column():
    result = solve_structured_ls(np.zeros((2, 1)))
    np.testing.assert_array_equal(result.lam, [1.0])
    assert result.residual == 0.0
    assert result.converged


def test_exact_cancellation_with_equality():
    g = np.array([[2.0], [1.0]])
    result = solve_structured_ls(g, J1=g.T)
    assert result.residual <= 1e-8
    assert result.z1[0] == pytest.approx(-1.0, abs=1e-6)


def test_simplex_and_sign_feasibility():
    rng = np.random.default_rng(0)
    result = solve_structured_ls(rng.normal(size=(3, 5)), J1=rng.normal(size=(1, 3)),
                                 J2_active=rng.normal(size=(2, 3)))
    assert np.all(result.lam >= -1e-12)
    assert abs(result.lam.sum() - 1.0) <= 1e-12
    assert np.all(result.z2_active >= -1e-12)


def test_p2_instance_matches_hand_solution():
    # hull of (1,0) and (0,1) with equality row (1,1): lam=(1/2,1/2), z1=-1/2
    G = np.array([[1.0, 0.0], [0.0, 1.0]])
    result = solve_structured_ls(G, J1=np.array([[1.0, 1.0]]))
    assert result.residual <= 1e-6
    assert result.z1[0] == pytest.approx(-0.5, abs=1e-6)
    np.testing.assert_allclose(result.lam, [0.5, 0.5], atol=1e-5)


@pytest.mark.parametrize("G,J1,J2a", [
    (np.array([[-1.0, 1.0]]), None, None),                       # P1 vertices
    (np.array([[1.0, 0.0], [0.0, 1.0]]), [[1.0, 1.0]], None),    # P2 vertices
    (np.array([[-1.0, 1.0], [1.0, 1.0]]), None, [[0.0, -1.0]]),  # P3 vertices
    (np.array([[-1.0], [-1.0]]), [[1.0, 1.0]], None),            # P4 gradient
    (np.array([[1.0], [0.0]]), [[1.0, 1.0]], None),              # P2 probe gradient
])
def test_residual_matches_grid_oracle(G, J1, J2a):
    G = np.asarray(G, dtype=float)
    result = solve_structured_ls(G, J1=J1, J2_active=J2a)
    oracle = grid_min_residual(G, J1, J2a)
    assert abs(result.residual - oracle) <= 2e-3


def test_iteration_cap_reports_nonconvergence():
    rng = np.random.default_rng(1)
    result = solve_structured_ls(rng.normal(size=(4, 6)), J1=rng.normal(size=(2, 4)),
                                 iter_cap=3, tol=1e-16)
    assert not result.converged


# --- Slater direction -------------------------------------------------------

def test_slater_single_active_inequality():
    phi, converged = slater_direction(np.zeros((0, 2)), np.array([[0.0, -1.0]]))
    assert converged
    assert -phi[1] <= -1.0 + 1e-8


def test_slater_with_equality_row():
    J1 = np.array([[1.0, 1.0]])
    J2a = np.array([[1.0, 0.0]])
    phi, converged = slater_direction(J1, J2a)
    assert converged
    assert abs(J1 @ phi)[0] <= 1e-8
    assert (J2a @ phi)[0] <= -1.0 + 1e-8


def test_slater_infeasible_reports_violation():
    # phi and -phi cannot both be <= -1 along the same row
    J2a = np.array([[1.0, 0.0], [-1.0, 0.0]])
    phi, converged = slater_direction(np.zeros((0, 2)), J2a)
    assert converged
    assert np.max(J2a @ phi) > -1.0 + 1e-8


def test_slater_empty_active_set():
    phi, converged = slater_direction(np.array([[1.0, 0.0]]), np.zeros((0, 2)))
    assert converged
    np.testing.assert_array_equal(phi, np.zeros(2))
