import numpy as np
import pytest

from coatom_forge.hermitian import ground_projector, numerical_rank
from coatom_forge.local_space import Hypergraph, factor_interaction_basis, AlgebraKind
from coatom_forge.sdp import SdpOptions, SolveStatus, dual_residuals, minimize
from coatom_forge.spectra import coordinates_of, from_local_space
from conftest import diag_projector

TIGHT = SdpOptions(gap_tol=1e-11)

CAP_CENTres = [
    (-1, -1, -1, (1, 1, 1)),
    (-1, 1, 1, (1, -1, -1)),
    (1, -1, 1, (-1, 1, -1)),
    (1, 1, -1, (-1, -1, 1)),
]


def test_cayley_vertex(cayley):
    c = -np.ones(3) / np.sqrt(3)
    sol = minimize(cayley, c, TIGHT)
    assert sol.status is SolveStatus.CONVERGED
    assert np.abs(sol.x_star - 1.0).max() < 1e-6
    assert numerical_rank(sol.optimum_matrix) == 1


def test_cayley_cap_directions(cayley):
    # directions inside a narrow cone around the cap centre all reach the
    # same vertex
    rng = np.random.default_rng(0)
    centre = -np.ones(3) / np.sqrt(3)
    for _ in range(10):
        c = centre + 0.2 * rng.standard_normal(3)
        c /= np.linalg.norm(c)
        sol = minimize(cayley, c, TIGHT)
        assert np.abs(sol.x_star - 1.0).max() < 1e-6


def test_cayley_all_four_vertices(cayley):
    for cx, cy, cz, vertex in CAP_CENTres:
        c = np.array([cx, cy, cz]) / np.sqrt(3)
        sol = minimize(cayley, c, TIGHT)
        assert np.abs(sol.x_star - np.array(vertex)).max() < 1e-6
        assert numerical_rank(sol.optimum_matrix) == 1


def test_sandwich_bound_on_vertices(cayley):
    # true optimum is -sqrt(3) at each tetrahedron vertex
    for cx, cy, cz, _ in CAP_CENTres:
        c = np.array([cx, cy, cz]) / np.sqrt(3)
        sol = minimize(cayley, c, TIGHT)
        true_opt = -np.sqrt(3.0)
        assert sol.objective >= true_opt - 1e-8
        assert sol.objective - sol.gap_bound <= true_opt + 1e-8


def test_classical_vertex_targeting(qubit_spec):
    # minimize against the coordinates of the edge projector {000, 111};
    # the optimum is the exposed point 4P' - I of rank 2
    p_edge = diag_projector({0, 7}).matrix
    c = -coordinates_of(qubit_spec, p_edge)
    sol = minimize(qubit_spec, c, TIGHT)
    assert sol.status is SolveStatus.CONVERGED
    expected = coordinates_of(qubit_spec, 4 * p_edge - np.eye(8))
    assert np.abs(sol.x_star - expected).max() < 1e-6
    assert numerical_rank(sol.optimum_matrix) == 2
    gp = ground_projector(sol.optimum_matrix - 4.0 * np.eye(8))
    assert np.abs(gp.matrix - (np.eye(8) - p_edge)).max() < 1e-6


def test_converged_contract(cayley):
    sol = minimize(cayley, np.array([0.3, -0.5, 0.1]))
    assert sol.status is SolveStatus.CONVERGED
    assert sol.gap_bound <= 1e-9
    feas, stat = dual_residuals(cayley, sol)
    assert feas <= 1e-9
    assert stat <= 1e-6


def test_iteration_cap(cayley):
    sol = minimize(cayley, np.ones(3), SdpOptions(max_outer=2))
    assert sol.status is SolveStatus.ITERATION_CAP
    feas, stat = dual_residuals(cayley, sol)
    assert np.isfinite(feas) and np.isfinite(stat)


def test_objective_monotone_across_stages(cayley, qubit_spec):
    rng = np.random.default_rng(1)
    for spec in (cayley, qubit_spec):
        c = rng.standard_normal(spec.m)
        c /= np.linalg.norm(c)
        sol = minimize(spec, c, TIGHT)
        objs = np.array(sol.stage_objectives)
        assert np.all(np.diff(objs) <= 1e-9)


def test_scale_invariance(qubit_spec):
    rng = np.random.default_rng(2)
    c = rng.standard_normal(36)
    c /= np.linalg.norm(c)
    s1 = minimize(qubit_spec, c, TIGHT)
    s2 = minimize(qubit_spec, 2 * c, TIGHT)
    assert np.abs(s1.x_star - s2.x_star).max() < 1e-6


def test_determinism(qubit_spec):
    rng = np.random.default_rng(3)
    c = rng.standard_normal(36)
    c /= np.linalg.norm(c)
    s1 = minimize(qubit_spec, c)
    s2 = minimize(qubit_spec, c)
    assert np.array_equal(s1.x_star, s2.x_star)
    assert s1.newton_iters == s2.newton_iters


def test_zero_objective_rejected(cayley):
    with pytest.raises(ValueError, match="zero objective"):
        minimize(cayley, np.zeros(3))


def test_length_mismatch(cayley):
    with pytest.raises(ValueError):
        minimize(cayley, np.ones(4))


def test_degenerate_spectrahedron_rejected():
    basis = factor_interaction_basis(Hypergraph(3, [set()]), (AlgebraKind.QUBIT,) * 3)
    spec = from_local_space(basis)
    with pytest.raises(ValueError, match="degenerate"):
        minimize(spec, np.zeros(0))
