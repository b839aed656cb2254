import math

import numpy as np
import pytest

import instances
from odg import (
    ComparisonGraph,
    Design,
    Spectrum,
    covariance_matrix,
    criterion_from_spectrum,
    detect_pairwise,
    efficiency,
    eigenvalues_sym,
    graph_system,
    information_matrix,
    permute_design,
    psi_p,
    psi_p_via_laplacian,
    rank_of,
    validate_p,
)
from odg.symmetry import Permutation

NEG_INF = float("-inf")
P_GRID = (0.0, -0.5, -1.0, -2.0, NEG_INF)
S7 = 4.0 + 2.0 * math.sqrt(3.0) + math.sqrt(2.0)


def test_validate_p():
    assert validate_p(-1) == -1.0
    assert validate_p(NEG_INF) == NEG_INF
    with pytest.raises(ValueError):
        validate_p(0.5)
    with pytest.raises(ValueError):
        validate_p(float("nan"))


class TestPsiValues:
    def test_control_average_column(self):
        # rank-1 column: the determinant form reduces to a weighted harmonic sum
        system = instances.control_average_column(4)
        w = Design(np.array([0.5, 1 / 6, 1 / 6, 1 / 6]))
        value = psi_p(system, w, 0.0)
        assert math.isclose(value.psi, 4.0, rel_tol=1e-12)
        assert value.rank == 1

    def test_control_average_formula_random_designs(self, rng):
        for v in (3, 5, 8):
            system = instances.control_average_column(v)
            for _ in range(10):
                w = instances.random_design(rng, v)
                expected = 1.0 / w.w[0] + np.sum(1.0 / w.w[1:]) / (v - 1) ** 2
                assert math.isclose(psi_p(system, w, 0.0).psi, expected, rel_tol=1e-12)

    def test_single_edge_trace(self):
        system = graph_system(ComparisonGraph(2, ((1, 0),)))
        assert math.isclose(psi_p(system, Design.uniform(2), -1.0).psi, 4.0, rel_tol=1e-14)

    def test_paw_degree_rule_largest_eigenvalue(self, paw_system):
        w = Design(np.array([3 / 8, 1 / 4, 1 / 4, 1 / 8]))
        assert abs(psi_p(paw_system, w, NEG_INF).psi - 13.8297) < 5e-4

    def test_phi_psi_relations(self, tree7, rng):
        w = instances.random_design(rng, 7)
        for p in P_GRID:
            value = psi_p(tree7, w, p)
            if p == NEG_INF:
                assert math.isclose(value.phi, 1.0 / value.psi, rel_tol=1e-12)
            elif p == 0.0:
                assert math.isclose(value.phi, value.psi ** (-1.0 / value.rank), rel_tol=1e-12)
            else:
                assert math.isclose(value.phi, (value.psi / value.rank) ** (1.0 / p), rel_tol=1e-12)

    def test_full_rank_smallest_information_eigenvalue(self, tree7, rng):
        w = instances.random_design(rng, 7)
        value = psi_p(tree7, w, NEG_INF)
        info_min = eigenvalues_sym(information_matrix(tree7, w)).values[-1]
        assert math.isclose(value.phi, info_min, rel_tol=1e-8)


class TestLaplacianRoute:
    def test_tree7_trace_at_row_norm_rule(self, tree7, tree7_graph):
        w = Design(np.sqrt(np.array(tree7_graph.degrees)) / S7)
        value = psi_p_via_laplacian(tree7_graph, w, -1.0)
        assert math.isclose(value.psi, S7 * S7, rel_tol=1e-12)
        direct = psi_p(tree7, w, -1.0)
        assert math.isclose(value.psi, direct.psi, rel_tol=1e-12)

    def test_tree7_degree_rule_largest_eigenvalue(self, tree7_graph):
        w = Design(np.array(tree7_graph.degrees) / 12.0)
        assert abs(psi_p_via_laplacian(tree7_graph, w, NEG_INF).psi - 24.0) < 1e-10

    def test_path_uniform_determinant(self):
        from odg import rooted_forest_weight

        graph = instances.path3_graph()
        value = psi_p_via_laplacian(graph, Design.uniform(3), 0.0)
        assert math.isclose(value.psi, 27.0, rel_tol=1e-12)
        assert math.isclose(rooted_forest_weight(graph, Design.uniform(3), 1), 27.0)

    def test_route_agreement_random(self, rng):
        for _ in range(200):
            graph = instances.random_pairwise_graph(rng, 8)
            system = graph_system(graph)
            w = instances.random_design(rng, graph.v)
            rank = rank_of(system)
            for p in P_GRID:
                a = psi_p(system, w, p, rank=rank)
                b = psi_p_via_laplacian(graph, w, p, rank=rank)
                assert math.isclose(a.psi, b.psi, rel_tol=1e-8)


class TestEfficiency:
    def test_identity(self, tree7, rng):
        w = instances.random_design(rng, 7)
        for p in P_GRID:
            assert math.isclose(efficiency(tree7, w, w, p), 1.0, rel_tol=1e-12)

    def test_paw_degree_rule_vs_better_point(self, paw_system):
        w = Design(np.array([3 / 8, 1 / 4, 1 / 4, 1 / 8]))
        better = Design(np.array([0.38, 0.23, 0.23, 0.16]))
        eff = efficiency(paw_system, w, better, NEG_INF)
        assert abs(eff - 13.0435 / 13.8297) < 1e-4

    def test_tree7_uniform_vs_row_norm_rule(self, tree7):
        from odg import a_optimal

        eff = efficiency(tree7, Design.uniform(7), a_optimal(tree7).design, -1.0)
        assert math.isclose(eff, S7 * S7 / 84.0, rel_tol=1e-12)


class TestInvarianceAndMonotonicity:
    def test_permutation_invariance(self, rng):
        system = instances.two_groups_system(3)
        perm = Permutation.from_cycle([0, 3, 1, 4, 2, 5])
        for _ in range(20):
            w = instances.random_design(rng, 6)
            permuted = permute_design(w, perm)
            for p in P_GRID:
                a = psi_p(system, w, p)
                b = psi_p(system, permuted, p)
                assert math.isclose(a.psi, b.psi, rel_tol=1e-10)

    def test_scaling_up_increases_psi(self, tree7, rng):
        # replacing w by w/c (c > 1, evaluated unnormalized) scales the
        # covariance spectrum by c and must increase every criterion value
        w = instances.random_design(rng, 7)
        spectrum = eigenvalues_sym(covariance_matrix(tree7, w))
        c = 1.7
        scaled = Spectrum(spectrum.values * c, tol=spectrum.tol * c)
        for p in P_GRID:
            base = criterion_from_spectrum(spectrum, 6, p)
            up = criterion_from_spectrum(scaled, 6, p)
            assert up.psi > base.psi


def test_rank_passed_explicitly_controls_reduction():
    system = instances.centered_contrasts(3)
    w = Design.uniform(3)
    assert math.isclose(psi_p(system, w, 0.0, rank=2).psi, 9.0, rel_tol=1e-12)
    with pytest.raises(Exception):
        psi_p(system, w, 0.0, rank=3)  # third eigenvalue is zero
