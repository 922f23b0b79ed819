import math

import networkx as nx
import numpy as np
import pytest

from conftest import assert_values_close, from_nx, random_symmetric
from graph_core import LoopSet, SelfLoopGraph, enumerate_labeled_graphs, make_named
from energy import adjacency_with_loops
from spectral import (
    ClusteredSpectrum,
    EigensolverError,
    RegularBlockSpec,
    Spectrum,
    SpectralError,
    cluster_spectrum,
    eigenvalues_symmetric,
    is_positive_semidefinite,
    join_spectrum_regular,
    regular_block,
    singular_values_symmetric,
    subadditivity_gap,
    trace_norm,
    zero_diagonal_leak,
)


class TestEigenvalues:
    @pytest.mark.parametrize("matrix,expected", [
        ([[0, 1, 1], [1, 0, 1], [1, 1, 0]], [2, -1, -1]),
        ([[0, 1, 0], [1, 0, 1], [0, 1, 0]], [math.sqrt(2), 0, -math.sqrt(2)]),
        ([[3, 0, 0], [0, 1, 0], [0, 0, -2]], [3, 1, -2]),
        ([[5]], [5]),
    ])
    def test_examples(self, matrix, expected):
        assert_values_close(eigenvalues_symmetric(matrix).values, expected, 1e-10)

    def test_values_are_non_increasing(self, rng):
        values = eigenvalues_symmetric(random_symmetric(rng, 9)).values
        assert list(values) == sorted(values, reverse=True)

    def test_rejects_non_symmetric(self):
        with pytest.raises(SpectralError, match="symmetric"):
            eigenvalues_symmetric([[0, 1], [0, 0]])
        with pytest.raises(SpectralError):
            eigenvalues_symmetric([[1, 2, 3]])

    def test_rejects_order_zero(self):
        with pytest.raises(SpectralError):
            eigenvalues_symmetric(np.zeros((0, 0)))

    def test_reports_non_convergence(self):
        with pytest.raises(EigensolverError) as excinfo:
            eigenvalues_symmetric([[0.0, 1.0], [1.0, 0.0]], max_sweeps=0)
        assert excinfo.value.residual == pytest.approx(math.sqrt(2))

    def test_zero_matrix(self):
        assert eigenvalues_symmetric(np.zeros((4, 4))).values == (0.0, 0.0, 0.0, 0.0)

    @pytest.mark.parametrize("n", [3, 5, 8, 13])
    def test_known_families(self, n):
        complete = eigenvalues_symmetric(make_named("complete", [n]).adjacency_matrix()).values
        assert_values_close(complete, [n - 1] + [-1] * (n - 1), 1e-9)

        path = eigenvalues_symmetric(make_named("path", [n]).adjacency_matrix()).values
        assert_values_close(path, [2 * math.cos(k * math.pi / (n + 1)) for k in range(1, n + 1)], 1e-9)

        cycle = eigenvalues_symmetric(make_named("cycle", [n]).adjacency_matrix()).values
        assert_values_close(cycle, [2 * math.cos(2 * math.pi * k / n) for k in range(n)], 1e-9)

    @pytest.mark.parametrize("p,q", [(1, 1), (1, 4), (2, 3), (3, 3), (4, 6)])
    def test_complete_bipartite(self, p, q):
        values = eigenvalues_symmetric(make_named("complete_bipartite", [p, q]).adjacency_matrix()).values
        root = math.sqrt(p * q)
        assert_values_close(values, [root, -root] + [0] * (p + q - 2), 1e-9)

    def test_trace_and_frobenius_identities(self, rng):
        for _ in range(100):
            m = random_symmetric(rng, int(rng.integers(1, 21)))
            values = np.array(eigenvalues_symmetric(m).values)
            scale = max(1.0, float(np.linalg.norm(m)))
            assert abs(values.sum() - np.trace(m)) <= 1e-9 * scale
            assert abs((values ** 2).sum() - np.linalg.norm(m) ** 2) <= 1e-9 * scale ** 2
            assert_values_close(values, np.linalg.eigvalsh(m), 1e-9 * scale)

    @pytest.mark.slow
    def test_trace_and_frobenius_identities_large(self, rng):
        for _ in range(1000):
            m = random_symmetric(rng, int(rng.integers(1, 51)))
            values = np.array(eigenvalues_symmetric(m).values)
            scale = max(1.0, float(np.linalg.norm(m)))
            assert abs(values.sum() - np.trace(m)) <= 1e-9 * scale
            assert abs((values ** 2).sum() - np.linalg.norm(m) ** 2) <= 1e-9 * scale ** 2
            assert_values_close(values, np.linalg.eigvalsh(m), 1e-9 * scale)


class TestSingularValues:
    @pytest.mark.parametrize("matrix,expected", [
        ([[0, 1, 1], [1, 0, 1], [1, 1, 0]], [2, 1, 1]),
        ([[-0.5, 1], [1, -0.5]], [1.5, 0.5]),
        (np.zeros((4, 4)), [0, 0, 0, 0]),
    ])
    def test_examples(self, matrix, expected):
        assert_values_close(singular_values_symmetric(matrix).values, expected, 1e-10)

    def test_trace_norm(self):
        assert trace_norm([[0, 1], [1, 0]]) == pytest.approx(2.0)
        assert trace_norm(np.eye(3)) == pytest.approx(3.0)


class TestClusters:
    def test_merges_close_values(self):
        clusters = cluster_spectrum(Spectrum.from_values([2 + 1e-10, 2, -1]))
        assert len(clusters.pairs) == 2
        assert clusters.pairs[0][0] == pytest.approx(2.0)
        assert clusters.pairs[0][1] == 2
        assert clusters.pairs[1] == (-1.0, 1)
        assert clusters.order == 3

    def test_single_value(self):
        assert cluster_spectrum(Spectrum.from_values([5])).pairs == ((5.0, 1),)

    def test_separates_beyond_tolerance(self):
        clusters = cluster_spectrum(Spectrum.from_values([1.0, 1.0 + 1e-3]))
        assert [m for _, m in clusters.pairs] == [1, 1]

    def test_rejects_non_positive_tolerance(self):
        with pytest.raises(SpectralError):
            cluster_spectrum(Spectrum.from_values([1.0]), tol=0.0)

    def test_multiplicity_and_matches(self):
        a = ClusteredSpectrum(((3.0, 2), (0.0, 1)))
        b = ClusteredSpectrum(((3.0 + 1e-9, 2), (1e-9, 1)))
        assert a.multiplicity(3.0) == 2
        assert a.multiplicity(1.0) == 0
        assert a.matches(b)
        assert not a.matches(ClusteredSpectrum(((3.0, 1), (0.0, 2))))
        assert not a.matches(ClusteredSpectrum(((3.0, 3),)))


class TestJoinSpectrum:
    def test_block_spec_validation(self):
        with pytest.raises(SpectralError):
            RegularBlockSpec(1.0, (0.0,), 3)
        with pytest.raises(SpectralError):
            RegularBlockSpec(0.0, (), 0)

    @pytest.mark.parametrize("p,q", [(1, 1), (2, 3), (4, 4), (12, 12)])
    def test_empty_blocks_give_complete_bipartite(self, p, q):
        spectrum = join_spectrum_regular(
            RegularBlockSpec(0.0, (0.0,) * (p - 1), p),
            RegularBlockSpec(0.0, (0.0,) * (q - 1), q),
        )
        root = math.sqrt(p * q)
        assert_values_close(spectrum.values, [root, -root] + [0] * (p + q - 2), 1e-12)

    def test_hex_prism_with_loops_against_empty12(self):
        h_side = regular_block(adjacency_with_loops(SelfLoopGraph.all_loops(make_named("hex_prism"))))
        assert h_side.row_sum == 4.0
        assert_values_close(h_side.residual, [3, 3, 2, 1, 1, 1, 1, 0, -1, -1, -2], 1e-9)

        spectrum = join_spectrum_regular(h_side, RegularBlockSpec(0.0, (0.0,) * 11, 12))
        assert spectrum.values[0] == pytest.approx(2 + 2 * math.sqrt(37))
        assert spectrum.values[-1] == pytest.approx(2 - 2 * math.sqrt(37))

    def test_complex_roots(self):
        block = RegularBlockSpec(0.0, (0.0,), 2)
        with pytest.raises(SpectralError, match="complex"):
            join_spectrum_regular(block, block, a=1.0, b=-1.0)

    def test_regular_block_rejects_irregular(self, p3):
        with pytest.raises(SpectralError):
            regular_block(p3.adjacency_matrix())

    @pytest.mark.parametrize("a", [1.0, 0.5, 2.0])
    def test_random_regular_joins(self, rng, a):
        shapes = [(0, 3), (1, 4), (2, 5), (3, 6), (2, 7), (3, 8), (4, 8)]
        for _ in range(35):
            blocks, matrices = [], []
            for _side in range(2):
                d, n = shapes[int(rng.integers(len(shapes)))]
                g = from_nx(nx.random_regular_graph(d, n, seed=int(rng.integers(1 << 30))))
                loops = LoopSet(n, g.vertex_mask if rng.integers(2) else 0)
                m = adjacency_with_loops(SelfLoopGraph(g, loops))
                matrices.append(m)
                blocks.append(regular_block(m))
            m1, m2 = matrices
            joined = np.block([
                [m1, a * np.ones((m1.shape[0], m2.shape[0]))],
                [a * np.ones((m2.shape[0], m1.shape[0])), m2],
            ])
            predicted = join_spectrum_regular(blocks[0], blocks[1], a=a, b=a)
            assert_values_close(predicted.values, eigenvalues_symmetric(joined).values, 1e-8)


class TestSubadditivity:
    def test_examples(self):
        assert subadditivity_gap(np.eye(2), np.eye(2)) == pytest.approx(0.0, abs=1e-12)
        assert subadditivity_gap(np.diag([1.0, -1.0]), np.diag([-1.0, 1.0])) == pytest.approx(4.0)

    def test_order_mismatch(self):
        with pytest.raises(SpectralError):
            subadditivity_gap(np.eye(2), np.eye(3))

    def test_random_pairs_are_non_negative(self, rng):
        for _ in range(500):
            order = int(rng.integers(1, 12))
            assert subadditivity_gap(random_symmetric(rng, order), random_symmetric(rng, order)) >= -1e-8

    @pytest.mark.slow
    def test_random_pairs_are_non_negative_many(self, rng):
        for _ in range(10_000):
            order = int(rng.integers(1, 16))
            assert subadditivity_gap(random_symmetric(rng, order), random_symmetric(rng, order)) >= -1e-8


def _interlaces(g):
    base = np.array(eigenvalues_symmetric(g.adjacency_matrix()).values)
    for mask in range(1, 1 << g.n):
        looped = np.array(eigenvalues_symmetric(adjacency_with_loops(SelfLoopGraph(g, LoopSet(g.n, mask)))).values)
        shift = looped - base
        if shift.min() < -1e-9 or shift.max() > 1 + 1e-9:
            return False
    return True


class TestLoopInterlacing:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_adding_loops_moves_each_eigenvalue_by_at_most_one(self, n):
        assert all(_interlaces(g) for g in enumerate_labeled_graphs(n))

    @pytest.mark.slow
    def test_five_vertices(self):
        assert all(_interlaces(g) for g in enumerate_labeled_graphs(5))

    @pytest.mark.slow
    def test_six_vertex_sample(self, rng):
        graphs = list(enumerate_labeled_graphs(6))
        for k in rng.choice(len(graphs), size=300, replace=False):
            assert _interlaces(graphs[int(k)])


class TestPositiveSemidefinite:
    def test_gram_matrix_with_zero_column(self, rng):
        for _ in range(50):
            k = int(rng.integers(2, 9))
            b = rng.normal(size=(6, k))
            j = int(rng.integers(k))
            b[:, j] = 0.0
            gram = b.T @ b
            gram = (gram + gram.T) / 2.0
            assert is_positive_semidefinite(gram)
            assert zero_diagonal_leak(gram) <= 1e-12

    def test_zero_diagonal_row_must_vanish_for_psd(self, k2):
        a = k2.adjacency_matrix()
        assert not is_positive_semidefinite(a)
        assert zero_diagonal_leak(a) == 1.0

    def test_no_zero_diagonal(self):
        assert zero_diagonal_leak(np.eye(3)) == 0.0
        assert is_positive_semidefinite(np.eye(3))
