"""Moore lattice construction, teleconnection augmentation, and the
neighbour-conformity fraction."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ablum import (
    ConfigurationError,
    NetworkConfig,
    SocialNetwork,
    UndefinedFractionError,
    add_teleconnections,
    build_lattice,
    build_network,
    neighbour_intensity_fraction,
)
from ablum.network import _csr_from_pairs


def degrees(net: SocialNetwork) -> np.ndarray:
    return np.diff(net.indptr)


class TestBuildLattice:
    def test_interior_degree_radius_1(self):
        net = build_lattice(5, 5, 1)
        assert degrees(net)[2 * 5 + 2] == 8

    def test_corner_degree_radius_1(self):
        net = build_lattice(5, 5, 1)
        assert degrees(net)[0] == 3

    def test_interior_degree_radius_2(self):
        net = build_lattice(7, 7, 2)
        assert degrees(net)[3 * 7 + 3] == 24  # (2*2+1)^2 - 1

    def test_neighbours_by_chebyshev_distance(self):
        net = build_lattice(5, 5, 1)
        got = sorted(net.neighbours(0))
        assert got == [1, 5, 6]

    def test_no_wraparound(self):
        net = build_lattice(4, 4, 1)
        # cell 3 is the top-right corner; cell 4 starts the next row
        assert 4 not in net.neighbours(3)

    def test_radius_too_large_rejected(self):
        with pytest.raises(ConfigurationError):
            build_lattice(5, 5, 5)

    def test_radius_zero_rejected(self):
        with pytest.raises(ConfigurationError):
            build_lattice(5, 5, 0)

    @given(st.integers(3, 8), st.integers(3, 8), st.integers(1, 2))
    @settings(max_examples=25, deadline=None)
    def test_symmetry_and_no_self_loops(self, w, h, r):
        if r >= min(w, h):
            return
        net = build_lattice(w, h, r)
        for i in range(net.n_cells):
            for j in net.neighbours(i):
                assert j != i
                assert net.has_edge(j, i)

    @given(st.integers(3, 8), st.integers(1, 3))
    @settings(max_examples=20, deadline=None)
    def test_interior_degree_formula(self, side, r):
        if r >= (side - 1) // 2 + 1:
            return
        net = build_lattice(side, side, r)
        centre = (side // 2) * side + side // 2
        assert degrees(net)[centre] == (2 * r + 1) ** 2 - 1


class TestTeleconnections:
    def test_zero_is_identity(self):
        net = build_lattice(6, 6, 1)
        aug = add_teleconnections(net, 0, 5)
        assert np.array_equal(net.indptr, aug.indptr)
        assert np.array_equal(net.indices, aug.indices)

    def test_exact_edge_count(self):
        net = build_lattice(10, 10, 1)
        aug = add_teleconnections(net, 40, 5)
        assert aug.num_edges == net.num_edges + 40

    def test_paper_scale_mean_degree(self):
        net = build_lattice(101, 101, 2)
        aug = add_teleconnections(net, 4000, 0)
        before = degrees(net).mean()
        after = degrees(aug).mean()
        assert after - before == pytest.approx(2 * 4000 / 10201, abs=1e-9)

    def test_second_round_still_adds_exactly_n(self):
        net = build_lattice(8, 8, 1)
        once = add_teleconnections(net, 20, 3)
        twice = add_teleconnections(once, 20, 3)
        assert twice.num_edges == once.num_edges + 20

    def test_deterministic_per_seed(self):
        net = build_lattice(9, 9, 1)
        a = add_teleconnections(net, 30, 11)
        b = add_teleconnections(net, 30, 11)
        assert np.array_equal(a.indices, b.indices)

    def test_new_edges_not_in_lattice(self):
        net = build_lattice(8, 8, 1)
        aug = add_teleconnections(net, 25, 7)
        new = set(map(tuple, aug.edge_pairs())) - set(map(tuple, net.edge_pairs()))
        assert len(new) == 25
        for i, j in new:
            assert not net.has_edge(i, j) and i != j

    def test_too_many_rejected(self):
        net = build_lattice(3, 3, 1)
        # 9 cells: 36 unordered pairs, 20 lattice edges, 16 free slots
        with pytest.raises(ConfigurationError):
            add_teleconnections(net, 17, 0)
        aug = add_teleconnections(net, 16, 0)
        assert aug.num_edges == 36

    @given(st.integers(0, 2**31 - 1))
    @settings(max_examples=20, deadline=None)
    def test_augmented_network_invariants(self, seed):
        net = add_teleconnections(build_lattice(7, 7, 1), 15, seed)
        for i in range(net.n_cells):
            row = net.neighbours(i)
            assert len(set(row)) == len(row)  # no duplicate edges
            for j in row:
                assert j != i and net.has_edge(j, i)


class TestBuildNetwork:
    def test_config_round(self):
        net = build_network(6, 6, NetworkConfig(moore_radius=1, n_teleconnections=5, seed=2))
        assert net.num_edges == build_lattice(6, 6, 1).num_edges + 5


class TestNeighbourIntensityFraction:
    def lattice_and_intensity(self, neigh_levels):
        # centre of a 3x3, 8 neighbours in index order 0,1,2,3,5,6,7,8
        net = build_lattice(3, 3, 1)
        intens = np.empty(9)
        order = [0, 1, 2, 3, 5, 6, 7, 8]
        for idx, level in zip(order, neigh_levels):
            intens[idx] = level
        intens[4] = 0.5
        return net, intens

    def test_unanimous(self):
        net, intens = self.lattice_and_intensity([1.0] * 8)
        got = neighbour_intensity_fraction(net, intens, 4, 0.5, "at_or_above")
        assert got == 1.0

    def test_at_or_below_hand_count(self):
        net, intens = self.lattice_and_intensity([1, 1, 0.5, 0.5, 0.5, 0, 0, 0])
        got = neighbour_intensity_fraction(net, intens, 4, 0.5, "at_or_below")
        assert got == pytest.approx(0.75, abs=1e-9)

    def test_at_or_above_hand_count(self):
        net, intens = self.lattice_and_intensity([1, 1, 0.5, 0.5, 0.5, 0, 0, 0])
        got = neighbour_intensity_fraction(net, intens, 4, 0.5, "at_or_above")
        assert got == pytest.approx(0.625, abs=1e-9)

    def test_isolated_cell_errors(self):
        empty = np.empty(0, dtype=np.int64)
        net = _csr_from_pairs(2, empty, empty)
        with pytest.raises(UndefinedFractionError):
            neighbour_intensity_fraction(net, np.zeros(2), 0, 0.5, "at_or_above")

    def test_self_excluded_from_count(self):
        net, intens = self.lattice_and_intensity([0.0] * 8)
        # centre itself is at 0.5 but must not count
        got = neighbour_intensity_fraction(net, intens, 4, 0.5, "at_or_above")
        assert got == 0.0
