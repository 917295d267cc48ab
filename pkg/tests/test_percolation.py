"""Environment determinism, coupling, and exploration against exact counts."""

import random

import pytest

from treeperc.percolation import Config, edge_uniform, explore
from treeperc.trees import make_graph, product_ball_size, sphere_size


def all_edges_near_root(g, hops=2):
    seen = set()
    frontier = [g.root]
    keys = []
    for _ in range(hops):
        nxt = []
        for v in frontier:
            for key, other, coord in g.incident(v):
                if key not in seen:
                    seen.add(key)
                    keys.append((key, coord))
                if other not in seen:
                    nxt.append(other)
        frontier = nxt
    return keys


class TestConfig:
    def test_rejects_bad_density(self):
        g = make_graph("tree", 3)
        with pytest.raises(ValueError):
            Config(g, 1.2)
        with pytest.raises(ValueError):
            Config(g, 0.5, -0.1)

    def test_p2_defaults_to_p1(self):
        g = make_graph("TxT", 3)
        cfg = Config(g, 0.3)
        assert cfg.p2 == 0.3

    @pytest.mark.parametrize("kind", ["tree", "TxT", "TxZ"])
    def test_memo_matches_direct_hash(self, kind):
        g = make_graph(kind, 3)
        cfg = Config(g, 0.5, seed=77)
        for key, coord in all_edges_near_root(g):
            u = cfg.edge_uniform(key)
            assert u == edge_uniform(g, 77, key)
            assert u == cfg.edge_uniform(key)
            assert 0.0 <= u < 1.0

    def test_query_order_independent(self):
        g = make_graph("TxT", 3)
        keys = all_edges_near_root(g)
        a = Config(g, 0.5, seed=5)
        b = Config(g, 0.5, seed=5)
        ua = [a.edge_uniform(k) for k, _ in keys]
        ub = [b.edge_uniform(k) for k, _ in reversed(keys)]
        assert ua == list(reversed(ub))

    def test_seeds_decorrelate(self):
        g = make_graph("TxT", 3)
        keys = all_edges_near_root(g)
        a = Config(g, 0.5, seed=1)
        b = Config(g, 0.5, seed=2)
        assert [a.edge_uniform(k) for k, _ in keys] != \
            [b.edge_uniform(k) for k, _ in keys]

    def test_coordinate_densities_split(self):
        g = make_graph("TxT", 3)
        cfg = Config(g, 1.0, 0.0, seed=3)
        for key, other, coord in g.incident(g.root):
            assert cfg.edge_state(key, coord) == (coord == 1)


class TestExplore:
    def test_p_zero_is_singleton(self):
        for kind in ("tree", "TxT", "TxZ"):
            g = make_graph(kind, 3)
            st = explore(Config(g, 0.0, seed=1))
            assert st.size == 1 and st.complete and not st.truncated
            assert st.shell_counts == [1]

    @pytest.mark.parametrize("kind", ["tree", "TxT", "TxZ"])
    def test_p_one_ball_is_graph_ball(self, kind):
        g = make_graph(kind, 3)
        st = explore(Config(g, 1.0, seed=2), r_cap=4)
        if kind == "tree":
            want = sum(sphere_size(3, k) for k in range(5))
        else:
            want = product_ball_size(3, 4, kind)
        assert st.size == want
        assert st.ball_size(4) == want
        assert not st.complete and st.frontier_alive > 0

    def test_p_one_shells_are_spheres(self):
        g = make_graph("TxT", 3)
        st = explore(Config(g, 1.0, seed=2), r_cap=5)
        assert st.shell_counts == [1, 6, 21, 60, 156, 384]

    def test_determinism(self):
        g = make_graph("TxT", 3)
        a = explore(Config(g, 0.4, seed=42), n_cap=5000)
        b = explore(Config(g, 0.4, seed=42), n_cap=5000)
        assert a.shell_counts == b.shell_counts
        assert a.explored_edges == b.explored_edges

    def test_size_consistency(self):
        g = make_graph("TxZ", 3)
        st = explore(Config(g, 0.35, seed=9), n_cap=5000, keep_visited=True)
        assert st.size == len(st.visited) == sum(st.norm_histogram.values())

    def test_monotone_coupling(self):
        g = make_graph("TxT", 3)
        for seed in range(12):
            lo = explore(Config(g, 0.12, seed=seed), n_cap=20000, keep_visited=True)
            hi = explore(Config(g, 0.18, seed=seed), n_cap=20000, keep_visited=True)
            if lo.truncated or hi.truncated:
                continue
            assert lo.visited <= hi.visited

    def test_chemical_ball_monotone_in_p(self):
        # more open edges only shorten chemical distances
        g = make_graph("TxT", 3)
        for seed in range(8):
            lo = explore(Config(g, 0.3, seed=seed), r_cap=3, keep_visited=True)
            hi = explore(Config(g, 0.6, seed=seed), r_cap=3, keep_visited=True)
            assert lo.visited <= hi.visited

    def test_truncation_reports(self):
        g = make_graph("TxT", 3)
        st = explore(Config(g, 1.0, seed=4), n_cap=10)
        assert st.truncated and not st.complete
        assert st.size <= 10
        assert st.frontier_alive > 0

    def test_depths_match_shells(self):
        g = make_graph("TxT", 3)
        st = explore(Config(g, 0.5, seed=6), r_cap=4, keep_depths=True)
        for r, count in enumerate(st.shell_counts):
            assert sum(1 for dep in st.depths.values() if dep == r) == count

    def test_targets_found_at_depth(self):
        g = make_graph("TxT", 3)
        probe = explore(Config(g, 0.6, seed=8), r_cap=4, keep_depths=True)
        targets = list(probe.depths)[:8]
        st = explore(Config(g, 0.6, seed=8), r_cap=4, targets=targets)
        for t in targets:
            assert st.found[t] == probe.depths[t]

    def test_stop_on_targets(self):
        g = make_graph("TxT", 3)
        st = explore(Config(g, 1.0, seed=1), targets=[g.root],
                     stop_on_targets=True)
        assert st.stopped_early and st.found[g.root] == 0 and st.size == 1

    def test_shell_norms_recorded(self):
        g = make_graph("TxT", 3)
        st = explore(Config(g, 1.0, seed=2), r_cap=3, record_shell_norms=True)
        assert [len(s) for s in st.shell_norms] == st.shell_counts
        # at full density the chemical shell is the graph sphere
        assert all(n == 2 for n in st.shell_norms[2])
