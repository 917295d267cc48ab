"""Branching level-translation process: geometry, degrees, invariance.

Return probabilities have small closed forms because a level step is a
fresh nonbacktracking walk: with involutive generators a single step can
never return, and a two-step return must retrace the first step's geodesic
(probability 1/d for the first letter, then 1/(d-1) per interior letter).
"""

import json
import random

import pytest

from treeperc.schramm import (SchrammParams, connection_vs_2_over_m, grow,
                              invariance_test, return_probability,
                              transience_threshold, w_root_degree)
from treeperc.trees import tree_distance


class TestThreshold:
    def test_spot_values(self):
        assert transience_threshold((10, 10), 3, c=1.0) == 2
        assert transience_threshold((6, 6), 3, c=0.5) == 1
        assert transience_threshold((8, 8), 3, c=0.5) == 1
        assert transience_threshold((20, 20), 3, c=0.5) == 327

    def test_clamped_to_one(self):
        assert transience_threshold((1, 1), 3) == 1

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            transience_threshold((0, 0), 3)
        with pytest.raises(ValueError):
            transience_threshold((1, 1), 3, c=0.0)


class TestParams:
    def test_node_counts(self):
        assert SchrammParams((1, 1), 1, 0).node_count() == 1
        assert SchrammParams((1, 1), 1, 2).node_count() == 5
        assert SchrammParams((1, 1), 2, 2).node_count() == 10
        assert SchrammParams((1, 1), 2, 3).node_count() == 22

    def test_validation(self):
        with pytest.raises(ValueError):
            SchrammParams((1, 1), 0, 2)
        with pytest.raises(ValueError):
            SchrammParams((1, 1), 1, -1)
        with pytest.raises(ValueError):
            SchrammParams((0, 0), 1, 2)


class TestGrow:
    def test_shape_and_steps(self, txt3):
        params = SchrammParams((1, 1), 2, 2)
        tree = grow(txt3, params, random.Random(5))
        assert len(tree.positions) == params.node_count()
        by_depth = {}
        for dep in tree.depth_of:
            by_depth[dep] = by_depth.get(dep, 0) + 1
        assert by_depth == {0: 1, 1: 3, 2: 6}
        assert len(tree.children[0]) == 3
        for cid in tree.children[0]:
            assert len(tree.children[cid]) == 2
        for cid in range(1, len(tree.positions)):
            par = tree.positions[tree.parent[cid]]
            pos = tree.positions[cid]
            assert tree_distance(par[0], pos[0]) == 1
            assert tree_distance(par[1], pos[1]) == 1

    def test_deterministic_in_stream(self, txt3):
        params = SchrammParams((2, 1), 2, 3)
        a = grow(txt3, params, random.Random(9))
        b = grow(txt3, params, random.Random(9))
        assert a.positions == b.positions

    def test_budget(self, txt3):
        with pytest.raises(ValueError):
            grow(txt3, SchrammParams((1, 1), 2, 2), random.Random(1),
                 node_budget=5)


class TestReturnProbability:
    def test_one_step_never_returns_moved_coordinate(self, txt3):
        rep = return_probability(txt3, (1, 0), 1, 500, seed=3)
        assert rep.per_coordinate == (0.0, 1.0)
        assert rep.joint == 0.0

    def test_two_step_single_letter(self, txt3):
        rep = return_probability(txt3, (1, 0), 2, 3000, seed=5)
        assert abs(rep.per_coordinate[0] - 1 / 3) < 0.04
        assert rep.per_coordinate[1] == 1.0
        assert abs(rep.joint - 1 / 3) < 0.04

    def test_two_step_both_coordinates(self, txt3):
        rep = return_probability(txt3, (2, 2), 2, 6000, seed=7)
        assert abs(rep.per_coordinate[0] - 1 / 6) < 0.02
        assert abs(rep.per_coordinate[1] - 1 / 6) < 0.02
        assert abs(rep.joint - 1 / 36) < 0.01
        assert rep.fitted_c1 >= 1.0
        assert rep.bound_ok

    def test_rejects_zero_steps(self, txt3):
        with pytest.raises(ValueError):
            return_probability(txt3, (1, 1), 0, 10, seed=1)


class TestRootDegree:
    def test_empty_environment(self, txt3):
        params = SchrammParams((1, 1), 1, 1)
        rep = w_root_degree(txt3, params, 0.0, 0.0, 200, seed=11)
        assert rep.mean_upper == 0.0
        assert rep.censored_children == 0
        assert rep.counts == {0: 200}
        assert rep.below_two

    def test_full_environment_negative_control(self, txt3):
        params = SchrammParams((1, 1), 1, 1)
        rep = w_root_degree(txt3, params, 1.0, 1.0, 100, seed=13)
        assert rep.mean_lower == rep.mean_upper == 2.0
        assert rep.counts == {2: 100}
        assert not rep.below_two

    def test_truncation_widens_bracket(self, txt3):
        params = SchrammParams((3, 3), 1, 1)
        rep = w_root_degree(txt3, params, 0.3, 0.3, 100, seed=17, n_cap=200)
        assert rep.censored_children > 0
        assert rep.mean_upper > rep.mean_lower
        assert "censored" in rep.counts


class TestConnectionBound:
    def test_full_environment_saturates(self, txt3):
        rep = connection_vs_2_over_m(txt3, (1, 1), 1.0, 1.0, 50, seed=19)
        assert rep.m == 1
        assert rep.bound == 1.0
        assert rep.estimate_lower == 1.0
        assert rep.ok

    def test_subcritical(self, txt3):
        rep = connection_vs_2_over_m(txt3, (2, 2), 0.1, 0.1, 400, seed=23)
        assert rep.estimate_upper < 0.1
        assert rep.ok


class TestInvariance:
    def test_requires_depth_two(self, txt3):
        with pytest.raises(ValueError):
            invariance_test(txt3, SchrammParams((1, 1), 1, 1), 0.1, 0.1,
                            10, seed=1)

    def test_null_smoke(self, txt3):
        params = SchrammParams((1, 1), 1, 2)
        rep = invariance_test(txt3, params, 0.15, 0.15, 400, seed=29,
                              n_cap=2000)
        assert rep.ok
        assert rep.realizations == 400
        assert sum(rep.edge_counts[0].values()) == 200
        assert sum(rep.edge_counts[1].values()) == 200
        assert rep.corrected_alpha == pytest.approx(rep.alpha / 2)
        for side in rep.degree_counts:
            assert set(side) <= {0, 1, 2, "censored"}
        json.dumps(rep.as_dict())
