"""Tests for relations, distortion, and GH distance solvers."""

import itertools
import random

import pytest

from ghgeo import (
    Correspondence,
    HeuristicConfig,
    InvalidRelation,
    NotSurjective,
    Relation,
    SearchSpaceTooLarge,
    SizeMismatch,
    correspondence_from_json_dict,
    distortion,
    enumerate_correspondences,
    gh_distance_exact,
    gh_distance_heuristic,
    gh_lower_bound,
    validate_metric,
)

from instances import one_point_space, planar_pair, planar_space, two_point_space
from oracles import naive_gh, naive_surjective_masks


def two_v_two():
    return two_point_space(2.0), validate_metric([[0, 1], [1, 0]], name="Y")


class TestRelationTypes:
    def test_empty_pairs_rejected(self):
        with pytest.raises(InvalidRelation):
            Relation(2, 2, frozenset())

    def test_out_of_range_rejected(self):
        with pytest.raises(InvalidRelation):
            Relation(2, 2, frozenset({(0, 2)}))

    def test_non_surjective_rejected(self):
        Relation(2, 2, frozenset({(0, 0)}))  # fine as a relation
        with pytest.raises(NotSurjective):
            Correspondence(2, 2, frozenset({(0, 0)}))

    def test_bitmask_round_trip(self):
        corr = Correspondence(2, 2, frozenset({(0, 1), (1, 0)}))
        assert corr.bitmask() == 6
        assert Correspondence.from_bitmask(2, 2, 6).pairs == corr.pairs

    def test_transpose(self):
        corr = Correspondence(2, 1, frozenset({(0, 0), (1, 0)}))
        assert corr.transpose().pairs == frozenset({(0, 0), (0, 1)})

    def test_json_round_trip(self):
        corr = Correspondence(2, 2, frozenset({(0, 1), (1, 0)}))
        assert correspondence_from_json_dict(corr.to_json_dict()).pairs == corr.pairs


class TestDistortion:
    def test_identity_correspondence_zero(self):
        x = planar_space(3, 3)
        ident = Correspondence(3, 3, frozenset((i, i) for i in range(3)))
        assert distortion(ident, x, x) == 0.0

    def test_collapse_to_point(self):
        x, y = two_point_space(2.0), one_point_space()
        r = Correspondence(2, 1, frozenset({(0, 0), (1, 0)}))
        assert distortion(r, x, y) == 2.0

    def test_full_product(self):
        x, y = two_v_two()
        full = Correspondence(2, 2, frozenset(itertools.product(range(2), range(2))))
        assert distortion(full, x, y) == 2.0

    def test_singleton_relation_zero(self):
        x, y = two_v_two()
        assert distortion(Relation(2, 2, frozenset({(1, 1)})), x, y) == 0.0

    def test_size_mismatch(self):
        x, y = two_v_two()
        with pytest.raises(SizeMismatch):
            distortion(Relation(3, 2, frozenset({(2, 1)})), x, y)


class TestEnumeration:
    @pytest.mark.parametrize("m,n,count", [(1, 1, 1), (1, 2, 1), (2, 2, 7)])
    def test_known_counts(self, m, n, count):
        assert sum(1 for _ in enumerate_correspondences(m, n)) == count

    def test_count_2x3_matches_oracle(self):
        oracle = naive_surjective_masks(2, 3)
        got = [c.bitmask() for c in enumerate_correspondences(2, 3)]
        assert got == oracle
        assert len(got) == 25

    def test_order_is_ascending_bitmask(self):
        masks = [c.bitmask() for c in enumerate_correspondences(2, 2)]
        assert masks == sorted(masks)

    def test_cap_enforced(self):
        with pytest.raises(SearchSpaceTooLarge):
            list(enumerate_correspondences(6, 5))

    def test_min_distortion_dominates_diameter_gap(self):
        for seed in range(12):
            rng = random.Random(seed)
            x = planar_space(seed * 2 + 1, rng.randint(1, 3))
            y = planar_space(seed * 2 + 2, rng.randint(1, 4))
            lo = abs(x.diameter() - y.diameter())
            dis_min = min(
                distortion(c, x, y) for c in enumerate_correspondences(len(x), len(y))
            )
            assert dis_min >= lo - 1e-12


class TestExactSolver:
    def test_equal_matrices_give_zero(self):
        x = planar_space(7, 3)
        y = validate_metric(x.dist, name="copy")
        res = gh_distance_exact(x, y)
        assert res.value == 0.0
        assert res.method == "exact"
        assert res.is_certified_optimal

    def test_two_points_vs_one(self):
        res = gh_distance_exact(two_point_space(2.0), one_point_space())
        assert res.value == 1.0
        assert res.witness.pairs == frozenset({(0, 0), (1, 0)})

    def test_two_v_two(self):
        x, y = two_v_two()
        res = gh_distance_exact(x, y)
        assert res.value == 0.5
        assert res.witness.is_bijection
        # canonical witness: smallest bitmask among the two optimal bijections
        assert res.witness.bitmask() == 6

    def test_value_is_half_witness_distortion(self):
        x, y = planar_pair(11, sizes=(2, 3))
        res = gh_distance_exact(x, y)
        assert res.value == 0.5 * distortion(res.witness, x, y)

    def test_matches_naive_enumeration(self):
        for seed in range(25):
            x, y = planar_pair(seed)
            value, mask = naive_gh(x.dist.tolist(), y.dist.tolist())
            res = gh_distance_exact(x, y)
            assert res.value == value
            assert res.witness.bitmask() == mask

    def test_tie_break_matches_oracle_on_equal_spaces(self):
        # many zero-distortion correspondences exist; the canonical witness
        # (fewest pairs, then smallest bitmask) must match the naive scan
        x = planar_space(55, 3)
        y = validate_metric(x.dist, name="copy")
        value, mask = naive_gh(x.dist.tolist(), y.dist.tolist())
        res = gh_distance_exact(x, y)
        assert res.value == value == 0.0
        assert res.witness.bitmask() == mask

    def test_symmetry_under_transpose(self):
        for seed in range(10):
            x, y = planar_pair(seed + 100)
            fwd = gh_distance_exact(x, y)
            bwd = gh_distance_exact(y, x)
            assert fwd.value == bwd.value
            assert distortion(fwd.witness.transpose(), y, x) == 2.0 * bwd.value

    def test_self_distance_zero(self):
        for seed in range(5):
            x = planar_space(seed, 1 + seed % 4)
            assert gh_distance_exact(x, x).value == 0.0

    def test_triangle_inequality_on_small_triples(self):
        for seed in range(15):
            rng = random.Random(seed)
            spaces = [planar_space(seed * 10 + i, rng.randint(1, 3)) for i in range(3)]
            x, y, z = spaces
            dxy = gh_distance_exact(x, y).value
            dyz = gh_distance_exact(y, z).value
            dxz = gh_distance_exact(x, z).value
            assert dxz <= dxy + dyz + 1e-12

    def test_cap_enforced(self):
        x = planar_space(1, 6)
        y = planar_space(2, 5)
        with pytest.raises(SearchSpaceTooLarge):
            gh_distance_exact(x, y)


class TestLowerBound:
    def test_identical_spaces(self):
        x = planar_space(3, 3)
        assert gh_lower_bound(x, x) == 0.0

    def test_two_points_vs_one(self):
        assert gh_lower_bound(two_point_space(2.0), one_point_space()) == 1.0

    def test_two_v_two(self):
        x, y = two_v_two()
        assert gh_lower_bound(x, y) == 0.5

    def test_never_exceeds_exact(self):
        for seed in range(20):
            x, y = planar_pair(seed + 400)
            assert gh_lower_bound(x, y) <= gh_distance_exact(x, y).value + 1e-15


class TestHeuristic:
    def test_identical_spaces_reach_zero(self):
        x = planar_space(42, 4)
        y = validate_metric(x.dist, name="copy")
        res = gh_distance_heuristic(x, y)
        assert res.value == 0.0
        assert res.method == "heuristic"
        assert not res.is_certified_optimal

    @pytest.mark.parametrize("seed", [0, 1, 7, 123])
    def test_two_v_two_any_seed(self, seed):
        x, y = two_v_two()
        res = gh_distance_heuristic(x, y, HeuristicConfig(seed=seed))
        assert res.value == 0.5

    def test_upper_bounds_exact_on_five_point_pairs(self):
        for seed in range(12):
            rng = random.Random(seed)
            x = planar_space(seed * 3 + 1, rng.randint(2, 5))
            y = planar_space(seed * 3 + 2, rng.randint(2, 5))
            exact = gh_distance_exact(x, y).value
            heur = gh_distance_heuristic(x, y).value
            assert heur >= exact - 1e-12

    def test_deterministic_for_fixed_seed(self):
        x = planar_space(9, 5)
        y = planar_space(10, 4)
        cfg = HeuristicConfig(seed=3)
        a = gh_distance_heuristic(x, y, cfg)
        b = gh_distance_heuristic(x, y, cfg)
        assert a.value == b.value
        assert a.witness.pairs == b.witness.pairs

    def test_witness_backs_the_value(self):
        x = planar_space(21, 5)
        y = planar_space(22, 3)
        res = gh_distance_heuristic(x, y)
        assert res.value == 0.5 * distortion(res.witness, x, y)
