# -*- coding: utf-8 -*-

import numpy as np

from dualband_alloc.services.baseline_service import random_grouping, random_ownership, round_robin_ownership
from dualband_alloc.services.grouping_service import is_partition


class TestRoundRobin:

    def test_cyclic_in_ua_id_order(self):
        ownership = round_robin_ownership([5, 2, 9], 7)
        assert ownership.ua_ids == (2, 5, 9)
        assert list(ownership.rb_owner) == [2, 5, 9, 2, 5, 9, 2]

    def test_no_uas(self):
        ownership = round_robin_ownership([], 4)
        assert ownership.free_rbs().size == 4


class TestRandomOwnership:

    def test_balanced_and_complete(self, rng):
        for _ in range(20):
            count = int(rng.integers(1, 10))
            rb_count = int(rng.integers(count, 55))
            ownership = random_ownership(list(range(count)), rb_count, rng)
            owned = [ownership.owned_count(ua) for ua in range(count)]
            assert min(owned) >= 1
            assert max(owned) - min(owned) <= 1
            assert ownership.free_rbs().size == 0

    def test_seeded(self):
        first = random_ownership([0, 1, 2], 10, np.random.default_rng(5))
        second = random_ownership([0, 1, 2], 10, np.random.default_rng(5))
        assert np.array_equal(first.rb_owner, second.rb_owner)


class TestRandomGrouping:

    def test_partition_with_nonempty_groups(self, rng):
        for _ in range(50):
            count = int(rng.integers(3, 30))
            horizon = int(rng.integers(1, 4))
            ua_ids = list(range(100, 100 + count))
            assignment = random_grouping(ua_ids, {ua: 1.0 for ua in ua_ids}, horizon, rng)
            assert is_partition(assignment, ua_ids)
            assert all(assignment.counts)
            assert all(list(group) == sorted(group) for group in assignment.groups)

    def test_fewer_uas_than_groups(self, rng):
        assignment = random_grouping([0], {0: 1.0}, 3, rng)
        assert sorted(assignment.counts) == [0, 0, 1]
