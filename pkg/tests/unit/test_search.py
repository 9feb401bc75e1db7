# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

import unittest
from fractions import Fraction

import pytest
from parameterized import parameterized

from hatlab.config.literals import Objective, Visibility
from hatlab.core.codes import min_covering_code
from hatlab.core.game import GameSpec
from hatlab.core.strategies import gray_strategy
from hatlab.exceptions import CapacityError, DomainError, UsageError
from hatlab.managers.evaluation import evaluate_exact
from hatlab.managers.search import (
    _at_least,
    gray_success_formula,
    max_first_player_passes,
    profile_table,
    profile_wins,
    restrict_profile,
    restricted_partition,
    search_optimal_sequential,
    search_optimal_simultaneous,
    strategy_space,
    table_profile,
    two_player_value,
    verify_restricted,
)

from .helpers import table


class TestStrategySpace(unittest.TestCase):
    def test_view_counts(self):
        self.assertEqual(strategy_space(3, 2, Visibility.AHEAD_ONLY).view_counts, (4, 2, 1))
        self.assertEqual(strategy_space(3, 3, Visibility.ALL_OTHERS).view_counts, (9, 9, 9))

    def test_view_masks_partition_the_configurations(self):
        space = strategy_space(3, 3, Visibility.AHEAD_ONLY)
        for masks in space.view_masks:
            union = 0
            for mask in masks:
                self.assertEqual(union & mask, 0)
                union |= mask
            self.assertEqual(union, space.full)

    @parameterized.expand([(2, 3), (3, 0), (1, 3)])
    def test_at_least(self, threshold, expected):
        self.assertEqual(_at_least([0b011, 0b101, 0b110], threshold, 0b111), expected)

    def test_at_least_counts_many_masks(self):
        masks = [0b1111, 0b0111, 0b0011, 0b0001, 0b0001]
        self.assertEqual(_at_least(masks, 4, 0b1111), 1)
        self.assertEqual(_at_least(masks, 3, 0b1111), 2)
        self.assertEqual(_at_least(masks, 6, 0b1111), 0)


class TestSequentialSearch(unittest.TestCase):
    @parameterized.expand(
        [
            (2, 2, Fraction(3, 4)),
            (3, 2, Fraction(7, 8)),
            (2, 3, Fraction(5, 9)),
            (4, 2, Fraction(15, 16)),
            (3, 3, Fraction(19, 27)),
        ]
    )
    def test_pruned_optimum(self, n, q, optimum):
        result = search_optimal_sequential(n, q, prune=True)
        self.assertEqual(result.optimum, optimum)
        self.assertEqual(result.optimum, gray_success_formula(n, q))
        self.assertGreater(result.pruned, 0)

    @parameterized.expand([(2, 2), (3, 2), (2, 3)])
    def test_pruning_keeps_the_optimum(self, n, q):
        pruned = search_optimal_sequential(n, q, prune=True)
        full = search_optimal_sequential(n, q, prune=False)
        self.assertEqual(pruned.optimum, full.optimum)
        self.assertEqual(full.pruned, 0)
        self.assertLess(pruned.strategies_examined, full.strategies_examined)

    def test_unpruned_space_size(self):
        self.assertEqual(search_optimal_sequential(3, 2, prune=False).strategies_examined, 2187)

    def test_witness_plays_the_optimum(self):
        result = search_optimal_sequential(3, 3, prune=True)
        report = evaluate_exact(result.game, result.strategy())
        self.assertEqual(report.probability, result.optimum)
        self.assertTrue(verify_restricted(result.strategy()))

    def test_workers_do_not_change_the_result(self):
        self.assertEqual(
            search_optimal_sequential(3, 2, prune=False, workers=1),
            search_optimal_sequential(3, 2, prune=False, workers=3),
        )
        self.assertEqual(
            search_optimal_sequential(3, 3, prune=True, workers=1),
            search_optimal_sequential(3, 3, prune=True, workers=4),
        )

    def test_single_player(self):
        result = search_optimal_sequential(1, 3, prune=True)
        self.assertEqual(result.optimum, Fraction(1, 3))

    def test_capacity_guard(self):
        with self.assertRaises(CapacityError):
            search_optimal_sequential(3, 3, prune=False, limit=10**6)
        with self.assertRaises(CapacityError):
            search_optimal_sequential(3, 3, prune=True, limit=1000)

    @parameterized.expand([(2, Fraction(3, 4)), (3, Fraction(7, 8))])
    @pytest.mark.slow
    def test_full_sight_does_not_help(self, n, optimum):
        result = search_optimal_sequential(n, 2, prune=False, visibility=Visibility.ALL_OTHERS)
        self.assertEqual(result.optimum, optimum)
        self.assertEqual(result.game, GameSpec.full_sight_sequential(n, 2))

    def test_full_sight_cannot_be_pruned(self):
        with self.assertRaises(UsageError):
            search_optimal_sequential(2, 2, prune=True, visibility=Visibility.ALL_OTHERS)


class TestSimultaneousSearch(unittest.TestCase):
    @pytest.mark.slow
    def test_ebert_three(self):
        result = search_optimal_simultaneous(3, 2, Objective.NONE_WRONG)
        self.assertEqual(result.optimum, Fraction(3, 4))
        size, _ = min_covering_code(3)
        self.assertEqual(result.optimum, 1 - Fraction(size, 8))
        report = evaluate_exact(result.game, result.strategy())
        self.assertEqual(report.probability, result.optimum)

    def test_majority_three(self):
        result = search_optimal_simultaneous(3, 2, Objective.MAJORITY)
        self.assertEqual(result.optimum, Fraction(3, 4))
        self.assertEqual(result.strategies_examined, 4096)
        report = evaluate_exact(result.game, result.strategy())
        self.assertEqual(report.probability, Fraction(3, 4))

    def test_single_player(self):
        result = search_optimal_simultaneous(1, 2, Objective.NONE_WRONG)
        self.assertEqual(result.optimum, Fraction(1, 2))

    def test_ebert_two(self):
        self.assertEqual(
            search_optimal_simultaneous(2, 2, Objective.NONE_WRONG).optimum, Fraction(1, 2)
        )

    def test_count_objective_is_rejected(self):
        with self.assertRaises(DomainError):
            search_optimal_simultaneous(3, 2, Objective.COUNT)

    def test_capacity_guard(self):
        with self.assertRaises(CapacityError):
            search_optimal_simultaneous(4, 2, Objective.NONE_WRONG)


class TestRestricted(unittest.TestCase):
    @parameterized.expand([(1, 2), (3, 2), (3, 3)])
    def test_gray_is_restricted(self, n, q):
        self.assertTrue(verify_restricted(gray_strategy(n, q)))

    def test_blind_second_guess_is_not_restricted(self):
        game = GameSpec.new_line(2, 2)
        strategy = table(game, {(1, "0|"): None, (1, "1|"): None, (2, "|p"): 0})
        self.assertFalse(verify_restricted(strategy))

    def test_needs_a_sequential_game(self):
        with self.assertRaises(DomainError):
            verify_restricted(table(GameSpec.ebert(1, 2), {(1, "|"): 0}))

    def test_restriction_improves_a_profile(self):
        profile = ((0, 0), (1,))
        self.assertEqual(profile_wins(2, 2, profile), 2)
        restricted = restrict_profile(2, 2, profile)
        self.assertEqual(restricted, ((0, 1), (1,)))
        self.assertEqual(profile_wins(2, 2, restricted), 3)
        self.assertTrue(verify_restricted(profile_table(GameSpec.new_line(2, 2), restricted)))

    def test_restriction_keeps_restricted_profiles(self):
        profile = table_profile(gray_strategy(3, 2))
        self.assertEqual(profile, ((0, 0, 0, 1), (0, 1), (1,)))
        self.assertEqual(restrict_profile(3, 2, profile), profile)

    def test_partition_of_gray(self):
        self.assertEqual(restricted_partition(3, 2, ((0, 0, 0, 1), (0, 1), (1,))), (1, 1, 2))


class TestBeta(unittest.TestCase):
    @parameterized.expand([(2, 2, 1), (3, 2, 3), (2, 3, 1)])
    def test_beta_meets_the_bound(self, n, q, beta):
        result = max_first_player_passes(n, q)
        self.assertEqual(result.beta, beta)
        self.assertEqual(result.bound, beta)
        self.assertEqual(result.optimum, gray_success_formula(n, q))
        a, b, c = result.partition
        self.assertEqual(a + b + c, q ** (n - 1))
        self.assertEqual(b + c, result.beta)
        self.assertGreaterEqual(a, (q - 1) * b)
        self.assertEqual(profile_wins(n, q, result.witness), result.optimum * q**n)


class TestFormulas(unittest.TestCase):
    def test_gray_formula(self):
        self.assertEqual(gray_success_formula(3, 3), Fraction(19, 27))
        self.assertEqual(gray_success_formula(2, 3), Fraction(5, 9))

    @parameterized.expand([(3,), (4,), (5,)])
    def test_two_player_values(self, q):
        values = [two_player_value(q, r) for r in range(q + 1)]
        self.assertEqual(values[-1], Fraction(1, q))
        self.assertEqual(max(values), Fraction(2 * q - 1, q * q))
        self.assertEqual(values.index(max(values)), q - 1)

    def test_two_player_value_range(self):
        with self.assertRaises(DomainError):
            two_player_value(3, 4)
