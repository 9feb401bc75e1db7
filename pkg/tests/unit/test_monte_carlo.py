# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

import math
import unittest

import pytest
from parameterized import parameterized

from hatlab.core.game import GameSpec
from hatlab.core.strategies import ebert_three_player, gray_strategy
from hatlab.exceptions import DomainError
from hatlab.managers.monte_carlo import McReport, evaluate_monte_carlo
from hatlab.utils.rng import mix64, trial_rank, trial_value


class TestCounterRng(unittest.TestCase):
    def test_splitmix_reference_values(self):
        # first outputs of splitmix64 seeded with 0
        self.assertEqual(trial_value(0, 0), 0xE220A8397B1DCDAF)
        self.assertEqual(trial_value(0, 1), 0x6E789E6AA1B965F4)

    def test_mix_of_zero(self):
        self.assertEqual(mix64(0), 0)

    def test_ranks_stay_in_range(self):
        for trial in range(1000):
            self.assertIn(trial_rank(12345, trial, 27), range(27))


class TestMonteCarlo(unittest.TestCase):
    def setUp(self):
        self.game = GameSpec.new_line(3, 2)
        self.strategy = gray_strategy(3, 2)

    def test_same_seed_same_report(self):
        first = evaluate_monte_carlo(self.game, self.strategy, 2000, 7)
        second = evaluate_monte_carlo(self.game, self.strategy, 2000, 7)
        self.assertEqual(first, second)

    def test_schedule_independence(self):
        reference = evaluate_monte_carlo(self.game, self.strategy, 5000, 99)
        self.assertEqual(
            evaluate_monte_carlo(self.game, self.strategy, 5000, 99, workers=3, chunk=700),
            reference,
        )
        self.assertEqual(
            evaluate_monte_carlo(self.game, self.strategy, 5000, 99, chunk=1), reference
        )

    def test_single_trial(self):
        report = evaluate_monte_carlo(GameSpec.ebert(3, 2), ebert_three_player(), 1, 3)
        self.assertIn(report.wins, (0, 1))
        self.assertEqual(report.half_width_95, 0.0)

    def test_half_width_formula(self):
        report = McReport(trials=100, seed=0, wins=75)
        self.assertAlmostEqual(report.estimate, 0.75)
        self.assertAlmostEqual(report.half_width_95, 1.96 * math.sqrt(0.75 * 0.25 / 100))
        self.assertTrue(report.covers(0.76))
        self.assertFalse(report.covers(0.9))

    @parameterized.expand([(0, 1), (10, -1), (10, 2**64)])
    def test_invalid_runs(self, trials, seed):
        with self.assertRaises(DomainError):
            evaluate_monte_carlo(self.game, self.strategy, trials, seed)

    @pytest.mark.slow
    def test_intervals_cover_the_exact_value(self):
        covered = sum(
            evaluate_monte_carlo(self.game, self.strategy, 100_000, seed).covers(7 / 8)
            for seed in range(1, 21)
        )
        self.assertGreaterEqual(covered, 18)
