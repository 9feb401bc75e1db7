# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

import itertools
import unittest
from fractions import Fraction

import pytest
from parameterized import parameterized

from hatlab.core.codes import hamming_code
from hatlab.core.game import GameSpec
from hatlab.core.orientation import berlekamp_orientation
from hatlab.core.strategies import (
    covering_code_strategy,
    cyclic_majority_strategy,
    ebert_three_player,
    gray_strategy,
    line_sum_strategy,
    orientation_majority_strategy,
)
from hatlab.exceptions import CapacityError
from hatlab.managers.evaluation import EvalReport, evaluate_exact, trace_table

from .helpers import guesses

TABLE_1 = [
    ((0, 0, 0), (1, 1, 1), "lose"),
    ((0, 0, 1), (None, None, 1), "win"),
    ((0, 1, 0), (None, 1, None), "win"),
    ((0, 1, 1), (0, None, None), "win"),
    ((1, 0, 0), (1, None, None), "win"),
    ((1, 0, 1), (None, 0, None), "win"),
    ((1, 1, 0), (None, None, 0), "win"),
    ((1, 1, 1), (0, 0, 0), "lose"),
]


class TestExact(unittest.TestCase):
    def test_ebert_three_player(self):
        report = evaluate_exact(GameSpec.ebert(3, 2), ebert_three_player())
        self.assertEqual((report.wins, report.total), (6, 8))
        self.assertEqual(report.probability, Fraction(3, 4))
        self.assertEqual((report.correct_guesses, report.incorrect_guesses), (6, 6))
        self.assertIsNone(report.mean_correct)

    @parameterized.expand([(2, 3), (3, 7)])
    def test_hamming_strategies(self, m, n):
        report = evaluate_exact(GameSpec.ebert(n, 2), covering_code_strategy(hamming_code(m)))
        self.assertEqual(report.probability, Fraction(n, n + 1))

    @pytest.mark.slow
    def test_hamming_fifteen(self):
        report = evaluate_exact(GameSpec.ebert(15, 2), covering_code_strategy(hamming_code(4)))
        self.assertEqual((report.wins, report.total), (30720, 32768))

    @parameterized.expand([(2, 3), (3, 7)])
    def test_orientation_strategies(self, m, n):
        strategy = orientation_majority_strategy(berlekamp_orientation(m))
        report = evaluate_exact(GameSpec.majority(n, 2), strategy)
        self.assertEqual(report.probability, Fraction(n, n + 1))

    def test_cyclic(self):
        report = evaluate_exact(GameSpec.majority(3, 2), cyclic_majority_strategy())
        self.assertEqual(report.probability, Fraction(3, 4))

    @pytest.mark.slow
    def test_gray_values(self):
        for n, q in itertools.product(range(1, 6), range(2, 5)):
            report = evaluate_exact(GameSpec.new_line(n, q), gray_strategy(n, q))
            self.assertEqual(report.probability, Fraction(q**n - (q - 1) ** n, q**n))

    @pytest.mark.slow
    def test_line_sum_mean(self):
        for n, q in itertools.product(range(2, 6), range(2, 5)):
            report = evaluate_exact(GameSpec.hats_on_a_line(n, q), line_sum_strategy(n, q))
            self.assertEqual(report.mean_correct, (n - 1) + Fraction(1, q))

    def test_line_sum_four_three(self):
        report = evaluate_exact(GameSpec.hats_on_a_line(4, 3), line_sum_strategy(4, 3))
        self.assertEqual(report.mean_correct, 3 + Fraction(1, 3))
        self.assertEqual(report.wins, 27)

    def test_workers_do_not_change_the_report(self):
        game = GameSpec.ebert(7, 2)
        strategy = covering_code_strategy(hamming_code(3))
        self.assertEqual(
            evaluate_exact(game, strategy, workers=1), evaluate_exact(game, strategy, workers=3)
        )

    def test_capacity_guard(self):
        with self.assertRaises(CapacityError):
            evaluate_exact(GameSpec.new_line(3, 2), gray_strategy(3, 2), limit=7)

    def test_wins_must_fit(self):
        with self.assertRaises(ValueError):
            EvalReport(GameSpec.ebert(3, 2), "x", 9, 8, 0, 0)


class TestTraces(unittest.TestCase):
    def test_table_one(self):
        report = trace_table(GameSpec.ebert(3, 2), ebert_three_player())
        self.assertEqual(len(report.traces), 8)
        for trace, (cfg, expected, outcome) in zip(report.traces, TABLE_1):
            self.assertEqual(trace.configuration, cfg)
            self.assertEqual(guesses(trace), expected)
            self.assertEqual(trace.outcome, outcome)
        self.assertEqual(report.probability, Fraction(6, 8))

    def test_table_two(self):
        report = trace_table(GameSpec.majority(3, 2), cyclic_majority_strategy())
        outcomes = [trace.outcome for trace in report.traces]
        self.assertEqual(outcomes, ["lose"] + ["win"] * 6 + ["lose"])
        self.assertEqual(report.wins, 6)

    def test_single_player_gray(self):
        report = trace_table(GameSpec.new_line(1, 2), gray_strategy(1, 2))
        self.assertEqual([guesses(t) for t in report.traces], [(0,), (0,)])
        self.assertEqual([t.outcome for t in report.traces], ["win", "lose"])

    def test_rows_cover_every_configuration_once(self):
        report = trace_table(GameSpec.new_line(3, 3), gray_strategy(3, 3))
        configurations = [t.configuration for t in report.traces]
        self.assertEqual(len(set(configurations)), 27)
        self.assertEqual(configurations, sorted(configurations))

    def test_trace_guard(self):
        with self.assertRaises(CapacityError):
            trace_table(GameSpec.new_line(13, 2), gray_strategy(1, 2))
