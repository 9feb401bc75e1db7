# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

import json
import unittest
from fractions import Fraction

from parameterized import parameterized

from hatlab.core.game import GameSpec
from hatlab.core.strategies import cyclic_majority_strategy, gray_strategy
from hatlab.managers.evaluation import evaluate_exact, trace_table
from hatlab.managers.monte_carlo import McReport
from hatlab.managers.reporting import (
    colour_name,
    fraction_dict,
    mc_dict,
    render_csv,
    render_json,
    render_summary,
    render_table,
    report_dict,
)


class TestReporting(unittest.TestCase):
    @parameterized.expand([(0, "gray"), (1, "brown"), (2, "c2"), (9, "c9")])
    def test_colour_names(self, colour, name):
        self.assertEqual(colour_name(colour), name)

    def test_fraction(self):
        self.assertEqual(fraction_dict(Fraction(6, 8)), {"num": 3, "den": 4})

    def test_table_marks_right_votes(self):
        report = trace_table(GameSpec.majority(3, 2), cyclic_majority_strategy())
        lines = render_table(report).splitlines()
        self.assertEqual(lines[1].split(), ["P1", "P2", "P3", "R1", "R2", "R3", "outcome"])
        # 001: votes 1 0 1, players 2 and 3 right
        self.assertEqual(
            lines[3].split(), ["gray", "gray", "brown", "brown", "*gray*", "*brown*", "win"]
        )
        self.assertEqual(lines[-1], "wins 6/8  probability 3/4")

    def test_passes_are_blank(self):
        report = trace_table(GameSpec.new_line(2, 2), gray_strategy(2, 2))
        lines = render_table(report).splitlines()
        # 11: player 1 guesses gray and the round stops
        self.assertEqual(lines[-2].split(), ["brown", "brown", "gray", "lose"])

    def test_json_report(self):
        report = evaluate_exact(GameSpec.new_line(3, 2), gray_strategy(3, 2))
        text = render_json(report_dict(report))
        self.assertTrue(text.endswith("}\n"))
        data = json.loads(text)
        self.assertEqual(data["game"]["protocol"], "sequential")
        self.assertEqual(data["strategy"], "gray")
        self.assertNotIn("mean_correct", data)

    def test_csv_rows(self):
        report = trace_table(GameSpec.new_line(2, 2), gray_strategy(2, 2))
        self.assertEqual(
            render_csv(report),
            "configuration,r1,r2,correct1,correct2,outcome\n"
            "00,p,0,0,1,win\n"
            "01,0,p,1,0,win\n"
            "10,p,0,0,1,win\n"
            "11,0,p,0,0,lose\n",
        )

    def test_summary(self):
        text = render_summary("title", [("a", 1), ("long key", "x")], body="body\n")
        self.assertEqual(text, "title\na         1\nlong key  x\n\nbody\n")

    def test_mc_dict(self):
        data = mc_dict(McReport(trials=4, seed=2, wins=3), "gray")
        self.assertEqual(data["estimate"], 0.75)
        self.assertEqual(data["strategy"], "gray")
