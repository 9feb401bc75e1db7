# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

"""Renders reports as jinja2 tables, JSON objects and CSV traces."""

import csv
import io
import json
from fractions import Fraction
from typing import Any, Iterable, Optional

from jinja2 import Environment, PackageLoader, StrictUndefined

from hatlab.config.literals import COLOUR_NAMES
from hatlab.core.codes import Code, dump_code
from hatlab.core.game import Trace, format_configuration
from hatlab.core.strategy_file import dump_strategy
from hatlab.managers.evaluation import EvalReport
from hatlab.managers.monte_carlo import McReport
from hatlab.managers.search import BetaResult, SearchResult

_environment = Environment(
    loader=PackageLoader("hatlab", "templates"),
    undefined=StrictUndefined,
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
    autoescape=False,
)


def colour_name(colour: int) -> str:
    """'gray', 'brown', then 'c2', 'c3', ..."""
    return COLOUR_NAMES.get(colour, f"c{colour}")


def fraction_dict(value: Fraction) -> dict[str, int]:
    """JSON form of a rational."""
    return {"num": value.numerator, "den": value.denominator}


def render_json(data: dict[str, Any]) -> str:
    """A single JSON object on its own line."""
    return json.dumps(data, indent=2) + "\n"


def trace_dict(trace: Trace) -> dict[str, Any]:
    """JSON form of one played configuration."""
    return {
        "configuration": format_configuration(trace.configuration),
        "responses": [r.token for r in trace.responses],
        "correct": [int(bool(mark)) for mark in trace.marks],
        "outcome": trace.outcome,
    }


def report_dict(report: EvalReport) -> dict[str, Any]:
    """JSON form of an exact evaluation."""
    data: dict[str, Any] = {
        "game": report.game.as_dict(),
        "strategy": report.strategy,
        "wins": report.wins,
        "total": report.total,
        "probability": fraction_dict(report.probability),
        "correct_guesses": report.correct_guesses,
        "incorrect_guesses": report.incorrect_guesses,
    }
    if report.mean_correct is not None:
        data["mean_correct"] = fraction_dict(report.mean_correct)
    if report.traces is not None:
        data["traces"] = [trace_dict(trace) for trace in report.traces]
    return data


def _vote(colour: int, mark: Optional[bool]) -> str:
    if mark is None:
        return ""
    name = colour_name(colour)
    return f"*{name}*" if mark else name


def render_table(report: EvalReport) -> str:
    """Fixed-width table: hats, votes (``*x*`` when right, blank for a pass), outcome."""
    n, q = report.game.n, report.game.q
    hat_width = max(len(colour_name(c)) for c in range(q))
    header = [f"P{i}" for i in range(1, n + 1)] + [f"R{i}" for i in range(1, n + 1)]
    widths = [max(hat_width, len(h)) for h in header[:n]]
    widths += [max(hat_width + 2, len(h)) for h in header[n:]]
    rows = [
        {
            "cells": [colour_name(c) for c in trace.configuration]
            + [_vote(r.guess, mark) for r, mark in zip(trace.responses, trace.marks)],
            "outcome": trace.outcome,
        }
        for trace in report.traces or ()
    ]
    return _environment.get_template("trace_table.j2").render(
        title=f"{report.game.header()} strategy {report.strategy}",
        header=header,
        widths=widths,
        rows=rows,
        wins=report.wins,
        total=report.total,
        probability=report.probability,
        mean_correct=report.mean_correct,
    )


def render_csv(report: EvalReport) -> str:
    """One line per traced configuration: configuration, responses, correctness, outcome."""
    n = report.game.n
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        ["configuration"]
        + [f"r{i}" for i in range(1, n + 1)]
        + [f"correct{i}" for i in range(1, n + 1)]
        + ["outcome"]
    )
    for trace in report.traces or ():
        row = trace_dict(trace)
        writer.writerow(
            [row["configuration"], *row["responses"], *row["correct"], row["outcome"]]
        )
    return buffer.getvalue()


def render_summary(
    title: str, items: Iterable[tuple[str, Any]], body: Optional[str] = None
) -> str:
    """Aligned 'key  value' lines, optionally followed by a free text body."""
    items = [(key, str(value)) for key, value in items]
    width = max((len(key) for key, _ in items), default=0)
    return _environment.get_template("summary.j2").render(
        title=title, items=items, width=width, body=body
    )


def mc_dict(report: McReport, strategy: str) -> dict[str, Any]:
    """JSON form of a Monte Carlo estimate."""
    return {
        "strategy": strategy,
        "trials": report.trials,
        "seed": report.seed,
        "wins": report.wins,
        "estimate": report.estimate,
        "half_width_95": report.half_width_95,
    }


def search_dict(result: SearchResult) -> dict[str, Any]:
    """JSON form of a search result; the witness is in strategy file text."""
    return {
        "game": result.game.as_dict(),
        "optimum": fraction_dict(result.optimum),
        "wins": result.wins,
        "total": result.total,
        "strategies_examined": result.strategies_examined,
        "pruned": result.pruned,
        "witness": dump_strategy(result.strategy()),
    }


def beta_dict(result: BetaResult) -> dict[str, Any]:
    """JSON form of the first-player pass count."""
    a, b, c = result.partition
    return {
        "n": result.n,
        "q": result.q,
        "beta": result.beta,
        "bound": result.bound,
        "optimum": fraction_dict(result.optimum),
        "partition": {"A": a, "B": b, "C": c},
    }


def code_dict(code: Code, radius: Optional[int] = None) -> dict[str, Any]:
    """JSON form of a code."""
    return {
        "n": code.n,
        "q": code.q,
        "size": len(code),
        "radius": code.radius if radius is None else radius,
        "perfect": code.is_perfect,
        "words": dump_code(code).splitlines()[1:],
    }
