# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

"""Command line entry point of the hat laboratory.

Reports go to standard output, diagnostics and logs to standard error. Exit status is 0 on
success, 2 on a usage error and 1 on every other failure; each failure message starts with
its category (USAGE:, CAPACITY:, FORMAT: or ERROR:).
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Optional, Sequence, TextIO

from hatlab import __version__
from hatlab.config.literals import GameName, Objective, OutputFormat, Visibility
from hatlab.config.structured_config import HatlabConfig, load_config
from hatlab.core.codes import (
    dump_code,
    hamming_code,
    load_code,
    min_covering_code,
    verify_covering,
)
from hatlab.core.game import GameSpec, format_configuration
from hatlab.core.strategies import BUILTIN_STRATEGIES, StrategyTable, builtin_strategy
from hatlab.core.strategy_file import dump_strategy, load_strategy
from hatlab.exceptions import FormatError, HatlabError, UsageError
from hatlab.managers.evaluation import evaluate_exact, trace_table
from hatlab.managers.monte_carlo import evaluate_monte_carlo
from hatlab.managers.reporting import (
    beta_dict,
    code_dict,
    mc_dict,
    render_csv,
    render_json,
    render_summary,
    render_table,
    report_dict,
    search_dict,
)
from hatlab.managers.search import (
    max_first_player_passes,
    search_optimal_sequential,
    search_optimal_simultaneous,
)

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
OBJECTIVE_ALIASES = {
    "ebert": Objective.NONE_WRONG,
    "majority": Objective.MAJORITY,
    Objective.NONE_WRONG.value: Objective.NONE_WRONG,
    Objective.MAJORITY.value: Objective.MAJORITY,
}
# commands whose reports have a CSV form; the others print table or JSON only
CSV_COMMANDS = frozenset({"evaluate", "trace"})


class _Parser(argparse.ArgumentParser):
    """Argument parser reporting errors as UsageError instead of exiting."""

    def error(self, message: str):
        """Raises instead of printing the usage and exiting."""
        raise UsageError(message)


def _add_format(parser: argparse.ArgumentParser, default: OutputFormat) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument(
        "--format", type=OutputFormat, choices=list(OutputFormat), dest="format", default=default
    )
    for fmt in OutputFormat:
        group.add_argument(
            f"--{fmt.value}",
            action="store_const",
            const=fmt,
            dest="format",
            default=default,
            help=f"same as --format {fmt.value}",
        )


def _add_game(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--game", type=GameName, choices=list(GameName), default=GameName.EBERT)
    parser.add_argument("-n", "--n", type=int, default=3, help="number of players")
    parser.add_argument("-q", "--q", type=int, default=2, help="number of colours")
    parser.add_argument(
        "--strategy", required=True, help="built-in strategy name or strategy file path"
    )


def _add_size(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-n", "--n", type=int, required=True, help="number of players")
    parser.add_argument("-q", "--q", type=int, default=2, help="number of colours")


def build_parser() -> argparse.ArgumentParser:
    """Builds the parser of every subcommand."""
    parser = _Parser(prog="hatlab", description="Hat guessing strategy laboratory.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", type=Path, help="YAML file overriding configuration options")
    parser.add_argument("--workers", type=int, help="worker processes (default HATLAB_WORKERS)")
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="level of the log written to standard error",
    )
    parser.add_argument(
        "--list-strategies", action="store_true", help="list the built-in strategies and exit"
    )
    commands = parser.add_subparsers(dest="command", parser_class=_Parser)

    evaluate = commands.add_parser("evaluate", help="win probability of a strategy")
    _add_game(evaluate)
    mode = evaluate.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="sweep every configuration")
    mode.add_argument("--mc", action="store_true", help="Monte Carlo estimate")
    evaluate.add_argument("--trials", type=int)
    evaluate.add_argument("--seed", type=int)
    _add_format(evaluate, OutputFormat.TABLE)

    trace = commands.add_parser("trace", help="one row per configuration")
    _add_game(trace)
    _add_format(trace, OutputFormat.TABLE)

    simulate = commands.add_parser("simulate", help="seeded Monte Carlo estimate")
    _add_game(simulate)
    simulate.add_argument("--trials", type=int, required=True)
    simulate.add_argument("--seed", type=int)
    _add_format(simulate, OutputFormat.TABLE)

    search = commands.add_parser("search", help="exhaustive strategy search")
    searches = search.add_subparsers(dest="search", required=True, parser_class=_Parser)
    sequential = searches.add_parser("sequential", help="new hats-on-a-line optimum")
    _add_size(sequential)
    sequential.add_argument("--prune", action="store_true", help="restricted profiles only")
    sequential.add_argument(
        "--full-sight", action="store_true", help="every player sees all other hats"
    )
    _add_format(sequential, OutputFormat.TABLE)
    simultaneous = searches.add_parser("simultaneous", help="full-sight simultaneous optimum")
    _add_size(simultaneous)
    simultaneous.add_argument("--objective", choices=list(OBJECTIVE_ALIASES), required=True)
    _add_format(simultaneous, OutputFormat.TABLE)
    beta = searches.add_parser("beta", help="most first-player passes at the optimum")
    _add_size(beta)
    _add_format(beta, OutputFormat.TABLE)

    codes = commands.add_parser("codes", help="binary covering codes")
    kinds = codes.add_subparsers(dest="codes", required=True, parser_class=_Parser)
    hamming = kinds.add_parser("hamming", help="binary Hamming code of length 2^m - 1")
    hamming.add_argument("-m", type=int, required=True)
    hamming.add_argument("--output", type=Path, help="write the code file here")
    _add_format(hamming, OutputFormat.TABLE)
    verify = kinds.add_parser("verify", help="check the covering radius of a code file")
    verify.add_argument("file", type=Path)
    verify.add_argument("-r", type=int, default=1)
    _add_format(verify, OutputFormat.TABLE)
    cover = kinds.add_parser("min-cover", help="smallest binary covering code")
    cover.add_argument("-n", type=int, required=True)
    cover.add_argument("-r", type=int, default=1)
    cover.add_argument("--output", type=Path, help="write the code file here")
    _add_format(cover, OutputFormat.TABLE)

    strategy = commands.add_parser("strategy", help="strategy files")
    actions = strategy.add_subparsers(dest="action", required=True, parser_class=_Parser)
    export = actions.add_parser("export", help="write a strategy in the file format")
    _add_game(export)
    export.add_argument("--output", type=Path, help="file to write instead of standard output")
    return parser


def resolve_strategy(name: str, game: GameSpec) -> StrategyTable:
    """A built-in strategy by name, otherwise a strategy file path.

    Raises:
        UsageError: when ``name`` is neither.
    """
    if name in BUILTIN_STRATEGIES:
        return builtin_strategy(name, game)
    if Path(name).is_file():
        return load_strategy(Path(name), game)
    raise UsageError(f"unknown strategy {name!r}, see --list-strategies")


def _game(args: argparse.Namespace) -> GameSpec:
    return GameSpec.named(args.game, args.n, args.q)


def _list_strategies() -> str:
    width = max(len(name) for name in BUILTIN_STRATEGIES)
    return "".join(
        f"{entry.name.ljust(width)}  {entry.game.value.ljust(9)}  {entry.description}\n"
        for entry in BUILTIN_STRATEGIES.values()
    )


def _mc_output(args: argparse.Namespace, name: str, report) -> str:
    if args.format == OutputFormat.JSON:
        return render_json(mc_dict(report, name))
    return render_summary(
        f"simulate {name}",
        [
            ("trials", report.trials),
            ("seed", report.seed),
            ("wins", report.wins),
            ("estimate", f"{report.estimate:.6f}"),
            ("half width 95%", f"{report.half_width_95:.6f}"),
        ],
    )


def _simulate(args: argparse.Namespace, config: HatlabConfig) -> str:
    if args.trials is None or args.seed is None:
        raise UsageError("Monte Carlo runs need both --trials and --seed")
    game = _game(args)
    strategy = resolve_strategy(args.strategy, game)
    report = evaluate_monte_carlo(
        game, strategy, args.trials, args.seed, config.workers, config.mc_chunk
    )
    return _mc_output(args, strategy.name, report)


def _report_output(args: argparse.Namespace, report) -> str:
    if args.format == OutputFormat.JSON:
        return render_json(report_dict(report))
    if args.format == OutputFormat.CSV:
        return render_csv(report)
    return render_table(report)


def _evaluate(args: argparse.Namespace, config: HatlabConfig) -> str:
    if args.mc:
        return _simulate(args, config)
    if args.trials is not None or args.seed is not None:
        raise UsageError("--trials and --seed only apply with --mc")
    game = _game(args)
    strategy = resolve_strategy(args.strategy, game)
    if args.format == OutputFormat.CSV:
        return render_csv(trace_table(game, strategy, config.trace_limit))
    return _report_output(args, evaluate_exact(game, strategy, config.workers, config.exact_limit))


def _trace(args: argparse.Namespace, config: HatlabConfig) -> str:
    game = _game(args)
    strategy = resolve_strategy(args.strategy, game)
    return _report_output(args, trace_table(game, strategy, config.trace_limit))


def _search_output(args: argparse.Namespace, result) -> str:
    if args.format == OutputFormat.JSON:
        return render_json(search_dict(result))
    return render_summary(
        f"search {result.game.header()}",
        [
            ("optimum", result.optimum),
            ("wins", f"{result.wins}/{result.total}"),
            ("strategies examined", result.strategies_examined),
            ("pruned", result.pruned),
        ],
        body=dump_strategy(result.strategy()),
    )


def _search(args: argparse.Namespace, config: HatlabConfig) -> str:
    if args.search == "sequential":
        visibility = Visibility.ALL_OTHERS if args.full_sight else Visibility.AHEAD_ONLY
        if args.full_sight and args.prune:
            raise UsageError("--prune applies to the hats-on-a-line game only")
        result = search_optimal_sequential(
            args.n, args.q, args.prune, visibility, config.workers, config.search_limit
        )
        return _search_output(args, result)
    if args.search == "simultaneous":
        result = search_optimal_simultaneous(
            args.n,
            args.q,
            OBJECTIVE_ALIASES[args.objective],
            config.workers,
            config.search_limit,
        )
        return _search_output(args, result)

    result = max_first_player_passes(args.n, args.q, config.workers, config.search_limit)
    if args.format == OutputFormat.JSON:
        return render_json(beta_dict(result))
    a, b, c = result.partition
    return render_summary(
        f"beta n={result.n} q={result.q}",
        [
            ("beta", result.beta),
            ("bound", result.bound),
            ("optimum", result.optimum),
            ("partition", f"A={a} B={b} C={c}"),
        ],
    )


def _code_output(args: argparse.Namespace, code, items: list[tuple[str, Any]]) -> str:
    if getattr(args, "output", None) is not None:
        args.output.write_text(dump_code(code))
    if args.format == OutputFormat.JSON:
        return render_json({**code_dict(code), **dict(items)})
    return render_summary(
        f"code n={code.n} q={code.q}",
        [("size", len(code)), ("perfect", code.is_perfect), *items],
        body=dump_code(code),
    )


def _read_code(path: Path):
    try:
        return load_code(path.read_text())
    except OSError as e:
        raise FormatError(f"cannot read code file {path}: {e}") from None


def _codes(args: argparse.Namespace, config: HatlabConfig) -> str:
    if args.codes == "hamming":
        return _code_output(args, hamming_code(args.m), [])
    if args.codes == "verify":
        check = verify_covering(_read_code(args.file), args.r)
        witness = None if check.witness is None else format_configuration(check.witness)
        return _code_output(args, check.code, [("covered", check.covered), ("witness", witness)])
    size, code = min_covering_code(args.n, args.r, config.workers, config.covering_max_length)
    return _code_output(args, code, [("minimum", size)])


def _strategy(args: argparse.Namespace, config: HatlabConfig) -> str:
    text = dump_strategy(resolve_strategy(args.strategy, _game(args)))
    if args.output is None:
        return text
    args.output.write_text(text)
    return ""


def check_args(args: argparse.Namespace) -> None:
    """Rejects flag combinations the parser cannot express, before any work is done.

    Raises:
        UsageError: naming the offending flag.
    """
    if args.workers is not None and args.workers < 1:
        raise UsageError(f"--workers must be a positive integer, got {args.workers}")
    if getattr(args, "format", None) != OutputFormat.CSV:
        return
    if args.command not in CSV_COMMANDS or getattr(args, "mc", False):
        raise UsageError(f"{args.command} output has no CSV form, use --table or --json")


COMMANDS: dict[str, Callable[[argparse.Namespace, HatlabConfig], str]] = {
    "evaluate": _evaluate,
    "trace": _trace,
    "simulate": _simulate,
    "search": _search,
    "codes": _codes,
    "strategy": _strategy,
}


def run(
    argv: Sequence[str], stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None
) -> int:
    """Runs one command line and returns its exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(
            stream=stderr, level=getattr(logging, args.log_level), format=LOG_FORMAT, force=True
        )
        if args.list_strategies:
            stdout.write(_list_strategies())
            return 0
        if args.command is None:
            raise UsageError("a subcommand is required, see --help")
        check_args(args)
        config = load_config(args.config).replace(workers=args.workers)
        logger.debug("Running %s with %s", args.command, config)
        stdout.write(COMMANDS[args.command](args, config))
    except SystemExit as e:
        # --help and --version
        return e.code or 0
    except UsageError as e:
        stderr.write(f"{e.prefix}: {e}\n")
        return 2
    except HatlabError as e:
        stderr.write(f"{e.prefix}: {e}\n")
        return 1
    return 0


def main() -> None:
    """Console script entry point."""
    sys.exit(run(sys.argv[1:]))
