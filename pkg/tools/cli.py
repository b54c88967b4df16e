#!/usr/bin/env python3
"""
Fuzzy ID3 command line - train trees, run the pairwise five-fold protocol,
compare ID3 with the fuzzy decision tree.

Reports go to standard output (or --out); status and diagnostics go to
standard error. Exit code 0 on success, 1 on a run error, 2 on bad flags.
"""

import argparse
import json
import logging
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, TextIO, Tuple

import yaml
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.progress import Progress, SpinnerColumn, TextColumn

# Allow running as `python3 tools/cli.py` from the project root
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from config import DEFAULT_CONFIG, load_config, load_environment  # noqa: E402
from tools.crisp_id3 import DecisionTree, SplitDiagnostics, build_id3  # noqa: E402
from tools.dataset import Dataset, class_by_group, load_iris, pairwise_subset  # noqa: E402
from tools.errors import ConfigError, FuzzyTreeError  # noqa: E402
from tools.evaluation import (  # noqa: E402
    ALL_PAIRS,
    ID3,
    METHODS,
    compare_methods,
    run_experiment,
)
from tools.fuzzifier import fit_partitions  # noqa: E402
from tools.fuzzy_id3 import CERTAINTY_MAPPINGS, PROTOTYPE_SCOPES, build_fuzzy_tree, certainty_mapping  # noqa: E402
from tools import report  # noqa: E402

logger = logging.getLogger("tools.cli")

console = Console()
err_console = Console(stderr=True)

ALL_PAIRS_FLAG = "all-pairs"
FORMATS = ("table", "json", "csv")
METHOD_CHOICES = METHODS + ("both",)


@dataclass(frozen=True)
class RunConfig:
    data_path: Path
    method: str = "both"
    class_pair: str = "1,2"
    k: int = 2
    fold_size: int = 10
    format: str = "table"
    verbose: bool = False
    prototype_scope: str = "per-node"
    certainty: str = "exp"
    epsilon: float = 1e-6
    workers: int = 1
    out: Optional[Path] = None

    @classmethod
    def from_sources(cls,
                     args: argparse.Namespace,
                     config: Dict[str, Any],
                     env_data: Optional[str] = None) -> "RunConfig":
        """Flags beat the environment, which beats the YAML file, which beats defaults."""
        def pick(flag: str, key: str):
            value = getattr(args, flag, None)
            return value if value is not None else config.get(key, DEFAULT_CONFIG.get(key))

        data_path = args.data or env_data or config.get("data_path") or None
        if not data_path:
            raise ConfigError("--data is required (or set FUZZID3_DATA / data_path in the config file)")

        run_config = cls(
            data_path=Path(data_path),
            method=pick("method", "method"),
            class_pair=str(pick("pair", "class_pair")),
            k=int(pick("k", "k")),
            fold_size=int(pick("fold_size", "fold_size")),
            # train dumps the tree as JSON unless a format is asked for
            format=(args.format or "json") if getattr(args, "command", None) == "train" else pick("format", "format"),
            verbose=bool(args.verbose or config.get("verbose", False)),
            prototype_scope=pick("prototype_scope", "prototype_scope"),
            certainty=pick("certainty", "certainty"),
            epsilon=float(config.get("degenerate_epsilon", DEFAULT_CONFIG["degenerate_epsilon"])),
            workers=int(pick("workers", "workers")),
            out=getattr(args, "out", None),
        )
        run_config.validate()
        return run_config

    def validate(self) -> None:
        if self.k < 2:
            raise ConfigError("k must be ≥ 2")
        if self.fold_size < 1:
            raise ConfigError("fold size must be ≥ 1")
        if self.workers < 1:
            raise ConfigError("workers must be ≥ 1")
        if self.epsilon <= 0:
            raise ConfigError("degenerate_epsilon must be positive")
        if self.method not in METHOD_CHOICES:
            raise ConfigError(f"method must be one of {METHOD_CHOICES}, got {self.method!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.prototype_scope not in PROTOTYPE_SCOPES:
            raise ConfigError(f"prototype scope must be one of {PROTOTYPE_SCOPES}, got {self.prototype_scope!r}")
        if self.certainty not in CERTAINTY_MAPPINGS:
            raise ConfigError(f"certainty must be one of {tuple(CERTAINTY_MAPPINGS)}, got {self.certainty!r}")
        parse_pair(self.class_pair)

    @property
    def methods(self) -> Tuple[str, ...]:
        return METHODS if self.method == "both" else (self.method,)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "data_path": str(self.data_path),
            "method": self.method,
            "class_pair": self.class_pair,
            "k": self.k,
            "fold_size": self.fold_size,
            "format": self.format,
            "verbose": self.verbose,
            "prototype_scope": self.prototype_scope,
            "certainty": self.certainty,
            "degenerate_epsilon": self.epsilon,
            "workers": self.workers,
        }


def parse_pair(value: str) -> Optional[Tuple[str, str]]:
    """None for all-pairs, otherwise the two raw parts of "a,b"."""
    if value == ALL_PAIRS_FLAG:
        return None
    parts = [part.strip() for part in value.split(",")]
    if len(parts) != 2 or not all(parts):
        raise ConfigError(f"--pair must be 'a,b' or '{ALL_PAIRS_FLAG}', got {value!r}")
    if parts[0] == parts[1]:
        raise ConfigError(f"--pair must name two different classes, got {value!r}")
    return parts[0], parts[1]


def resolve_pairs(d: Dataset, value: str) -> List[Tuple[str, str]]:
    """Group numbers (1-based, file order) or literal labels to label pairs."""
    parsed = parse_pair(value)
    if parsed is None:
        return [(class_by_group(d, a), class_by_group(d, b)) for a, b in ALL_PAIRS]
    return [tuple(class_by_group(d, int(p)) if p.isdigit() else p for p in parsed)]


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _k_value(text: str) -> int:
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"k must be an integer, got {text!r}") from None
    if k < 2:
        raise argparse.ArgumentTypeError("k must be ≥ 2")
    return k


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be ≥ 1, got {value}")
    return value


def _pair_value(text: str) -> str:
    try:
        parse_pair(text)
    except ConfigError as e:
        raise argparse.ArgumentTypeError(str(e)) from None
    return text


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--data", type=Path, help="Iris CSV (default: FUZZID3_DATA or config data_path)")
    common.add_argument("--pair", type=_pair_value,
                        help="Class pair as 1-based groups '1,2' (or labels), or 'all-pairs'")
    common.add_argument("--k", type=_k_value, help="Linguistic terms per feature (default 2)")
    common.add_argument("--fold-size", dest="fold_size", type=_positive_int,
                        help="Test instances per class per fold (default 10)")
    common.add_argument("--format", choices=FORMATS, help="Report format")
    common.add_argument("--verbose", action="store_true", help="Add per-node split diagnostics")
    common.add_argument("--prototype-scope", dest="prototype_scope", choices=PROTOTYPE_SCOPES,
                        help="Fuzzy prototypes per node (reference) or once per training set")
    common.add_argument("--certainty", choices=sorted(CERTAINTY_MAPPINGS),
                        help="Distance-to-certainty mapping for the fuzzy criterion")
    common.add_argument("--workers", type=_positive_int, help="Folds evaluated concurrently")
    common.add_argument("--config", type=Path, help="Alternate YAML configuration file")
    common.add_argument("--out", type=Path, help="Write the report here instead of standard output")

    parser = argparse.ArgumentParser(
        prog="fuzzid3",
        description="ID3 and fuzzy decision trees on Iris with the pairwise five-fold protocol",
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")
    subparsers.required = True

    train_parser = subparsers.add_parser("train", parents=[common],
                                         help="Build a tree on a full pairwise dataset and dump it")
    train_parser.add_argument("--method", choices=METHOD_CHOICES, help="Tree builder")

    evaluate_parser = subparsers.add_parser("evaluate", parents=[common],
                                            help="Five-fold confusion table for one method")
    evaluate_parser.add_argument("--method", choices=METHOD_CHOICES, help="Tree builder")

    subparsers.add_parser("compare", parents=[common],
                          help="Both methods on identical folds with per-fold deltas")
    return parser


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------

def setup_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_time=False, show_path=False)],
        force=True,
    )


@contextmanager
def output_stream(config: RunConfig) -> Iterator[TextIO]:
    if config.out is None:
        yield sys.stdout
        return
    config.out.parent.mkdir(parents=True, exist_ok=True)
    if config.out.exists():
        err_console.print(f"⚠️  Overwriting {config.out}")
    with open(config.out, 'w', encoding='utf-8', newline='') as f:
        yield f
    err_console.print(f"✅ Report written to {config.out}")


def _table_console(stream: TextIO) -> Console:
    return Console(file=stream, width=120) if stream is not sys.stdout else console


def _write_json(document: Dict[str, Any], stream: TextIO) -> None:
    stream.write(json.dumps(document, indent=2) + "\n")


@contextmanager
def _spinner(description: str) -> Iterator[None]:
    with Progress(SpinnerColumn(), TextColumn("[progress.description]{task.description}"),
                  console=err_console, transient=True) as progress:
        progress.add_task(description, total=None)
        yield


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrainedTree:
    method: str
    pair: Tuple[str, str]
    tree: DecisionTree
    diagnostics: Optional[Tuple[SplitDiagnostics, ...]]


def cmd_train(config: RunConfig) -> None:
    """One tree per (pair, method) on the full pairwise dataset, no folding."""
    dataset = load_iris(config.data_path)
    trained: List[TrainedTree] = []
    partitions_out: List[Dict[str, Any]] = []

    for pair in resolve_pairs(dataset, config.class_pair):
        pairwise = pairwise_subset(dataset, *pair)
        partitions = fit_partitions(pairwise, config.k, config.epsilon)
        partitions_out.extend(report.partition_entries(pair, partitions))

        for method in config.methods:
            diagnostics: Optional[List[SplitDiagnostics]] = [] if config.verbose else None
            if method == ID3:
                tree = build_id3(pairwise, partitions, diagnostics)
            else:
                tree = build_fuzzy_tree(pairwise, partitions, certainty_mapping(config.certainty),
                                        config.prototype_scope, diagnostics)
            logger.info("Trained %s tree for %s: depth %d", method, pair, tree.depth())
            trained.append(TrainedTree(method, pair, tree,
                                       tuple(diagnostics) if diagnostics is not None else None))

    with output_stream(config) as stream:
        if config.format == "json":
            _write_json({
                "config": config.to_dict(),
                "partitions": partitions_out,
                "trees": [report.tree_entry(t.method, t.pair, t.tree, t.diagnostics) for t in trained],
            }, stream)
        elif config.format == "csv":
            report.write_rules_csv([(t.method, t.pair, t.tree) for t in trained], stream)
        else:
            out = _table_console(stream)
            for t in trained:
                title = f"{report.METHOD_TITLES[t.method]}: {t.pair[0]} vs {t.pair[1]}"
                out.print(report.tree_view(t.tree, title))


def cmd_evaluate(config: RunConfig) -> None:
    dataset = load_iris(config.data_path)
    results = []
    with _spinner("Running five-fold cross-validation..."):
        for pair in resolve_pairs(dataset, config.class_pair):
            for method in config.methods:
                results.append(run_experiment(
                    dataset, method, pair, config.k, config.fold_size,
                    certainty=config.certainty,
                    prototype_scope=config.prototype_scope,
                    epsilon=config.epsilon,
                    workers=config.workers,
                    collect_diagnostics=config.verbose,
                ))

    with output_stream(config) as stream:
        if config.format == "json":
            _write_json(report.results_report(config.to_dict(), results, config.verbose), stream)
        elif config.format == "csv":
            report.write_results_csv(results, stream)
        else:
            out = _table_console(stream)
            for result in results:
                out.print(report.experiment_table(result))
                if config.verbose:
                    out.print(report.diagnostics_table(result))


def cmd_compare(config: RunConfig) -> None:
    dataset = load_iris(config.data_path)
    comparisons = []
    with _spinner("Comparing ID3 and the fuzzy decision tree..."):
        for pair in resolve_pairs(dataset, config.class_pair):
            comparisons.append(compare_methods(
                dataset, pair, config.k, config.fold_size,
                certainty=config.certainty,
                prototype_scope=config.prototype_scope,
                epsilon=config.epsilon,
                workers=config.workers,
                collect_diagnostics=config.verbose,
            ))

    with output_stream(config) as stream:
        if config.format == "json":
            _write_json(report.comparison_report(config.to_dict(), comparisons, config.verbose), stream)
        elif config.format == "csv":
            report.write_results_csv([r for c in comparisons for r in (c.id3, c.fuzzy)], stream)
        else:
            out = _table_console(stream)
            for comparison in comparisons:
                out.print(report.experiment_table(comparison.id3))
                out.print(report.experiment_table(comparison.fuzzy))
                out.print(report.delta_table(comparison))
                if config.verbose:
                    out.print(report.diagnostics_table(comparison.id3))
                    out.print(report.diagnostics_table(comparison.fuzzy))


COMMANDS = {
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "compare": cmd_compare,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """CLI interface for the fuzzy ID3 toolkit"""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = RunConfig.from_sources(args, load_config(args.config), load_environment())
    except (ConfigError, OSError, ValueError, yaml.YAMLError) as e:
        parser.error(str(e))
    setup_logging(config.verbose)

    try:
        COMMANDS[args.command](config)
    except (FuzzyTreeError, OSError) as e:
        err_console.print(f"❌ Error: {escape(str(e))}")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
