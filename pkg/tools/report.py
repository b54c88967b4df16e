"""
Report rendering - rich tables, JSON documents and CSV rows for the cli
"""

import csv
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, TextIO, Tuple

from rich.table import Table
from rich.tree import Tree

from tools.crisp_id3 import DecisionTree, Leaf, SplitDiagnostics
from tools.dataset import FEATURE_NAMES
from tools.evaluation import Comparison, ExperimentResult, accuracy
from tools.fuzzifier import FuzzyPartition, term_names

RESULT_COLUMNS = ["method", "class_a", "class_b", "fold", "a", "b", "c", "d", "accuracy"]
RULE_COLUMNS = ["method", "class_a", "class_b", "rule", "class", "support"]

METHOD_TITLES = {"id3": "ID3", "fuzzy": "Fuzzy decision tree"}


def _pair_text(pair: Sequence[str]) -> str:
    return f"{pair[0]} vs {pair[1]}"


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------

def experiment_table(result: ExperimentResult) -> Table:
    """Five-fold confusion rows in the Exp / A / B / C / D layout."""
    table = Table(
        title=f"{METHOD_TITLES.get(result.method, result.method)}: {_pair_text(result.class_pair)}",
        caption=f"Mean accuracy: {result.mean_accuracy:.3f}",
        show_header=True,
        header_style="bold cyan",
    )
    table.add_column("Exp", justify="right", style="yellow")
    for column in ("A", "B", "C", "D"):
        table.add_column(column, justify="right")
    table.add_column("Accuracy", justify="right", style="green")

    for record in result.records:
        table.add_row(
            str(record.fold_index + 1),
            str(record.a), str(record.b), str(record.c), str(record.d),
            f"{accuracy(record):.3f}",
        )
    return table


def delta_table(comparison: Comparison) -> Table:
    table = Table(
        title=f"Fuzzy minus ID3: {_pair_text(comparison.class_pair)}",
        caption=(
            f"Mean delta: {comparison.mean_delta:+.3f} | "
            f"Identical folds: {'yes' if comparison.shared_folds else 'no'}"
        ),
        show_header=True,
        header_style="bold cyan",
    )
    table.add_column("Exp", justify="right", style="yellow")
    table.add_column("ID3", justify="right")
    table.add_column("Fuzzy", justify="right")
    table.add_column("Delta", justify="right", style="magenta")

    for fold, (i, f, delta) in enumerate(zip(comparison.id3.fold_accuracies,
                                              comparison.fuzzy.fold_accuracies,
                                              comparison.deltas), start=1):
        table.add_row(str(fold), f"{i:.3f}", f"{f:.3f}", f"{delta:+.3f}")
    return table


def _path_text(path: Sequence[Tuple[int, int]], k: int) -> str:
    if not path:
        return "root"
    names = term_names(k)
    return " & ".join(f"{FEATURE_NAMES[f]}={names[t]}" for f, t in path)


def diagnostics_table(result: ExperimentResult) -> Table:
    k = result.folds[0].partitions[0].k if result.folds else 2
    table = Table(
        title=f"Split diagnostics: {METHOD_TITLES.get(result.method, result.method)}, "
              f"{_pair_text(result.class_pair)}",
        show_header=True,
        header_style="bold cyan",
    )
    table.add_column("Fold", justify="right", style="yellow")
    table.add_column("Node")
    table.add_column("n", justify="right")
    table.add_column("Split on", style="green")
    table.add_column("Scores")

    for outcome in result.folds:
        for diag in outcome.diagnostics:
            scores = ", ".join(f"{FEATURE_NAMES[f]}={s:.4f}" for f, s in sorted(diag.scores.items()))
            table.add_row(
                str(outcome.record.fold_index + 1),
                _path_text(diag.path, k),
                str(diag.support),
                FEATURE_NAMES[diag.feature_index],
                scores,
            )
    return table


def tree_view(tree: DecisionTree, title: str) -> Tree:
    """Rich tree rendering of a decision tree."""
    root = Tree(f"[bold magenta]{title}[/bold magenta]")

    def _attach(branch: Tree, node: DecisionTree, label: str) -> None:
        if isinstance(node, Leaf):
            branch.add(f"{label}[green]{node.class_label}[/green] [dim](support {node.support})[/dim]")
            return
        child_branch = branch.add(f"{label}[cyan]{FEATURE_NAMES[node.feature_index]}[/cyan]")
        for term, child in zip(term_names(node.k), node.children):
            _attach(child_branch, child, f"[yellow]{term}[/yellow] → ")

    _attach(root, tree, "")
    return root


# ---------------------------------------------------------------------------
# JSON documents
# ---------------------------------------------------------------------------

def partition_entries(pair: Sequence[str],
                      partitions: Sequence[FuzzyPartition],
                      fold: Optional[int] = None) -> List[Dict[str, Any]]:
    entries = []
    for partition in partitions:
        entry = {"pair": list(pair)}
        if fold is not None:
            entry["fold"] = fold
        entry.update(partition.to_dict())
        entries.append(entry)
    return entries


def _result_partitions(results: Iterable[ExperimentResult]) -> List[Dict[str, Any]]:
    entries: List[Dict[str, Any]] = []
    seen = set()
    for result in results:
        for outcome in result.folds:
            key = (tuple(result.class_pair), outcome.record.fold_index)
            if key in seen:
                continue
            seen.add(key)
            entries.extend(partition_entries(result.class_pair, outcome.partitions, outcome.record.fold_index))
    return entries


def results_report(config: Mapping[str, Any],
                   results: Sequence[ExperimentResult],
                   verbose: bool = False) -> Dict[str, Any]:
    return {
        "config": dict(config),
        "partitions": _result_partitions(results),
        "results": [r.to_dict(verbose) for r in results],
    }


def comparison_report(config: Mapping[str, Any],
                      comparisons: Sequence[Comparison],
                      verbose: bool = False) -> Dict[str, Any]:
    results = [r for c in comparisons for r in (c.id3, c.fuzzy)]
    report = results_report(config, results, verbose)
    report["comparisons"] = [
        {
            "pair": list(c.class_pair),
            "shared_folds": c.shared_folds,
            "deltas": list(c.deltas),
            "mean_delta": c.mean_delta,
        }
        for c in comparisons
    ]
    return report


def tree_entry(method: str,
               pair: Sequence[str],
               tree: DecisionTree,
               diagnostics: Optional[Sequence[SplitDiagnostics]] = None) -> Dict[str, Any]:
    entry = {
        "method": method,
        "pair": list(pair),
        "depth": tree.depth(),
        "leaves": tree.leaf_count(),
        "tree": tree.to_dict(),
    }
    if diagnostics is not None:
        entry["diagnostics"] = [d.to_dict() for d in diagnostics]
    return entry


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def write_results_csv(results: Sequence[ExperimentResult], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(RESULT_COLUMNS)
    for result in results:
        for record in result.records:
            writer.writerow([
                result.method, result.class_pair[0], result.class_pair[1], record.fold_index + 1,
                record.a, record.b, record.c, record.d, repr(accuracy(record)),
            ])


def tree_rules(tree: DecisionTree) -> List[Tuple[str, str, int]]:
    """(condition, class, support) for every leaf, left to right."""
    rules: List[Tuple[str, str, int]] = []

    def _walk(node: DecisionTree, path: Tuple[Tuple[int, int], ...], k: int) -> None:
        if isinstance(node, Leaf):
            rules.append((_path_text(path, k), node.class_label, node.support))
            return
        for term, child in enumerate(node.children):
            _walk(child, path + ((node.feature_index, term),), node.k)

    _walk(tree, (), 2)
    return rules


def write_rules_csv(entries: Sequence[Tuple[str, Sequence[str], DecisionTree]], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(RULE_COLUMNS)
    for method, pair, tree in entries:
        for condition, label, support in tree_rules(tree):
            writer.writerow([method, pair[0], pair[1], condition, label, support])


__all__ = [
    "experiment_table",
    "delta_table",
    "diagnostics_table",
    "tree_view",
    "partition_entries",
    "results_report",
    "comparison_report",
    "tree_entry",
    "write_results_csv",
    "tree_rules",
    "write_rules_csv",
]
