"""Recursive vertex-splitting Maximum Clique solver with persistency shrinking.

At each node too large for the leaf solver we optionally shrink the graph by
the weak persistencies of its clique QUBO (vertices weakly fixed to 1 join
the clique under construction and restrict the rest to their common
neighbors; fixed-to-0 vertices are dropped), then split on a minimum-degree
vertex v into G1 (the neighbors of v) and G2 (everything but v) and recurse.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Iterable

from .errors import SolverValidationError
from .graphs import Graph
from .persistency import analyze
from .probing import probe
from .problems import CliqueEncodingParams, clique_qubo

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 45


@dataclass(frozen=True)
class LeafSolver:
    """Subgraph solver invoked once a subgraph fits ``threshold`` vertices.

    ``fn`` must return a clique of its input graph (validated, hard error);
    the default threshold matches a ~45-vertex annealer budget.
    """

    fn: Callable[[Graph], Iterable[int]]
    threshold: int = DEFAULT_THRESHOLD

    def __post_init__(self):
        if self.threshold < 1:
            raise ValueError("threshold must be >= 1")

    def solve(self, g: Graph) -> tuple[int, ...]:
        result = tuple(sorted(set(self.fn(g))))
        if any(not 0 <= v < g.n for v in result):
            raise SolverValidationError(f"solver returned out-of-range vertices {result}")
        if not g.is_clique(result):
            raise SolverValidationError(f"solver returned a non-clique {result}")
        return result


def default_leaf_solver(threshold: int = DEFAULT_THRESHOLD) -> LeafSolver:
    from .oracle import exact_max_clique

    return LeafSolver(exact_max_clique, threshold)


@dataclass
class SplitStats:
    n_calls: int = 0
    max_depth: int = 0
    vertices_eliminated_by_persistency: int = 0


@dataclass(frozen=True)
class SavingsRow:
    """Leaf-call comparison of the two split modes on one graph."""

    graph_id: int
    n_qpbo: int
    n_no_qpbo: int
    clique_size: int

    @property
    def ratio(self) -> float:
        if self.n_no_qpbo == 0:
            return 0.0
        return (self.n_qpbo - self.n_no_qpbo) / self.n_no_qpbo


def _shrink_by_persistency(
    g: Graph, labels: tuple[int, ...], use_probing: bool, stats: SplitStats
) -> tuple[tuple[int, ...], Graph, tuple[int, ...]] | None:
    """Weak-fix the clique QUBO of ``g``; returns (forced members, rest graph,
    rest labels) or None when nothing was resolved."""
    q = clique_qubo(g, CliqueEncodingParams.complement_penalty())
    if use_probing:
        outcome = probe(q)
        fixed = dict(outcome.reduction.fixed)
    else:
        fixed = analyze(q).weak
    if not fixed:
        return None
    ones = [v for v, val in fixed.items() if val == 1]
    zeros = [v for v, val in fixed.items() if val == 0]
    for a in range(len(ones)):
        for b in range(a + 1, len(ones)):
            if not g.has_edge(ones[a], ones[b]):
                raise AssertionError(
                    "weakly-fixed-to-1 vertices are not pairwise adjacent"
                )
    keep = set(range(g.n)) - set(ones) - set(zeros)
    for v in ones:
        keep &= g.neighbors(v)
    forced = tuple(labels[v] for v in sorted(ones))
    sub, sub_idx = g.induced(keep)
    stats.vertices_eliminated_by_persistency += g.n - len(keep)
    return forced, sub, tuple(labels[v] for v in sub_idx)


def max_clique_split(
    g: Graph,
    solver: LeafSolver | None = None,
    use_persistency: bool = True,
    use_probing: bool = False,
) -> tuple[tuple[int, ...], SplitStats]:
    """Maximum clique of ``g`` by recursive vertex splitting.

    With ``use_persistency`` each oversized subgraph is first shrunk by the
    weak persistencies of its clique QUBO (probing too when ``use_probing``;
    off by default since probing every subgraph is far slower).
    """
    if solver is None:
        solver = default_leaf_solver()
    stats = SplitStats()

    def solve(sub: Graph, labels: tuple[int, ...], depth: int) -> tuple[int, ...]:
        stats.max_depth = max(stats.max_depth, depth)
        if sub.n == 0:
            return ()
        if sub.n <= solver.threshold:
            stats.n_calls += 1
            return tuple(labels[v] for v in solver.solve(sub))
        if use_persistency:
            shrunk = _shrink_by_persistency(sub, labels, use_probing, stats)
            if shrunk is not None:
                forced, rest, rest_labels = shrunk
                return forced + solve(rest, rest_labels, depth + 1)
        v = min(range(sub.n), key=lambda u: (sub.degree(u), u))
        g1, g1_idx = sub.induced(sub.neighbors(v))
        g2, g2_idx = sub.induced(set(range(sub.n)) - {v})
        c1 = solve(g1, tuple(labels[u] for u in g1_idx), depth + 1)
        c2 = solve(g2, tuple(labels[u] for u in g2_idx), depth + 1)
        if len(c1) + 1 > len(c2):
            return tuple(sorted(c1 + (labels[v],)))
        return c2

    clique = solve(g, tuple(range(g.n)), 0)
    if not g.is_clique(clique):
        raise AssertionError("split recursion assembled a non-clique")
    return tuple(sorted(clique)), stats


def splitting_savings(
    graphs: Iterable[Graph],
    solver: LeafSolver | None = None,
    threshold: int | None = None,
) -> list[SavingsRow]:
    """Run both split modes per graph and report the leaf-call ratio
    (n_qpbo - n_no_qpbo) / n_no_qpbo; negative means persistency saved calls."""
    graphs = list(graphs)
    if not graphs:
        raise ValueError("need at least one graph")
    if solver is None:
        solver = default_leaf_solver(threshold or DEFAULT_THRESHOLD)
    elif threshold is not None:
        solver = LeafSolver(solver.fn, threshold)
    rows = []
    for gid, g in enumerate(graphs):
        with_clique, with_stats = max_clique_split(g, solver, use_persistency=True)
        without_clique, without_stats = max_clique_split(g, solver, use_persistency=False)
        if len(with_clique) != len(without_clique):
            raise AssertionError(
                f"graph {gid}: split modes disagree "
                f"({len(with_clique)} vs {len(without_clique)})"
            )
        if with_stats.n_calls > without_stats.n_calls:
            logger.info(
                "graph %d: persistency increased leaf calls (%d > %d)",
                gid,
                with_stats.n_calls,
                without_stats.n_calls,
            )
        rows.append(
            SavingsRow(gid, with_stats.n_calls, without_stats.n_calls, len(with_clique))
        )
    return rows
