"""Reference answers for the example programs, computed by ordinary graph code."""

from __future__ import annotations

import math
from graphlib import CycleError, TopologicalSorter
from typing import Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from ..errors import ContractError

__all__ = ["graph_oracle", "shortest_paths", "dag_path_counts", "diffusion"]


def shortest_paths(nodes: Sequence[str], edges, source: str) -> dict[str, int]:
    """Distances from ``source`` to every reachable node (weights >= 0)."""
    idx = {n: i for i, n in enumerate(nodes)}
    best: dict[tuple[int, int], int] = {}
    for u, v, w in edges:
        if w < 0:
            raise ContractError("shortest_path needs non-negative weights")
        k = (idx[u], idx[v])
        best[k] = min(w, best.get(k, w))
    n = len(nodes)
    # zero weights would vanish in a sparse matrix, so shift every weight by
    # a tiny epsilon per edge and round back; path lengths stay below 1
    eps = 1.0 / (4 * n + 4)
    rows = [u for u, _ in best]
    cols = [v for _, v in best]
    data = [w + eps for w in best.values()]
    graph = csr_matrix((data, (rows, cols)), shape=(n, n))
    dist = dijkstra(graph, directed=True, indices=idx[source])
    out = {}
    for name, d in zip(nodes, dist):
        if np.isfinite(d):
            out[name] = int(math.floor(d))
    return out


def _topo(nodes, edges) -> list[str]:
    ts = TopologicalSorter({n: set() for n in nodes})
    for u, v in edges:
        ts.add(v, u)  # v after u
    try:
        return list(ts.static_order())
    except CycleError as exc:
        raise ContractError(f"path counting needs a DAG; cycle through {exc.args[1]}") from None


def dag_path_counts(nodes: Sequence[str], edges, bandwidth: Mapping[str, int] | None = None
                    ) -> dict[tuple[str, str], int]:
    """``(x, y) -> value`` for every pair of nodes.

    Without ``bandwidth`` the value is the number of paths from ``x`` to
    ``y`` (1 for ``x == y``).  With it, the value follows the aggregation
    the bandwidth-capped program performs: going through the successors
    ``z_1, z_2, ...`` of ``x`` in node order with running sums ``S_k`` of
    their values, the result is the largest of ``min(S_k, bw(z_k))`` over
    all positions ``k`` of the order (``S_k`` counts only successors seen so
    far), and at least 1 when ``x == y``.
    """
    order = _topo(nodes, edges)
    succ = {n: set() for n in nodes}
    for u, v in edges:
        succ[u].add(v)
    val: dict[tuple[str, str], int] = {}
    for x in reversed(order):
        for y in nodes:
            if bandwidth is None:
                total = (1 if x == y else 0) + sum(val[(z, y)] for z in succ[x])
            else:
                total = 1 if x == y else 0
                running = 0
                for z in nodes:
                    if z in succ[x]:
                        running += val[(z, y)]
                    total = max(total, min(running, bandwidth[z]))
            val[(x, y)] = total
    return val


def diffusion(agents: Sequence[str], follows, thresholds: Mapping[str, int], source: str) -> set[str]:
    """Agents that end up tweeting; ``follows`` holds ``(x, y)`` if x follows y."""
    followees = {a: set() for a in agents}
    for x, y in follows:
        followees[x].add(y)
    tweeting = {source}
    changed = True
    while changed:
        changed = False
        for a in agents:
            if a in tweeting or a not in thresholds:
                continue
            if followees[a] and len(followees[a] & tweeting) >= thresholds[a]:
                tweeting.add(a)
                changed = True
    return tweeting


def graph_oracle(task: str, instance: Mapping):
    """Dispatch on ``task``: ``shortest_path``, ``dag_path_count`` or ``diffusion``."""
    task = task.replace("-", "_")
    if task == "shortest_path":
        nodes = instance.get("nodes") or sorted({n for e in instance["edges"] for n in e[:2]} | {instance["source"]})
        return shortest_paths(nodes, [tuple(e) for e in instance["edges"]], instance["source"])
    if task in ("dag_path_count", "path_count"):
        return dag_path_counts(instance["nodes"], [tuple(e) for e in instance["edges"]], instance.get("bandwidth"))
    if task == "diffusion":
        return diffusion(instance["agents"], [tuple(e) for e in instance["follows"]],
                         instance["thresholds"], instance["source"])
    raise ValueError(f"unknown task {task!r}")
