"""Shared invariant checks used by several test modules."""

from __future__ import annotations

from limitlog.core import INF, Fact, Kind, satisfies
from limitlog.engine import build_vpg, iteration_bound


def propagation_target(src_kind, dst_kind, k, mu):
    """Value the target must reach along a path of weight ``mu`` from a
    source holding ``k``; ``INF`` when the path forces divergence."""
    if k is INF or mu is INF:
        return INF
    if src_kind is Kind.MAX:
        return k + mu if dst_kind is Kind.MAX else -k - mu
    return k - mu if dst_kind is Kind.MIN else -k + mu


def propagation_violations(program, J, max_len: int = 4) -> list:
    """Walks of up to ``max_len`` edges in the graph of ``J`` whose endpoint
    is weaker than the source value plus the walk weight allows."""
    G = build_vpg(program, J)
    succ: dict = {}
    for (s, d), w in G.weights.items():
        succ.setdefault(s, []).append((d, w))
    bad = []
    for start in G.nodes:
        k = J.limit_value(*start)
        stack = [(start, 0, 0)]
        while stack:
            node, mu, depth = stack.pop()
            if depth == max_len:
                continue
            for nxt, w in succ.get(node, ()):
                total = INF if (mu is INF or w is INF) else mu + w
                t = propagation_target(start[0].kind, nxt[0].kind, k, total)
                if not satisfies(J, Fact(nxt[0], nxt[1], t)):
                    bad.append((start, nxt, total))
                stack.append((nxt, total, depth + 1))
    return bad


def structural_violations(pipeline) -> list[str]:
    """Closure size against the semi-grounding, iterations against the budget."""
    res = pipeline.result
    out = []
    if len(res.closure) > len(pipeline.ground.rules):
        out.append(f"closure has {len(res.closure)} facts, semi-grounding {len(pipeline.ground.rules)} rules")
    if res.iterations > iteration_bound(res.rules):
        out.append(f"{res.iterations} iterations exceed the budget")
    return out


def visible(J):
    return J.restrict(lambda d: not d.builtin)
