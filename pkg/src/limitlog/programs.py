"""Source text of the standard example programs, plus instance encoders.

Each ``*_program`` function returns ``.lgl`` text; pass it through
:func:`limitlog.frontend.parse_program`.  Node and agent names must be
lowercase identifiers.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

SHORTEST_PATH = """\
% single-source shortest paths; sp(v, d) holds for every d >= the distance
pred edge(obj, obj, int).
pred sp(obj, min int).

sp(Y, M + N) :- sp(X, M), edge(X, Y, N).
"""

DIFFUSION = """\
% threshold diffusion: an agent tweets once enough of its followees do
pred follows(obj, obj).
pred first(obj).
pred next(obj, obj).
pred th(obj, int).
pred tw(obj).
pred nt(obj, obj, max int).

nt(X, Y, 0) :- follows(X, Y1), first(Y).
nt(X, Y, 1) :- follows(X, Y), first(Y), tw(Y).
nt(X, Y, M) :- nt(X, Y1, M), next(Y1, Y).
nt(X, Y, M + 1) :- nt(X, Y1, M), next(Y1, Y), follows(X, Y), tw(Y).
tw(X) :- th(X, M), nt(X, Y, N), (M <= N).
"""

PATH_COUNT = """\
% number of paths between every pair of nodes of a DAG
pred node(obj).
pred edge(obj, obj).
pred first(obj).
pred next(obj, obj).
pred np(obj, obj, max int).
pred np'(obj, obj, obj, max int).

np(X, X, 1) :- node(X).
np'(X, Y, Z, 0) :- node(X), node(Y), first(Z).
np'(X, Y, Z, M) :- edge(X, Z), np(Z, Y, M), first(Z).
np'(X, Y, Z, M) :- np'(X, Y, Z1, M), next(Z1, Z).
np'(X, Y, Z, M + N) :- np'(X, Y, Z1, M), next(Z1, Z), edge(X, Z), np(Z, Y, N).
"""

PATH_COUNT_PLAIN_TAIL = "np(X, Y, M) :- np'(X, Y, Z, M).\n"
PATH_COUNT_BANDWIDTH_TAIL = (
    "pred bw(obj, int).\n"
    "np(X, Y, M) :- np'(X, Y, Z, M), bw(Z, N), (M <= N).\n"
)

P_C = """\
pred a(max int).
pred b(max int).

a(0).
b(0).
b(M) :- a(M).
a(M + 1) :- b(M).
"""

P_C_PRIME = """\
pred a(max int).
pred b(max int).
pred c(max int).

a(0).
b(0).
c(5).
b(M) :- a(M), c(N), (M <= N).
a(M + 1) :- b(M).
"""


def _order(items: Sequence[str]) -> list[str]:
    out = []
    if items:
        out.append(f"first({items[0]}).")
        out += [f"next({a}, {b})." for a, b in zip(items, items[1:])]
    return out


def shortest_path_program(edges: Iterable[tuple[str, str, int]], source: str) -> str:
    lines = [SHORTEST_PATH, f"sp({source}, 0)."]
    lines += [f"edge({u}, {v}, {w})." for u, v, w in edges]
    return "\n".join(lines) + "\n"


def diffusion_program(agents: Sequence[str], follows: Iterable[tuple[str, str]],
                      thresholds: Mapping[str, int], source: str) -> str:
    """``follows`` holds ``(x, y)`` when ``x`` follows ``y``."""
    lines = [DIFFUSION, f"tw({source})."]
    lines += _order(agents)
    lines += [f"follows({x}, {y})." for x, y in follows]
    lines += [f"th({a}, {k})." for a, k in thresholds.items()]
    return "\n".join(lines) + "\n"


def path_count_program(nodes: Sequence[str], edges: Iterable[tuple[str, str]],
                       bandwidth: Mapping[str, int] | None = None) -> str:
    lines = [PATH_COUNT + (PATH_COUNT_BANDWIDTH_TAIL if bandwidth is not None else PATH_COUNT_PLAIN_TAIL)]
    lines += [f"node({n})." for n in nodes]
    lines += _order(nodes)
    lines += [f"edge({u}, {v})." for u, v in edges]
    if bandwidth is not None:
        lines += [f"bw({n}, {b})." for n, b in bandwidth.items()]
    return "\n".join(lines) + "\n"
