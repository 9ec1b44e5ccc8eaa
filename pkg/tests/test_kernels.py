import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from limitlog import kernels


def _dense(n, edges):
    w = np.full((n, n), kernels.NO_EDGE, dtype=np.int64)
    exact = [[None] * n for _ in range(n)]
    for i, j, x in edges:
        w[i, j] = min(w[i, j], x)
        exact[i][j] = x if exact[i][j] is None else min(exact[i][j], x)
    return w, exact


def _bellman_ford_negative(n, edges):
    d = [0] * n
    for _ in range(n):
        changed = False
        for i, j, x in edges:
            if d[i] + x < d[j]:
                d[j] = d[i] + x
                changed = True
        if not changed:
            return False
    return True


edge_lists = st.integers(1, 7).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(-6, 6)),
                         max_size=16)))


@settings(max_examples=200, deadline=None)
@given(edge_lists)
def test_negative_cycle_backends_agree_with_bellman_ford(data):
    n, edges = data
    w, exact = _dense(n, edges)
    want = _bellman_ford_negative(n, edges)
    assert kernels.has_negative_cycle_numpy(w) == want
    assert kernels.has_negative_cycle(w) == want
    assert kernels.has_negative_cycle_exact(exact) == want


def test_exact_variant_handles_huge_weights():
    big = 10**30
    assert kernels.has_negative_cycle_exact([[None, big], [-big - 1, None]])
    assert not kernels.has_negative_cycle_exact([[None, big], [-big, None]])


def _box_reference(a, b, c, bound, maximize):
    import itertools
    best = None
    for x in itertools.product(range(-bound, bound + 1), repeat=a.shape[1]):
        x = np.array(x)
        if (a @ x <= b).all():
            v = int(c @ x)
            if best is None or (v > best if maximize else v < best):
                best = v
    return best


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_box_scan_backends_agree(seed, maximize):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4))
    m = int(rng.integers(0, 4))
    a = rng.integers(-4, 5, size=(m, n))
    b = rng.integers(-6, 7, size=m)
    c = rng.integers(-4, 5, size=n)
    want = _box_reference(a, b, c, 4, maximize)
    for fn in (kernels.box_scan_numpy, kernels.box_scan):
        found, best, x = fn(a, b, c, 4, maximize)
        assert found == (want is not None)
        if found:
            assert best == want and (a @ x <= b).all() and int(c @ x) == best


def test_backend_is_reported():
    assert kernels.BACKEND in ("numba", "numpy")
    if kernels.BACKEND == "numba":
        assert kernels.HAVE_NUMBA
