"""Shared fixtures: a session-wide graph cache and the desk-scale case lists.

Graphs are immutable, so one instance per (variant, q, t) is safe to share
across the whole run; the big q=121/128 builds are only paid once.
"""

import pytest

from ramseycert import build_g_plus, build_g_times
from ramseycert.fields import factorize

# every valid (q, t) with q <= 128 for the sum construction ...
PLUS_Q = (4, 8, 9, 16, 25, 27, 32, 64, 81, 128)
# ... and q <= 121 for the product construction
TIMES_Q = (5, 7, 9, 11, 13, 25, 49, 81, 121)


def _plus_cases():
    out = []
    for q in PLUS_Q:
        (p, _), = factorize(q).items()
        t = p
        while t <= q:
            out.append(("plus", q, t))
            t *= p
    return out


def _times_cases():
    return [("times", q, t) for q in TIMES_Q
            for t in range(2, q) if (q - 1) % t == 0]


PLUS_CASES = _plus_cases()
TIMES_CASES = _times_cases()
ALL_CASES = PLUS_CASES + TIMES_CASES

_CACHE = {}


def cached_graph(variant, q, t):
    key = (variant, q, t)
    if key not in _CACHE:
        build = build_g_plus if variant == "plus" else build_g_times
        _CACHE[key] = build(q, t)
    return _CACHE[key]


@pytest.fixture(scope="session")
def graph():
    return cached_graph


def pytest_addoption(parser):
    parser.addoption("--overnight", action="store_true",
                     help="run the multi-hour exhaustive searches")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--overnight"):
        return
    skip = pytest.mark.skip(reason="multi-hour search; pass --overnight to run")
    for item in items:
        if "overnight" in item.keywords:
            item.add_marker(skip)
