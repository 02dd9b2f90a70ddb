import random

import pytest

from aperimet.cutproject import generate_patch
from aperimet.search import reconstruct_paper_pair
from aperimet.window import Polyomino, is_edge_connected


@pytest.fixture(scope="session")
def pair():
    return reconstruct_paper_pair()


@pytest.fixture(scope="session")
def patches50(pair):
    return generate_patch(pair.left, 50.0), generate_patch(pair.right, 50.0)


def random_polyomino(rng: random.Random, n: int, connected: bool = True) -> Polyomino:
    """Random cell set grown by accretion (connected) or scattered in a box."""
    if connected:
        cells = {(0, 0)}
        while len(cells) < n:
            x, y = rng.choice(sorted(cells))
            dx, dy = rng.choice(((1, 0), (-1, 0), (0, 1), (0, -1)))
            cells.add((x + dx, y + dy))
        assert is_edge_connected(cells)
        return Polyomino(frozenset(cells))
    side = max(2, n)
    cells = set()
    while len(cells) < n:
        cells.add((rng.randrange(side), rng.randrange(side)))
    return Polyomino(frozenset(cells), require_connected=False)


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
