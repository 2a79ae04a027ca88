import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from colorcount.boxes import build_colored_boxes, lift_bottom_open, lift_top_open
from colorcount.model import ColoredPoint, INF

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


def colored_points(max_size=40, coord=30, colors=5, min_size=1):
    return st.lists(
        st.builds(ColoredPoint, st.integers(0, coord), st.integers(0, coord), st.integers(1, colors)),
        min_size=min_size, max_size=max_size)


def random_points(rng, n, coord=None, colors=5):
    coord = coord if coord is not None else 2 * n
    return [ColoredPoint(rng.randint(0, coord), rng.randint(0, coord), rng.randint(1, colors))
            for _ in range(n)]


def random_box_set(rng, n_points, colors, bottom_open=None):
    """Colored canonical boxes produced the way the framework produces them."""
    pts = random_points(rng, n_points, colors=colors)
    if bottom_open is None:
        bottom_open = rng.random() < 0.5
    lifted = lift_bottom_open(pts) if bottom_open else lift_top_open(pts)
    return build_colored_boxes(lifted).boxes


def stab_probes(rng, boxes, count):
    """Random stabbing points: half uniform, half placed on box boundaries."""
    coords = [c for b in boxes for c in (b.x1, b.y1, b.y2, b.z1, b.z2) if c < INF]
    lo, hi = (min(coords) - 2, max(coords) + 2) if coords else (-5, 5)
    out = []
    for k in range(count):
        if boxes and k % 2:
            b = rng.choice(boxes)
            x = rng.choice([b.x1, b.x1 - 1, b.x1 + rng.randint(0, 3)])
            y = rng.choice([b.y1, b.y1 - 1, b.y2 if b.y2 < INF else b.y1 + 7, b.y2 - 1 if b.y2 < INF else b.y1])
            z = rng.choice([b.z1, b.z1 - 1, b.z2 if b.z2 < INF else b.z1 + 7, b.z2 - 1 if b.z2 < INF else b.z1])
            out.append((x, y, z))
        else:
            out.append((rng.randint(lo, hi), rng.randint(lo, hi), rng.randint(lo, hi)))
    return out


@pytest.fixture
def rng():
    return random.Random(12345)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE = {}


def record(criterion: int, ok: bool, detail: str) -> str:
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE[criterion] = line
    print(line, flush=True)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
