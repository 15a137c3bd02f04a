"""Max-flow primitive on small graphs with known optima."""

import pytest

from plantflow.dinic import max_flow


def test_single_arc():
    r = max_flow(2, 0, 1, [0], [1], [0.7])
    assert r.value == pytest.approx(0.7)
    assert list(r.arc_flow) == [pytest.approx(0.7)]


def test_diamond():
    # 0->1->3 and 0->2->3, caps force 0.5 + 0.25
    tails = [0, 1, 0, 2]
    heads = [1, 3, 2, 3]
    caps = [0.5, 1.0, 0.25, 0.25]
    r = max_flow(4, 0, 3, tails, heads, caps)
    assert r.value == pytest.approx(0.75)


def test_bottleneck_in_middle():
    # two sources worth 1.0 squeezed through a 0.4 middle arc
    tails = [0, 0, 1, 2, 3]
    heads = [1, 2, 3, 3, 4]
    caps = [0.5, 0.5, 1.0, 1.0, 0.4]
    r = max_flow(5, 0, 4, tails, heads, caps)
    assert r.value == pytest.approx(0.4)


def test_disconnected_sink():
    r = max_flow(3, 0, 2, [0], [1], [1.0])
    assert r.value == 0.0


def test_zero_capacity_arcs_carry_nothing():
    r = max_flow(2, 0, 1, [0, 0], [1, 1], [0.0, 0.3])
    assert r.value == pytest.approx(0.3)
    assert r.arc_flow[0] == 0.0


def test_antiparallel_pair():
    # arcs both ways between 1 and 2; only the forward direction helps
    tails = [0, 1, 2, 2]
    heads = [1, 2, 1, 3]
    caps = [1.0, 0.6, 0.9, 1.0]
    r = max_flow(4, 0, 3, tails, heads, caps)
    assert r.value == pytest.approx(0.6)


def test_cutoff_stops_early_at_exact_threshold():
    tails = [0, 0, 1, 2]
    heads = [1, 2, 3, 3]
    caps = [0.5, 0.5, 0.5, 0.5]
    r = max_flow(4, 0, 3, tails, heads, caps, cutoff=0.5)
    # cutoff is an exact >= test; the search may stop at the threshold
    assert r.value >= 0.5
    full = max_flow(4, 0, 3, tails, heads, caps)
    assert full.value == pytest.approx(1.0)


def test_cutoff_above_max_returns_max():
    r = max_flow(2, 0, 1, [0], [1], [0.7], cutoff=2.0)
    assert r.value == pytest.approx(0.7)


def test_flow_conservation_on_random_grid():
    # 3x3 grid, left column fed, right column drained
    import random
    rnd = random.Random(4)
    n = 11  # 9 cells + source 9 + sink 10
    tails, heads, caps = [], [], []

    def arc(a, b, c):
        tails.append(a)
        heads.append(b)
        caps.append(c)

    for r_ in range(3):
        arc(9, 3 * r_, rnd.randint(1, 8) / 4.0)
        arc(3 * r_ + 2, 10, rnd.randint(1, 8) / 4.0)
        for c_ in range(2):
            arc(3 * r_ + c_, 3 * r_ + c_ + 1, rnd.randint(1, 8) / 4.0)
    for c_ in range(3):
        for r_ in range(2):
            arc(3 * r_ + c_, 3 * (r_ + 1) + c_, rnd.randint(1, 8) / 4.0)
            arc(3 * (r_ + 1) + c_, 3 * r_ + c_, rnd.randint(1, 8) / 4.0)

    res = max_flow(n, 9, 10, tails, heads, caps)
    # conservation at every interior vertex
    net = [0.0] * n
    for a, (t, h) in enumerate(zip(tails, heads)):
        assert -1e-12 <= res.arc_flow[a] <= caps[a] + 1e-12
        net[t] += res.arc_flow[a]
        net[h] -= res.arc_flow[a]
    for v in range(9):
        assert net[v] == pytest.approx(0.0, abs=1e-12)
    assert net[9] == pytest.approx(res.value, abs=1e-12)
