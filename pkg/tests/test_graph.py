import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gcdb_lab import graph, lattice
from gcdb_lab.graph import KNOWN_LONESOME_GCDS, KNOWN_LONESOME_POINT

from oracles import components_bfs, gcd_b_brute, gcd_b_brute_grid


def _vis(r, s, b):
    return r >= 1 and s >= 1 and gcd_b_brute(r, s, b) == 1


def test_neighbor_count_examples():
    assert graph.visible_neighbor_count(2, 2, 1) == 4
    for b in (1, 2, 3):
        assert graph.visible_neighbor_count(1, 1, b) == 2
    r, s = KNOWN_LONESOME_POINT
    assert graph.visible_neighbor_count(r, s, 2) == 0


@pytest.mark.parametrize("b", [1, 2, 3])
def test_neighbor_grid_against_direct_count(b):
    N = 40
    grid = graph.neighbor_count_grid(b, N)
    for r in range(1, N + 1):
        for s in range(1, N + 1):
            expect = sum(_vis(r + i, s + j, b) for i, j in graph.EDGE_OFFSETS)
            assert grid[r - 1, s - 1] == expect


@pytest.mark.parametrize("b", [1, 2])
def test_connectivity_on_three_by_three(b):
    est = graph.mean_connectivity_estimate(b, 3)
    total = sum(_vis(r + i, s + j, b) for r in range(1, 4) for s in range(1, 4) for i, j in graph.EDGE_OFFSETS)
    assert est.raw_sum == total and est.estimate == total / 9


@pytest.mark.parametrize("b", [1, 2])
def test_connectivity_converges(b):
    near = graph.mean_connectivity_estimate(b, 500).abs_error
    far = graph.mean_connectivity_estimate(b, 4000).abs_error
    assert far < near


@pytest.mark.parametrize("b, N", [(1, 100), (2, 100), (2, 37), (3, 64)])
def test_double_counting(b, N):
    # sum of neighbour counts = 2 * in-window edges
    #   + visible in-window neighbours of invisible points
    #   + visible neighbours just outside the window
    counts = graph.neighbor_count_grid(b, N)
    g = graph.window_graph(b, 1, N, 1, N)
    vis = g.bitmap
    inv_in = 0
    for r in range(1, N + 1):
        for s in range(1, N + 1):
            if not vis[r - 1, s - 1]:
                inv_in += sum(
                    1 <= r + i <= N and 1 <= s + j <= N and vis[r + i - 1, s + j - 1] for i, j in graph.EDGE_OFFSETS
                )
    outside = sum(_vis(N + 1, s, b) for s in range(1, N + 1)) + sum(_vis(r, N + 1, b) for r in range(1, N + 1))
    assert int(counts.sum()) == 2 * g.edge_count + inv_in + outside


@pytest.mark.parametrize("b", [2, 3])
def test_g1_inside_gb(b):
    v1 = graph.window_graph(1, 1, 200, 1, 200).bitmap
    vb = graph.window_graph(b, 1, 200, 1, 200).bitmap
    assert not (v1 & ~vb).any()


def test_window_graph_matches_brute():
    g = graph.window_graph(2, 5, 40, 3, 70)
    ref = gcd_b_brute_grid(40, 70, 2)[4:, 2:] == 1
    assert np.array_equal(g.bitmap, ref)


def test_components_small_window():
    st_ = graph.components(1, (1, 10, 1, 10))
    g = graph.window_graph(1, 1, 10, 1, 10)
    lab, n = g.labels()
    assert lab[0, 0] == lab[0, 1] == lab[1, 0] != 0
    assert st_.count == n
    assert sum(k * v for k, v in st_.histogram.items()) == st_.visible == g.vertex_count


def test_components_synthetic():
    assert graph.component_stats(np.zeros((5, 5), bool)).count == 0
    one = np.zeros((5, 5), bool)
    one[2, 3] = True
    st_ = graph.component_stats(one)
    assert st_.count == 1 and st_.largest == 1 and st_.touching_boundary == 0


@given(arrays(bool, st.tuples(st.integers(1, 20), st.integers(1, 20))))
def test_components_against_bfs(bitmap):
    st_ = graph.component_stats(bitmap)
    sizes = components_bfs(bitmap)
    assert st_.count == len(sizes)
    assert sorted(k for k, v in st_.histogram.items() for _ in range(v)) == sizes
    assert st_.largest == (sizes[-1] if sizes else 0)


def test_components_independent_of_workers():
    a = graph.components(2, (1, 300, 1, 300), workers=1)
    b = graph.components(2, (1, 300, 1, 300), workers=4)
    assert a == b


def test_largest_component_b2_exceeds_b1():
    d1 = graph.largest_component_density(1, 2000, schedule=(2000,)).density
    d2 = graph.largest_component_density(2, 2000, schedule=(2000,)).density
    assert d2 > d1


def test_largest_component_schedule():
    rep = graph.largest_component_density(1, 400)
    assert rep.schedule == (100, 200, 400)
    assert len(rep.to_records()) == 3
    with pytest.raises(ValueError):
        graph.largest_component_density(1, 50)


# -- lonesome points ---------------------------------------------------------------------------


def test_known_lonesome_point():
    r, s = KNOWN_LONESOME_POINT
    res = graph.find_lonesome(2, "scan", point=(r, s))
    assert res.center_gcd == 1
    assert res.neighbor_gcds == KNOWN_LONESOME_GCDS
    assert res.lonesome


def test_scan_b1_window():
    res = graph.find_lonesome(1, "scan", window=(1, 200, 1, 200))
    if res.point is not None:
        r, s = res.point
        assert gcd_b_brute(r, s, 1) == 1
        assert all(gcd_b_brute(r + i, s + j, 1) > 1 for i, j in graph.RING_OFFSETS)


def test_scan_reports_none():
    res = graph.find_lonesome(2, "scan", window=(1, 50, 1, 50))
    assert res.point is None and not res.lonesome


@pytest.mark.parametrize("b", [1, 2])
def test_construct_lonesome(b):
    res = graph.find_lonesome(b, "construct")
    assert res.lonesome
    assert res.realization.verify().ok


def test_unknown_strategy():
    with pytest.raises(ValueError):
        graph.find_lonesome(2, "guess")


# -- neighbour count as a point function ------------------------------------------------------


def test_zeta_Lambda_of_neighbor_count():
    est = lattice.zeta_Lambda_estimate(graph.VisibleNeighborCount(2), 2, 1000, bound=4.0)
    assert est.value == pytest.approx(4.0, abs=0.02)
    assert est.direct == pytest.approx(4.0, abs=0.02)


# -- dumps -------------------------------------------------------------------------------------


def test_pbm_pgm(tmp_path):
    g = graph.window_graph(1, 1, 13, 1, 9)
    graph.write_pbm(g.bitmap, tmp_path / "v.pbm")
    data = (tmp_path / "v.pbm").read_bytes()
    assert data.startswith(b"P4\n13 9\n")
    assert len(data) == len(b"P4\n13 9\n") + 9 * 2
    graph.write_pgm(g.labels()[0], tmp_path / "c.pgm")
    data = (tmp_path / "c.pgm").read_bytes()
    assert data.startswith(b"P5\n13 9\n65535\n")
    assert len(data) == len(b"P5\n13 9\n65535\n") + 13 * 9 * 2
