import numpy as np
import pytest
from scipy import ndimage

from shapesuite.geometry.skeleton import (Skeleton, distance_transform, euclidean_skeleton,
                                          longest_skeleton_path, medial_anchors, skeleton_metrics)

_EIGHT = np.ones((3, 3), dtype=bool)


def _brute_squared_edt(mask):
    padded = np.pad(mask, 1, mode='constant', constant_values=False)
    background = np.argwhere(~padded)
    out = np.zeros(padded.shape, dtype=np.int64)
    for r, c in np.argwhere(padded):
        out[r, c] = int(((background - (r, c)) ** 2).sum(axis=1).min())
    return out[1:-1, 1:-1]


def test_distance_transform_matches_brute_force():
    rng = np.random.default_rng(11)
    for _ in range(100):
        mask = rng.random((16, 16)) < 0.7
        if not mask.any():
            continue
        squared = distance_transform(mask).squared
        np.testing.assert_array_equal(squared, _brute_squared_edt(mask))


def test_distance_transform_matches_scipy():
    rng = np.random.default_rng(12)
    for _ in range(20):
        mask = rng.random((40, 30)) < 0.85
        padded = np.pad(mask, 1, mode='constant', constant_values=False)
        expected = np.rint(ndimage.distance_transform_edt(padded) ** 2).astype(np.int64)[1:-1, 1:-1]
        np.testing.assert_array_equal(distance_transform(mask).squared, expected)


def test_distance_transform_single_pixel():
    df = distance_transform(np.array([[True]]))
    assert df.squared[0, 0] == 1
    assert df[0, 0] == 1.0


def test_distance_transform_rejects_empty():
    with pytest.raises(ValueError):
        distance_transform(np.zeros((3, 3), dtype=bool))


def test_anchors_are_inside_region(blobs):
    for blob in blobs[:10]:
        anchors = medial_anchors(distance_transform(blob).squared, blob, 1.0)
        assert not (anchors & ~blob).any()


def test_bar_skeleton_is_the_bar():
    bar = np.ones((1, 9), dtype=bool)
    skel = euclidean_skeleton(bar)
    np.testing.assert_array_equal(skel.pixels, bar)
    metrics = skeleton_metrics(skel, distance_transform(bar))
    assert metrics.l_total == 9
    assert metrics.l_longest == 9
    assert metrics.w_longest_avg == pytest.approx(1.0)
    assert metrics.flags == ()


def test_thick_bar_skeleton():
    bar = np.ones((3, 30), dtype=bool)
    skel = euclidean_skeleton(bar)
    metrics = skeleton_metrics(skel, distance_transform(bar))
    assert 26 <= metrics.l_longest <= 30
    assert 2.0 <= metrics.w_longest_avg <= 3.0
    assert metrics.l_total >= metrics.l_longest


def test_skeleton_keeps_topology(blobs):
    for blob in blobs:
        skel = euclidean_skeleton(blob)
        assert not (skel.pixels & ~blob).any()
        _, count = ndimage.label(skel.pixels, structure=_EIGHT)
        assert count == 1


def test_donut_skeleton_has_cycle(donut_3x3):
    skel = euclidean_skeleton(donut_3x3)
    assert 'skeleton_cycles' in skel.flags
    path, flags = longest_skeleton_path(skel)
    assert 'path_heuristic' in flags
    assert len(path) >= 2


def test_skeleton_follows_rotation(blobs):
    for blob in blobs[:20]:
        rotated = euclidean_skeleton(np.rot90(blob)).pixels
        np.testing.assert_array_equal(rotated, np.rot90(euclidean_skeleton(blob).pixels))
        flipped = euclidean_skeleton(np.fliplr(blob)).pixels
        np.testing.assert_array_equal(flipped, np.fliplr(euclidean_skeleton(blob).pixels))


def test_larger_filter_keeps_fewer_anchors(disk_mask):
    disk = disk_mask(12)
    squared = distance_transform(disk).squared
    loose = medial_anchors(squared, disk, 0.5)
    strict = medial_anchors(squared, disk, 2.5)
    assert not (strict & ~loose).any()
    assert strict.sum() < loose.sum()


def test_negative_filter_raises():
    with pytest.raises(ValueError):
        euclidean_skeleton(np.ones((3, 3), dtype=bool), filter_param=-0.1)


def test_metrics_shape_mismatch():
    skel = euclidean_skeleton(np.ones((3, 3), dtype=bool))
    with pytest.raises(ValueError):
        skeleton_metrics(skel, distance_transform(np.ones((4, 4), dtype=bool)))


def test_longest_path_rejects_empty():
    with pytest.raises(ValueError):
        longest_skeleton_path(np.zeros((3, 3), dtype=bool))


def _neighbors(pixels):
    coords = [tuple(p) for p in np.argwhere(pixels)]
    members = set(coords)
    return {p: [(p[0] + dr, p[1] + dc) for dr in (-1, 0, 1) for dc in (-1, 0, 1)
                if (dr or dc) and (p[0] + dr, p[1] + dc) in members] for p in coords}


def _bfs_eccentricity(graph, source):
    seen = {source: 0}
    frontier = [source]
    while frontier:
        following = []
        for p in frontier:
            for q in graph[p]:
                if q not in seen:
                    seen[q] = seen[p] + 1
                    following.append(q)
        frontier = following
    return max(seen.values())


def _longest_simple_path(graph):
    best = 0

    def walk(p, visited):
        nonlocal best
        best = max(best, len(visited))
        for q in graph[p]:
            if q not in visited:
                visited.add(q)
                walk(q, visited)
                visited.remove(q)

    for p in graph:
        walk(p, {p})
    return best


def _assert_path(path, pixels):
    assert len(set(path)) == len(path)
    assert all(pixels[p] for p in path)
    for a, b in zip(path, path[1:]):
        assert max(abs(a[0] - b[0]), abs(a[1] - b[1])) == 1


def test_straight_skeleton_path():
    pixels = np.ones((1, 12), dtype=bool)
    path, flags = longest_skeleton_path(pixels)
    assert len(path) == 12
    assert flags == ()
    _assert_path(path, pixels)


def test_t_shaped_skeleton_total_and_longest_path():
    pixels = np.zeros((5, 8), dtype=bool)
    pixels[0, :] = True
    pixels[1:, 3] = True
    path, flags = longest_skeleton_path(pixels)
    assert len(path) == 8
    assert flags == ()
    _assert_path(path, pixels)
    skel = Skeleton(pixels=pixels, filter_param=1.0)
    metrics = skeleton_metrics(skel, distance_transform(pixels))
    assert (metrics.l_total, metrics.l_longest) == (12, 8)
    assert metrics.w_avg == pytest.approx(1.0)


def test_cyclic_skeleton_path_against_exhaustive_search():
    pixels = np.zeros((7, 5), dtype=bool)
    pixels[:5, :5] = True
    pixels[1:4, 1:4] = False
    pixels[5:, 2] = True
    assert pixels.sum() <= 20
    path, flags = longest_skeleton_path(pixels)
    assert 'path_heuristic' in flags
    _assert_path(path, pixels)
    graph = _neighbors(pixels)
    diameter = max(_bfs_eccentricity(graph, p) for p in graph)
    assert len(path) >= diameter + 1
    assert len(path) <= _longest_simple_path(graph)
