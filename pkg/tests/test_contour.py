import math

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from shapesuite.data_utils.synth import make_shape_set
from shapesuite.data_utils.region import extract_regions
from shapesuite.geometry.contour import (PolyChain, convex_hull, discretize_hull_area, min_enclosing_rect,
                                         rdp_simplify, screen_angle, signed_area, surveyor_area)


def _hull_of(region):
    hull = convex_hull(region.outer_boundary)
    return hull, discretize_hull_area(hull)


def _clip(subject, a, b):
    out = []
    for i in range(len(subject)):
        p, q = subject[i], subject[(i + 1) % len(subject)]
        sp = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
        sq = (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0])
        if sp >= 0:
            out.append(p)
        if (sp >= 0) != (sq >= 0):
            t = sp / (sp - sq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def _gift_wrap(points):
    points = sorted(set(points))
    if len(points) < 3:
        return points
    hull = []
    current = points[0]
    while True:
        hull.append(current)
        candidate = points[0] if points[0] != current else points[1]
        for p in points:
            if p == current:
                continue
            cross = ((candidate[0] - current[0]) * (p[1] - current[1])
                     - (candidate[1] - current[1]) * (p[0] - current[0]))
            farther = (math.hypot(p[0] - current[0], p[1] - current[1])
                       > math.hypot(candidate[0] - current[0], candidate[1] - current[1]))
            if cross < 0 or (cross == 0 and farther):
                candidate = p
        current = candidate
        if current == hull[0]:
            return hull


def _brute_hull_area(hull_vertices):
    """暴力枚举像素格与(凸包 ⊕ 单位像素格)的重叠面积"""
    corners = [(r + dr, c + dc) for r, c in hull_vertices for dr in (-0.5, 0.5) for dc in (-0.5, 0.5)]
    polygon = _gift_wrap(corners)
    if signed_area(polygon) < 0:
        polygon = polygon[::-1]
    rows = [p[0] for p in polygon]
    cols = [p[1] for p in polygon]
    count = 0
    for r in range(int(math.floor(min(rows))), int(math.ceil(max(rows))) + 1):
        for c in range(int(math.floor(min(cols))), int(math.ceil(max(cols))) + 1):
            cell = [(r - 0.5, c - 0.5), (r - 0.5, c + 0.5), (r + 0.5, c + 0.5), (r + 0.5, c - 0.5)]
            for i in range(len(polygon)):
                cell = _clip(cell, polygon[i], polygon[(i + 1) % len(polygon)])
                if not cell:
                    break
            if len(cell) >= 3 and abs(signed_area(cell)) >= 0.5 - 1e-9:
                count += 1
    return count


def test_rectangle_hull(region_of):
    hull, a_convex = _hull_of(region_of(np.ones((5, 7), dtype=bool)))
    assert len(hull.hull_vertices) == 4
    assert a_convex == 35
    assert hull.algebraic_area > 0


def test_straight_line_hull_area(region_of):
    hull, a_convex = _hull_of(region_of(np.ones((1, 5), dtype=bool)))
    assert hull.degenerate
    assert 'hull_degenerate' in hull.flags
    assert a_convex == 5


def test_half_covered_cells_count(region_of):
    # 对角线两侧的8个像素与凸包恰好重叠一半，计入离散化面积
    hull, a_convex = _hull_of(region_of(np.eye(5, dtype=bool)))
    assert hull.degenerate
    assert a_convex == 13
    assert a_convex == _brute_hull_area(hull.hull_vertices)
    triangle = convex_hull([(0, 0), (0, 2), (2, 0)])
    assert discretize_hull_area(triangle) == _brute_hull_area(triangle.hull_vertices)


def test_donut_hull_area(region_of, donut_3x3):
    _, a_convex = _hull_of(region_of(donut_3x3))
    assert a_convex == 9


def test_hull_matches_qhull(rng):
    for _ in range(30):
        points = [tuple(p) for p in rng.integers(0, 30, size=(40, 2))]
        hull = convex_hull(points)
        reference = ConvexHull(np.asarray(points, dtype=np.float64))
        assert surveyor_area(hull.hull_vertices) == pytest.approx(reference.volume, abs=1e-9)
        vertices = hull.hull_vertices
        for i in range(len(vertices)):
            a, b = vertices[i], vertices[(i + 1) % len(vertices)]
            for p in points:
                assert (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) >= 0


def test_discretized_area_matches_cell_clipping(blobs, region_of):
    for mask in blobs[:20]:
        hull, a_convex = _hull_of(region_of(mask))
        assert a_convex == _brute_hull_area(hull.hull_vertices)
        assert a_convex >= int(mask.sum())


def test_poly_chain_rejects_duplicates():
    with pytest.raises(ValueError):
        PolyChain(((0, 0), (0, 0), (1, 1)))
    with pytest.raises(ValueError):
        PolyChain(((0, 0), (0, 1), (0, 0)), closed=True)


def test_rdp_simplify():
    chain = PolyChain(((0, 0), (0, 1), (0, 2), (1, 2), (2, 2)))
    assert rdp_simplify(chain, 0.5).vertices == ((0, 0), (0, 2), (2, 2))
    straight = PolyChain(tuple((0, c) for c in range(10)))
    assert rdp_simplify(straight, 0.0).vertices == ((0, 0), (0, 9))
    with pytest.raises(ValueError):
        rdp_simplify(chain, -1.0)


def test_rdp_keeps_rectangle_corners(region_of):
    region = region_of(np.ones((20, 40), dtype=bool))
    polygon = rdp_simplify(PolyChain.from_closed_walk(region.outer_boundary), 1.0)
    assert set(polygon.vertices) == {(0, 0), (0, 39), (19, 39), (19, 0)}


@pytest.mark.parametrize('dr, dc, expected', [(0, 1, 0.0), (0, -1, 0.0), (-1, 0, 90.0), (1, 0, 90.0),
                                              (-1, 1, 45.0), (1, 1, 135.0)])
def test_screen_angle(dr, dc, expected):
    assert screen_angle(dr, dc) == pytest.approx(expected, abs=1e-12)


def test_screen_angle_rotates_exactly():
    for dr, dc in [(-3, 7), (2, 5), (-1, 4)]:
        assert (screen_angle(-dc, dr) - screen_angle(dr, dc)) % 180.0 == pytest.approx(90.0, abs=1e-9)


def test_mer_rectangle(region_of):
    hull, _ = _hull_of(region_of(np.ones((5, 7), dtype=bool)))
    rect = min_enclosing_rect(hull)
    assert (rect.length_l, rect.width_w) == pytest.approx((7.0, 5.0))
    assert rect.angle_deg == pytest.approx(0.0)


def test_mer_line_and_point(region_of):
    hull, _ = _hull_of(region_of(np.ones((1, 5), dtype=bool)))
    rect = min_enclosing_rect(hull)
    assert (rect.length_l, rect.width_w, rect.angle_deg) == pytest.approx((5.0, 1.0, 0.0))
    point = min_enclosing_rect(convex_hull([(3, 3)]))
    assert point.degenerate
    assert (point.length_l, point.width_w, point.angle_deg) == (0.0, 0.0, 0.0)


def test_mer_square_tie(region_of):
    hull, _ = _hull_of(region_of(np.ones((4, 4), dtype=bool)))
    assert 'mer_square_tie' in min_enclosing_rect(hull).flags
    # 旋转45度的正方形，两个方向的跨度按浮点误差比较
    diamond = min_enclosing_rect(convex_hull([(0, 2), (2, 0), (4, 2), (2, 4)]))
    assert 'mer_square_tie' in diamond.flags
    assert diamond.length_l == pytest.approx(diamond.width_w)
    assert 'mer_square_tie' not in min_enclosing_rect(convex_hull([(0, 0), (0, 4), (3, 4), (3, 0)])).flags


def test_mer_angle_of_rotated_rectangles():
    synthetic = make_shape_set('rotrects', size=32)
    regions = extract_regions(synthetic.labels)
    for region, truth in zip(regions, synthetic.truth):
        hull, _ = _hull_of(region)
        angle = min_enclosing_rect(hull).angle_deg
        diff = abs(angle - truth['mer_angle_deg']) % 180.0
        assert min(diff, 180.0 - diff) <= 6.0
