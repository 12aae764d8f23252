"""Contains convex hulls, hull area discretization, polygon simplification and the
oriented minimum enclosing rectangle.

Coordinates are (row, col) pixel centers. A pixel covers the unit cell centered on it.
"""
import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

_HALF_CELL = np.array([(-0.5, -0.5), (-0.5, 0.5), (0.5, 0.5), (0.5, -0.5)])
# 重叠面积比较的容差，恰好一半算作在内
_TIE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PolyChain:
    """Ordered vertex chain; closed chains do not repeat their first vertex."""
    vertices: Tuple[Tuple[int, int], ...]
    closed: bool = False

    def __post_init__(self):
        vertices = tuple((int(r), int(c)) for r, c in self.vertices)
        if len(vertices) == 0:
            raise ValueError('折线至少需要1个顶点')
        for a, b in zip(vertices[:-1], vertices[1:]):
            if a == b:
                raise ValueError('折线中不能有连续重复的顶点: %s' % (a,))
        if self.closed and len(vertices) > 1 and vertices[0] == vertices[-1]:
            raise ValueError('闭合折线不需要重复第一个顶点')
        object.__setattr__(self, 'vertices', vertices)

    @classmethod
    def from_closed_walk(cls, walk):
        """从首尾相同的边界序列创建闭合折线"""
        walk = [tuple(p) for p in walk]
        if len(walk) > 1 and walk[0] == walk[-1]:
            walk = walk[:-1]
        dedup = [walk[0]]
        for p in walk[1:]:
            if p != dedup[-1]:
                dedup.append(p)
        if len(dedup) > 1 and dedup[-1] == dedup[0]:
            dedup.pop()
        return cls(tuple(dedup), closed=True)

    def __len__(self):
        return len(self.vertices)

    @property
    def degenerate(self):
        return len(set(self.vertices)) < 3

    def as_array(self):
        return np.asarray(self.vertices, dtype=np.float64).reshape(-1, 2)


@dataclass(frozen=True)
class ConvexHullResult:
    hull_vertices: Tuple[Tuple[int, int], ...]
    algebraic_area: float = 0.0
    a_convex: int = 0
    flags: Tuple[str, ...] = field(default=())

    @property
    def degenerate(self):
        return len(self.hull_vertices) < 3


@dataclass(frozen=True)
class OrientedRect:
    length_l: float
    width_w: float
    angle_deg: float
    flags: Tuple[str, ...] = field(default=())

    @property
    def degenerate(self):
        return 'mer_degenerate' in self.flags


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _monotone_chain(points):
    """Andrew单调链，points必须已按(row, col)排序且无重复，返回逆时针且无共线点的顶点"""
    if len(points) <= 2:
        return list(points)
    lower = []
    for p in points:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(points):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull


def _row_extremes(points):
    """每一行只保留最左和最右的点，结果天然按(row, col)有序"""
    points = np.asarray(points, dtype=np.int64).reshape(-1, 2)
    rows = points[:, 0]
    r0 = int(rows.min())
    span = int(rows.max()) - r0 + 1
    lo = np.full(span, np.iinfo(np.int64).max, dtype=np.int64)
    hi = np.full(span, np.iinfo(np.int64).min, dtype=np.int64)
    np.minimum.at(lo, rows - r0, points[:, 1])
    np.maximum.at(hi, rows - r0, points[:, 1])
    ordered = []
    for i in range(span):
        if lo[i] > hi[i]:
            continue
        ordered.append((r0 + i, int(lo[i])))
        if hi[i] != lo[i]:
            ordered.append((r0 + i, int(hi[i])))
    return ordered


def surveyor_area(polygon):
    """鞋带公式计算闭合多边形的面积，少于3个顶点时面积为0

    :param polygon: 闭合折线或顶点序列
    :return: 面积的绝对值
    :rtype: float
    """
    vertices = polygon.as_array() if isinstance(polygon, PolyChain) else np.asarray(polygon, dtype=np.float64)
    if len(vertices) < 3:
        return 0.0
    r, c = vertices[:, 0], vertices[:, 1]
    return abs(float(np.dot(r, np.roll(c, -1)) - np.dot(np.roll(r, -1), c))) / 2.0


def signed_area(vertices):
    vertices = np.asarray(vertices, dtype=np.float64)
    if len(vertices) < 3:
        return 0.0
    r, c = vertices[:, 0], vertices[:, 1]
    return float(np.dot(r, np.roll(c, -1)) - np.dot(np.roll(r, -1), c)) / 2.0


def convex_hull(boundary):
    """计算边界像素的凸包顶点（像素中心，逆时针）

    :param boundary: trace_outer_boundary返回的闭合像素序列或任意像素坐标序列
    :return: 只包含顶点和代数面积的凸包结果，a_convex需要再调用discretize_hull_area
    :rtype: ConvexHullResult
    """
    if isinstance(boundary, PolyChain):
        boundary = boundary.vertices
    if len(boundary) == 0:
        raise ValueError('边界不能为空')
    hull = _monotone_chain(_row_extremes(boundary))
    flags = ('hull_degenerate',) if len(hull) < 3 else ()
    return ConvexHullResult(hull_vertices=tuple(hull), algebraic_area=signed_area(hull), flags=flags)


def _cell_polygon(hull_vertices):
    """凸包与单位像素格的闵可夫斯基和，仍为凸多边形"""
    corners = (np.asarray(hull_vertices, dtype=np.float64)[:, None, :] + _HALF_CELL[None, :, :]).reshape(-1, 2)
    # 角点坐标都是半整数，放大两倍后用整数做单调链
    doubled = sorted(set((int(round(2 * r)), int(round(2 * c))) for r, c in corners))
    return np.asarray(_monotone_chain(doubled), dtype=np.float64) / 2.0


def _clip_cell(r, c, polygon):
    """Sutherland-Hodgman裁剪单位像素格，返回与凸多边形的重叠面积"""
    subject = [(r - 0.5, c - 0.5), (r - 0.5, c + 0.5), (r + 0.5, c + 0.5), (r + 0.5, c - 0.5)]
    n = len(polygon)
    for i in range(n):
        a = polygon[i]
        b = polygon[(i + 1) % n]
        if not subject:
            break
        clipped = []
        for j in range(len(subject)):
            p = subject[j]
            q = subject[(j + 1) % len(subject)]
            sp = _cross(a, b, p)
            sq = _cross(a, b, q)
            if sp >= 0:
                clipped.append(p)
            if (sp >= 0) != (sq >= 0):
                t = sp / (sp - sq)
                clipped.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
        subject = clipped
    return abs(signed_area(subject)) if len(subject) >= 3 else 0.0


def discretize_hull_area(hull, grid_shape=None):
    """统计与凸包重叠面积不少于半个像素的像素数量，恰好一半的像素计入

    :param hull: convex_hull的结果
    :type hull: ConvexHullResult
    :param grid_shape: 图像大小(height, width)，给定时只统计图像内的像素
    :return: 离散化后的凸包面积
    :rtype: int
    """
    if len(hull.hull_vertices) == 0:
        raise ValueError('凸包不能为空')
    polygon = _cell_polygon(hull.hull_vertices)
    r_min, c_min = np.floor(polygon.min(axis=0) + 0.5).astype(int)
    r_max, c_max = np.ceil(polygon.max(axis=0) - 0.5).astype(int)
    if grid_shape is not None:
        r_min, c_min = max(r_min, 0), max(c_min, 0)
        r_max, c_max = min(r_max, grid_shape[0] - 1), min(c_max, grid_shape[1] - 1)
    rr, cc = np.mgrid[r_min:r_max + 1, c_min:c_max + 1]
    rr, cc = rr.ravel().astype(np.float64), cc.ravel().astype(np.float64)
    # 每个像素四个角点相对每条边的位置
    corner_r = rr[:, None] + _HALF_CELL[None, :, 0]
    corner_c = cc[:, None] + _HALF_CELL[None, :, 1]
    all_inside = np.ones(len(rr), dtype=bool)
    any_outside_edge = np.zeros(len(rr), dtype=bool)
    for i in range(len(polygon)):
        a, b = polygon[i], polygon[(i + 1) % len(polygon)]
        side = (b[0] - a[0]) * (corner_c - a[1]) - (b[1] - a[1]) * (corner_r - a[0])
        all_inside &= np.all(side >= 0, axis=1)
        any_outside_edge |= np.all(side <= 0, axis=1) & np.any(side < 0, axis=1)
    count = int(all_inside.sum())
    straddling = np.nonzero(~all_inside & ~any_outside_edge)[0]
    for k in straddling:
        if _clip_cell(rr[k], cc[k], polygon) >= 0.5 - _TIE_TOLERANCE:
            count += 1
    return count


def _point_segment_distance(points, a, b):
    ab = b - a
    denom = float(np.dot(ab, ab))
    if denom == 0.0:
        return np.hypot(points[:, 0] - a[0], points[:, 1] - a[1])
    t = np.clip(((points - a) @ ab) / denom, 0.0, 1.0)
    proj = a + t[:, None] * ab
    return np.hypot(points[:, 0] - proj[:, 0], points[:, 1] - proj[:, 1])


def _rdp_open(points, epsilon):
    n = len(points)
    keep = np.zeros(n, dtype=bool)
    keep[0] = keep[-1] = True
    stack = [(0, n - 1)]
    while stack:
        start, end = stack.pop()
        if end - start < 2:
            continue
        dist = _point_segment_distance(points[start + 1:end], points[start], points[end])
        k = int(np.argmax(dist))
        if dist[k] > epsilon:
            idx = start + 1 + k
            keep[idx] = True
            stack.append((start, idx))
            stack.append((idx, end))
    return keep


def _chain_from_indices(chain, indices):
    vertices = []
    for i in indices:
        vertex = chain.vertices[int(i)]
        if not vertices or vertices[-1] != vertex:
            vertices.append(vertex)
    if chain.closed and len(vertices) > 1 and vertices[-1] == vertices[0]:
        vertices.pop()
    return PolyChain(tuple(vertices), closed=chain.closed)


def rdp_simplify(chain, epsilon):
    """Ramer-Douglas-Peucker折线简化，保留的顶点是原顶点的有序子集

    :param chain: 需要简化的折线
    :type chain: PolyChain
    :param epsilon: 距离阈值，单位为像素
    :type epsilon: float
    :return: 简化后的折线
    :rtype: PolyChain
    :raises ValueError: epsilon小于0
    """
    if epsilon < 0:
        raise ValueError('epsilon不能小于0，当前值为: %s' % epsilon)
    if len(chain) < 2:
        return chain
    points = chain.as_array()
    if not chain.closed:
        keep = _rdp_open(points, epsilon)
        return _chain_from_indices(chain, np.nonzero(keep)[0])
    # 闭合折线从起点和离起点最远的点处分成两段
    far = int(np.argmax(np.hypot(points[:, 0] - points[0, 0], points[:, 1] - points[0, 1])))
    if far == 0:
        return chain
    first = _rdp_open(points[:far + 1], epsilon)
    loop = np.vstack([points[far:], points[:1]])
    second = _rdp_open(loop, epsilon)
    indices = list(np.nonzero(first)[0])
    indices += [far + i for i in np.nonzero(second)[0][1:-1]]
    return _chain_from_indices(chain, indices)


def screen_angle(dr, dc):
    """整数方向向量在屏幕坐标下的方向角，范围[0, 180)，水平为0，逆时针为正

    先用精确的90度旋转把向量转到第一象限，使旋转90度的输入得到精确相差90度的结果。
    """
    x, y = int(dc), int(-dr)
    if x == 0 and y == 0:
        return 0.0
    k = 0
    while not (x > 0 and y >= 0):
        x, y = -y, x
        k += 1
    base = math.degrees(math.atan2(y, x))
    return base if k % 2 == 0 else base + 90.0


def min_enclosing_rect(hull):
    """旋转卡壳求有一条边与凸包边共线的最小面积外接矩形

    宽和长按像素格计算，即中心点跨度加1。

    :param hull: 凸包结果
    :type hull: ConvexHullResult
    :return: L>=W的定向矩形，角度为L边的方向
    :rtype: OrientedRect
    """
    vertices = np.asarray(hull.hull_vertices, dtype=np.int64).reshape(-1, 2)
    if len(vertices) == 0:
        raise ValueError('凸包不能为空')
    if len(vertices) == 1:
        return OrientedRect(length_l=0.0, width_w=0.0, angle_deg=0.0, flags=('mer_degenerate',))
    best = None
    n = len(vertices)
    for i in range(n if n > 2 else 1):
        d = vertices[(i + 1) % n] - vertices[i]
        norm = math.hypot(d[0], d[1])
        along = vertices @ d
        across = vertices[:, 0] * d[1] - vertices[:, 1] * d[0]
        span_u = (int(along.max()) - int(along.min())) / norm + 1.0
        span_n = (int(across.max()) - int(across.min())) / norm + 1.0
        area = span_u * span_n
        if best is None or area < best[0]:
            best = (area, span_u, span_n, int(d[0]), int(d[1]))
    _, span_u, span_n, dr, dc = best
    flags = []
    tie = abs(span_u - span_n) <= _TIE_TOLERANCE
    if tie or span_u > span_n:
        length_l, width_w, angle = span_u, span_n, screen_angle(dr, dc)
    else:
        length_l, width_w, angle = span_n, span_u, screen_angle(-dc, dr)
    if tie:
        flags.append('mer_square_tie')
    if len(vertices) == 2:
        flags.append('hull_degenerate')
    return OrientedRect(length_l=length_l, width_w=width_w, angle_deg=angle, flags=tuple(flags))
