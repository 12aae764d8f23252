"""Contains the seven intuitive shape descriptors computed from a region."""
import math
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from shapesuite.featurizer.config import FuzzyRectConfig, StraightnessConfig, triangle_membership, z_membership
from shapesuite.geometry.contour import PolyChain, signed_area, rdp_simplify


@dataclass(frozen=True)
class StraightnessResult:
    per_scale: Dict[int, float]
    value: float
    best_scale: int
    flags: Tuple[str, ...] = field(default=())


@dataclass(frozen=True)
class RectangularityResult:
    value: float
    polygon: PolyChain
    interior_angles: Tuple[float, ...]
    rule_memberships: Tuple[float, float, float]
    flags: Tuple[str, ...] = field(default=())


def _clamp01(value):
    return float(min(1.0, max(0.0, value)))


def convexity(region, hull_result):
    """CnvxtyAndNoHole = A / A_convex，A不包含洞的像素"""
    # 共线的区域就是一条直线，本身是凸的
    if hull_result.degenerate:
        return 1.0
    if hull_result.a_convex <= 0:
        raise ValueError('离散化凸包面积必须大于0')
    return _clamp01(region.area / hull_result.a_convex)


def roundness(region):
    """RndnssAndNoHole = 4 * sqrt(A) / PL，PL包含洞的边界"""
    return _clamp01(4.0 * math.sqrt(region.area) / region.pl_total)


def _boundary_positions(boundary):
    positions = np.asarray(boundary, dtype=np.float64).reshape(-1, 2)
    if len(positions) > 1 and np.array_equal(positions[0], positions[-1]):
        positions = positions[:-1]
    return positions


def straightness_at_scale(positions, step, angle_threshold_deg):
    """步长为step时直的边界点所占比例，下标按边界点个数取模"""
    prev_vec = np.roll(positions, step, axis=0) - positions
    next_vec = np.roll(positions, -step, axis=0) - positions
    cross = prev_vec[:, 0] * next_vec[:, 1] - prev_vec[:, 1] * next_vec[:, 0]
    dot = np.einsum('ij,ij->i', prev_vec, next_vec)
    angle = np.degrees(np.arctan2(np.abs(cross), dot))
    deviation = 180.0 - angle
    valid = np.any(prev_vec != 0, axis=1) & np.any(next_vec != 0, axis=1)
    straight = valid & (deviation <= angle_threshold_deg + 1e-9)
    return float(np.count_nonzero(straight)) / len(positions)


def straightness(boundary, cfg=None):
    """多尺度边界直线度，取各步长直线度的最大值，边界点过少的步长跳过

    :param boundary: 首尾相同的外边界像素序列
    :param cfg: 直线度配置
    :type cfg: StraightnessConfig
    :rtype: StraightnessResult
    """
    cfg = cfg or StraightnessConfig()
    positions = _boundary_positions(boundary)
    count = len(positions)
    per_scale = {}
    for step in cfg.scales:
        if count < 2 * step + 2:
            continue
        per_scale[step] = straightness_at_scale(positions, step, cfg.angle_threshold_deg)
    if not per_scale:
        return StraightnessResult(per_scale={}, value=0.0, best_scale=cfg.scales[0],
                                  flags=('straightness_undefined',))
    best_scale = max(per_scale, key=lambda s: (per_scale[s], -s))
    return StraightnessResult(per_scale=per_scale, value=per_scale[best_scale], best_scale=best_scale)


def interior_angles(polygon):
    """闭合多边形每个顶点的内角（度），凹顶点大于180"""
    vertices = polygon.as_array()
    orientation = 1.0 if signed_area(vertices) >= 0 else -1.0
    incoming = vertices - np.roll(vertices, 1, axis=0)
    outgoing = np.roll(vertices, -1, axis=0) - vertices
    cross = incoming[:, 0] * outgoing[:, 1] - incoming[:, 1] * outgoing[:, 0]
    dot = np.einsum('ij,ij->i', incoming, outgoing)
    turn = np.degrees(np.arctan2(orientation * cross, dot))
    return 180.0 - turn


def fuzzy_rectangularity(boundary, cfg=None, straightness_result=None):
    """基于模糊规则的矩形度：RDP多边形上约4个间隔足够大的近直角顶点，且远大于和远小于90度的顶点都不超过2个

    RDP的epsilon取直线度最大的步长。

    :rtype: RectangularityResult
    """
    cfg = cfg or FuzzyRectConfig()
    if straightness_result is None:
        straightness_result = straightness(boundary)
    chain = PolyChain.from_closed_walk([tuple(p) for p in np.asarray(boundary).reshape(-1, 2)])
    polygon = rdp_simplify(chain, float(straightness_result.best_scale))
    if len(polygon) < 3:
        return RectangularityResult(value=0.0, polygon=polygon, interior_angles=(),
                                    rule_memberships=(0.0, 0.0, 0.0), flags=('polygon_degenerate',))
    angles = interior_angles(polygon)
    vertices = polygon.as_array()
    right = cfg.right_angle(angles)
    # 每个近直角顶点到其它近直角顶点的最小距离
    candidates = np.nonzero(right > 0)[0]
    nearest = np.full(len(angles), np.inf)
    for i in candidates:
        others = candidates[candidates != i]
        if len(others):
            nearest[i] = np.min(np.hypot(*(vertices[others] - vertices[i]).T))
    separation = np.where(np.isfinite(nearest), cfg.separated(np.where(np.isfinite(nearest), nearest, 0.0)), 1.0)
    right_count = float(np.minimum(right, separation).sum())
    obtuse_count = float(cfg.obtuse(angles).sum())
    acute_count = float(cfg.acute(angles).sum())
    rule_count = float(triangle_membership(right_count, cfg.target_vertex_count, cfg.count_half_width))
    rule_obtuse = float(z_membership(obtuse_count, cfg.max_obtuse_count,
                                     cfg.max_obtuse_count + cfg.excess_count_span))
    rule_acute = float(z_membership(acute_count, cfg.max_acute_count,
                                    cfg.max_acute_count + cfg.excess_count_span))
    value = _clamp01(min(rule_count, rule_obtuse, rule_acute))
    return RectangularityResult(value=value, polygon=polygon, interior_angles=tuple(float(a) for a in angles),
                                rule_memberships=(rule_count, rule_obtuse, rule_acute))


def elongatedness_ratio(length, width):
    """Elngtdnss = L / W，小于1时取1并标记

    :return: (取值, 标记)
    """
    if width <= 0:
        raise ValueError('骨架宽度必须大于0，当前值为: %s' % width)
    ratio = float(length) / float(width)
    if ratio < 1.0:
        return 1.0, ('elongatedness_floored',)
    return ratio, ()


def elongatedness(skel_metrics):
    """ElngtdnssAndNoHole = 骨架总长度 / 平均宽度，骨架在保留洞的区域上计算"""
    return elongatedness_ratio(skel_metrics.l_total, skel_metrics.w_avg)


def elongatedness_nm_ratio(length_nm, width_nm):
    """参照用的最长路径细长度，不做下限截断"""
    if width_nm <= 0:
        raise ValueError('骨架宽度必须大于0，当前值为: %s' % width_nm)
    return float(length_nm) / float(width_nm)


def elongatedness_nm(skel_metrics):
    """Elngtdnss_NM = 最长路径长度 / 路径平均宽度，骨架在填充洞后的区域上计算"""
    return elongatedness_nm_ratio(skel_metrics.l_longest, skel_metrics.w_longest_avg)


def combine_connectivity(term1, term2):
    """两个简单连通度分量的模糊与"""
    return min(float(term1), float(term2))


def simple_connectivity(region):
    """返回(SmplCnctvty4Adjncy, FilledAreaRatio, CombndSmplCnctvty)，无洞时均为1"""
    if region.hole_count == 0:
        return 1.0, 1.0, 1.0
    term1 = _clamp01(region.pl_external / region.pl_total)
    term2 = _clamp01(region.area / region.filled_area)
    return term1, term2, combine_connectivity(term1, term2)
