"""Contains the descriptor configurations and the fuzzy membership functions."""
from dataclasses import dataclass, field, asdict
from typing import Tuple

import numpy as np


def s_membership(x, a, b):
    """Zadeh的S型隶属函数，x<=a为0，x>=b为1，中点(a+b)/2为0.5"""
    x = np.asarray(x, dtype=np.float64)
    if b <= a:
        return np.where(x >= b, 1.0, 0.0)
    m = (a + b) / 2.0
    t = (x - a) / (b - a)
    out = np.where(x <= m, 2.0 * t ** 2, 1.0 - 2.0 * (1.0 - t) ** 2)
    return np.clip(np.where(x <= a, 0.0, np.where(x >= b, 1.0, out)), 0.0, 1.0)


def z_membership(x, a, b):
    """Z型隶属函数，为S型的补"""
    return 1.0 - s_membership(x, a, b)


def pi_membership(x, low, high, shoulder):
    """平顶的Π型隶属函数，[low, high]内为1，两侧shoulder宽度内线性下降到0"""
    x = np.asarray(x, dtype=np.float64)
    if shoulder <= 0:
        return np.where((x >= low) & (x <= high), 1.0, 0.0)
    rise = np.clip((x - (low - shoulder)) / shoulder, 0.0, 1.0)
    fall = np.clip(((high + shoulder) - x) / shoulder, 0.0, 1.0)
    return np.minimum(rise, fall)


def triangle_membership(x, center, half_width):
    x = np.asarray(x, dtype=np.float64)
    return np.clip(1.0 - np.abs(x - center) / half_width, 0.0, 1.0)


@dataclass(frozen=True)
class StraightnessConfig:
    """angle_threshold_deg: 判定为直的最大偏转角；scales: 步长s的集合"""
    angle_threshold_deg: float = 15.0
    scales: Tuple[int, ...] = (1, 2, 4, 8, 16, 32)

    def __post_init__(self):
        scales = tuple(int(s) for s in self.scales)
        object.__setattr__(self, 'scales', scales)
        if self.angle_threshold_deg <= 0:
            raise ValueError('直线度角度阈值必须大于0，当前值为: %s' % self.angle_threshold_deg)
        if len(scales) == 0 or scales[0] <= 0:
            raise ValueError('直线度的步长必须为正数: %s' % (scales,))
        if any(b <= a for a, b in zip(scales[:-1], scales[1:])):
            raise ValueError('直线度的步长必须严格递增: %s' % (scales,))

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class FuzzyRectConfig:
    """模糊规则矩形度的参数，角度单位为度，距离单位为像素"""
    right_angle_band: Tuple[float, float] = (60.0, 120.0)
    band_shoulder_deg: float = 10.0
    separation_min: float = 3.0
    max_obtuse_count: int = 2
    max_acute_count: int = 2
    target_vertex_count: int = 4
    # 远大于/远小于90度的S/Z函数，0.5点分别在135和45度
    obtuse_range: Tuple[float, float] = (125.0, 145.0)
    acute_range: Tuple[float, float] = (35.0, 55.0)
    count_half_width: float = 2.0
    excess_count_span: float = 2.0
    notes: Tuple[str, ...] = field(default=('separation_min is in pixels',))

    def __post_init__(self):
        low, high = self.right_angle_band
        if not low < 90.0 < high:
            raise ValueError('直角区间必须包含90度: %s' % (self.right_angle_band,))
        if self.separation_min < 0:
            raise ValueError('顶点最小间距不能小于0: %s' % self.separation_min)
        if self.count_half_width <= 0 or self.excess_count_span <= 0:
            raise ValueError('计数隶属函数的宽度必须大于0')

    def right_angle(self, angles):
        low, high = self.right_angle_band
        return pi_membership(angles, low, high, self.band_shoulder_deg)

    def obtuse(self, angles):
        return s_membership(angles, *self.obtuse_range)

    def acute(self, angles):
        return z_membership(angles, *self.acute_range)

    def separated(self, distances):
        return s_membership(distances, self.separation_min / 2.0, self.separation_min)

    def to_dict(self):
        return asdict(self)
