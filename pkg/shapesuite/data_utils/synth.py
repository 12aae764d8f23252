"""Synthetic shape sets with known ground truth for checking the descriptors."""
import math
from dataclasses import dataclass, field
from typing import List

import numpy as np
from skimage import draw

from shapesuite.data_utils.image import GrayImage, LabelImage
from shapesuite.utils.utils import dump_json

SHAPE_SETS = ('squares', 'bars', 'donuts', 'shapes', 'rotrects', 'disks', 'suite')
# 形状之间和图像边缘的间隔
_GAP = 2
_BACKGROUND_GRAY = 40


@dataclass
class SyntheticShape:
    family: str
    name: str
    mask: np.ndarray
    hole_count: int = 0
    truth: dict = field(default_factory=dict)


@dataclass
class SyntheticSet:
    name: str
    size: int
    labels: LabelImage
    gray: GrayImage
    truth: List[dict]


def _rect(height, width):
    return np.ones((height, width), dtype=bool)


def _rect_truth(height, width):
    # 轴对齐矩形的面积和4邻接周长都是精确的
    return {'roundness': min(1.0, 4.0 * math.sqrt(height * width) / (2.0 * (height + width)))}


def _squares(size):
    shapes = []
    side = 1
    while side <= max(1, size // 2):
        shapes.append(SyntheticShape('squares', 'square_%d' % side, _rect(side, side), truth={'roundness': 1.0}))
        side *= 2
    return shapes


def _bars(size):
    length = max(4, size - 2)
    return [SyntheticShape('bars', 'bar_%dx%d' % (w, length), _rect(w, length), truth=_rect_truth(w, length))
            for w in (1, 3, 5)]


def _disk(radius):
    mask = np.zeros((2 * radius + 1, 2 * radius + 1), dtype=bool)
    rr, cc = draw.disk((radius, radius), radius + 0.5, shape=mask.shape)
    mask[rr, cc] = True
    return mask


def _donuts(size):
    square = _rect(3, 3)
    square[1, 1] = False
    ring_side = max(6, size // 2)
    ring = _rect(ring_side, ring_side)
    ring[ring_side // 4:ring_side - ring_side // 4, ring_side // 4:ring_side - ring_side // 4] = False
    outer = max(4, size // 4)
    annulus = _disk(outer)
    inner = _disk(outer // 2)
    offset = outer - outer // 2
    annulus[offset:offset + inner.shape[0], offset:offset + inner.shape[1]] &= ~inner
    return [SyntheticShape('donuts', 'square_donut_3', square, hole_count=1),
            SyntheticShape('donuts', 'square_ring_%d' % ring_side, ring, hole_count=1),
            SyntheticShape('donuts', 'annulus_%d_%d' % (outer, outer // 2), annulus, hole_count=1)]


def _letter_shapes(size):
    side = max(9, size // 2 * 2 + 1)
    arm = max(3, side // 4)
    mid = (side - arm) // 2
    l_shape = np.zeros((side, side), dtype=bool)
    l_shape[:, :arm] = True
    l_shape[side - arm:, :] = True
    t_shape = np.zeros((side, side), dtype=bool)
    t_shape[:arm, :] = True
    t_shape[:, mid:mid + arm] = True
    cross = np.zeros((side, side), dtype=bool)
    cross[mid:mid + arm, :] = True
    cross[:, mid:mid + arm] = True
    return [SyntheticShape('shapes', 'L_%d' % side, l_shape),
            SyntheticShape('shapes', 'T_%d' % side, t_shape),
            SyntheticShape('shapes', 'cross_%d' % side, cross)]


def _rotated_rect(length, width, angle_deg):
    """屏幕坐标下长边方向为angle_deg（逆时针为正）的实心矩形"""
    theta = math.radians(angle_deg)
    along = np.array([-math.sin(theta), math.cos(theta)])
    across = np.array([math.cos(theta), math.sin(theta)])
    extent = int(math.ceil(math.hypot(length, width))) + 2
    center = np.array([extent / 2.0, extent / 2.0])
    corners = np.array([center + sa * length / 2.0 * along + sb * width / 2.0 * across
                        for sa, sb in ((1, 1), (1, -1), (-1, -1), (-1, 1))])
    mask = np.zeros((extent + 1, extent + 1), dtype=bool)
    rr, cc = draw.polygon(corners[:, 0], corners[:, 1], shape=mask.shape)
    mask[rr, cc] = True
    return mask


def _rotrects(size):
    length = max(12, size)
    width = max(3, length // 3)
    return [SyntheticShape('rotrects', 'rect_%03d' % angle, _rotated_rect(length, width, angle),
                           truth={'mer_angle_deg': float(angle)})
            for angle in range(0, 180, 15)]


def _disks(size):
    radii = [r for r in (2, 4, 8, 16) if 2 * r + 1 <= max(5, size)]
    return [SyntheticShape('disks', 'disk_%d' % r, _disk(r)) for r in radii]


_FAMILIES = {'squares': _squares, 'bars': _bars, 'donuts': _donuts, 'shapes': _letter_shapes,
             'rotrects': _rotrects, 'disks': _disks}


def _layout_row(shapes):
    height = max(s.mask.shape[0] for s in shapes) + 2 * _GAP
    width = sum(s.mask.shape[1] for s in shapes) + _GAP * (len(shapes) + 1)
    return height, width


def make_shape_set(name, size=32):
    """生成合成形状集，每个形状一个标签，从1开始编号，背景为0

    :param name: 形状集名称，见SHAPE_SETS，suite为所有形状集的合并
    :type name: str
    :param size: 形状的基准大小（像素）
    :type size: int
    :rtype: SyntheticSet
    :raises ValueError: 未知的形状集
    """
    if name not in SHAPE_SETS:
        raise ValueError('未知的形状集: %s，可选: %s' % (name, ','.join(SHAPE_SETS)))
    if size < 4:
        raise ValueError('size必须大于等于4，当前值为: %s' % size)
    names = [n for n in SHAPE_SETS if n != 'suite'] if name == 'suite' else [name]
    rows = [_FAMILIES[n](size) for n in names]
    sizes = [_layout_row(row) for row in rows]
    labels = np.zeros((sum(h for h, _ in sizes), max(w for _, w in sizes)), dtype=np.int64)
    gray = np.full(labels.shape, _BACKGROUND_GRAY, dtype=np.int64)
    truth = []
    label = 0
    top = 0
    for row, (row_height, _) in zip(rows, sizes):
        left = _GAP
        for shape in row:
            label += 1
            h, w = shape.mask.shape
            r0 = top + _GAP
            labels[r0:r0 + h, left:left + w][shape.mask] = label
            gray[r0:r0 + h, left:left + w][shape.mask] = 120 + 8 * (label % 16)
            entry = {'label': label, 'family': shape.family, 'name': shape.name,
                     'area': int(np.count_nonzero(shape.mask)), 'hole_count': shape.hole_count}
            entry.update(shape.truth)
            truth.append(entry)
            left += w + _GAP
        top += row_height
    return SyntheticSet(name=name, size=size, labels=LabelImage(labels), gray=GrayImage(gray), truth=truth)


def write_shape_set(synthetic, out_prefix):
    """保存标签图、灰度图和真值文件

    :return: (标签图路径, 灰度图路径, 真值文件路径)
    :rtype: tuple
    """
    labels_path = out_prefix + '_labels.png'
    gray_path = out_prefix + '_gray.png'
    truth_path = out_prefix + '.truth.json'
    synthetic.labels.to_file(labels_path)
    synthetic.gray.to_file(gray_path)
    dump_json({'set': synthetic.name, 'size': synthetic.size, 'shapes': synthetic.truth}, truth_path)
    return labels_path, gray_path, truth_path
