"""Contains grayscale morphology by reconstruction and the differential morphological profile."""
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import ndimage

from shapesuite.data_utils.image import GrayImage
from shapesuite.data_utils.region import Region
from shapesuite.geometry.kernels import downhill_reconstruct

# 腐蚀时图像外视为+∞，膨胀时视为-∞，取int32范围使边界值在float和int64之间精确转换
_POS_INF = 2 ** 31 - 1
_NEG_INF = -2 ** 31


def _as_array(img):
    if isinstance(img, GrayImage):
        return img.intensities
    img = np.asarray(img)
    if img.ndim != 2:
        raise ValueError('图像必须是二维的，当前维度为: %d' % img.ndim)
    if not np.issubdtype(img.dtype, np.integer):
        raise TypeError('图像必须是整数类型，当前类型为: %s' % img.dtype)
    return img.astype(np.int64)


def erode_square(img, half_size):
    """正方形结构元素的灰度腐蚀，分解为水平和竖直两次一维最小值滤波

    :param img: 灰度图像
    :param half_size: 结构元素的半宽，窗口为(2*half_size+1)^2
    :return: 腐蚀后的图像
    :rtype: ndarray
    """
    if half_size < 0:
        raise ValueError('half_size不能小于0，当前值为: %s' % half_size)
    img = _as_array(img)
    if half_size == 0:
        return img.copy()
    size = 2 * half_size + 1
    out = ndimage.minimum_filter1d(img, size, axis=0, mode='constant', cval=_POS_INF)
    return ndimage.minimum_filter1d(out, size, axis=1, mode='constant', cval=_POS_INF)


def dilate_square(img, half_size):
    """正方形结构元素的灰度膨胀"""
    if half_size < 0:
        raise ValueError('half_size不能小于0，当前值为: %s' % half_size)
    img = _as_array(img)
    if half_size == 0:
        return img.copy()
    size = 2 * half_size + 1
    out = ndimage.maximum_filter1d(img, size, axis=0, mode='constant', cval=_NEG_INF)
    return ndimage.maximum_filter1d(out, size, axis=1, mode='constant', cval=_NEG_INF)


def reconstruct_by_dilation(marker, mask):
    """下坡滤波单遍计算膨胀重建（8连通）

    :param marker: 标记图像，必须处处不大于mask
    :param mask: 掩膜图像
    :return: 重建结果
    :rtype: ndarray
    :raises ValueError: marker大于mask或大小不一致
    """
    marker, mask = _as_array(marker), _as_array(mask)
    if marker.shape != mask.shape:
        raise ValueError('marker的大小%s和mask的大小%s不一致' % (marker.shape, mask.shape))
    if np.any(marker > mask):
        raise ValueError('膨胀重建要求marker处处不大于mask')
    offset = int(min(marker.min(), mask.min()))
    out = downhill_reconstruct(np.ascontiguousarray(marker - offset), np.ascontiguousarray(mask - offset))
    return out + offset


def reconstruct_by_erosion(marker, mask):
    """腐蚀重建，为膨胀重建的对偶

    :raises ValueError: marker小于mask或大小不一致
    """
    marker, mask = _as_array(marker), _as_array(mask)
    if marker.shape != mask.shape:
        raise ValueError('marker的大小%s和mask的大小%s不一致' % (marker.shape, mask.shape))
    if np.any(marker < mask):
        raise ValueError('腐蚀重建要求marker处处不小于mask')
    ceiling = int(max(marker.max(), mask.max()))
    return ceiling - reconstruct_by_dilation(ceiling - marker, ceiling - mask)


def _half_size(scale):
    if scale < 0:
        raise ValueError('结构元素尺度不能小于0，当前值为: %s' % scale)
    return max(0, (int(scale) - 1) // 2)


def opening_by_reconstruction(img, scale):
    """重建开运算，scale为正方形结构元素的边长，0和1为恒等"""
    img = _as_array(img)
    half_size = _half_size(scale)
    if half_size == 0:
        return img.copy()
    return reconstruct_by_dilation(erode_square(img, half_size), img)


def closing_by_reconstruction(img, scale):
    """重建闭运算"""
    img = _as_array(img)
    half_size = _half_size(scale)
    if half_size == 0:
        return img.copy()
    return reconstruct_by_erosion(dilate_square(img, half_size), img)


def profile_scales(depth):
    """尺度序列 0, 1, 3, 5, 9, ...，即λ_i = 2^(i-1)+1 (i>=2)"""
    if depth < 1:
        raise ValueError('DMP的深度必须大于等于1，当前值为: %s' % depth)
    return (0, 1) + tuple(2 ** (i - 1) + 1 for i in range(2, depth + 1))


@dataclass(frozen=True)
class MorphProfileStack:
    """Opening / closing profiles at scales[0..n] and their normalized derivatives at scales[1..n].

    Derivatives are kept as integer numerators over integer scale gaps so that comparisons stay exact.
    """
    scales: Tuple[int, ...]
    opening: np.ndarray
    closing: np.ndarray
    d_open_num: np.ndarray
    d_close_num: np.ndarray

    @property
    def gaps(self):
        return np.diff(np.asarray(self.scales, dtype=np.int64))

    @property
    def d_open(self):
        return self.d_open_num / self.gaps[:, None, None].astype(np.float64)

    @property
    def d_close(self):
        return self.d_close_num / self.gaps[:, None, None].astype(np.float64)


def dmp(img, n):
    """差分形态学剖面

    :param img: 灰度图像
    :param n: 剖面深度，尺度为λ_0到λ_n
    :type n: int
    :rtype: MorphProfileStack
    """
    img = _as_array(img)
    scales = profile_scales(n)
    opening = np.stack([opening_by_reconstruction(img, s) for s in scales])
    closing = np.stack([closing_by_reconstruction(img, s) for s in scales])
    return MorphProfileStack(scales=scales,
                             opening=opening,
                             closing=closing,
                             d_open_num=np.abs(np.diff(opening, axis=0)),
                             d_close_num=np.abs(np.diff(closing, axis=0)))


@dataclass(frozen=True)
class CharacteristicMap:
    """Signed per-pixel scale: +λ opening-dominant, -λ closing-dominant, 0 for a tie."""
    values: np.ndarray

    @property
    def shape(self):
        return self.values.shape

    def _pixels(self, region):
        if isinstance(region, Region):
            coords = region.coords
            return self.values[coords[:, 0], coords[:, 1]]
        region = np.asarray(region, dtype=bool)
        if region.shape != self.values.shape:
            raise ValueError('区域mask和特征图的大小不一致')
        return self.values[region]

    def segment_average(self, region):
        values = self._pixels(region)
        if len(values) == 0:
            raise ValueError('区域不能为空')
        return float(int(np.abs(values).sum())) / len(values)

    def mixed_sign(self, region):
        values = self._pixels(region)
        return bool(np.any(values > 0) and np.any(values < 0))


def _supremum(d_num, gaps, scales):
    """逐像素求导数最大的尺度，用整数交叉相乘比较，相等时取较小的尺度"""
    best_num = np.zeros(d_num.shape[1:], dtype=np.int64)
    best_gap = np.ones(d_num.shape[1:], dtype=np.int64)
    best_scale = np.zeros(d_num.shape[1:], dtype=np.int64)
    for i in range(d_num.shape[0]):
        better = d_num[i] * best_gap > best_num * gaps[i]
        best_num = np.where(better, d_num[i], best_num)
        best_gap = np.where(better, gaps[i], best_gap)
        best_scale = np.where(better, scales[i + 1], best_scale)
    return best_num, best_gap, best_scale


def multiscale_characteristic(stack):
    """多尺度特征Φ：开、闭剖面导数的上确界谁大取谁的尺度，开为正、闭为负，相等为0

    :param stack: 差分形态学剖面
    :type stack: MorphProfileStack
    :rtype: CharacteristicMap
    """
    gaps = stack.gaps
    open_num, open_gap, open_scale = _supremum(stack.d_open_num, gaps, stack.scales)
    close_num, close_gap, close_scale = _supremum(stack.d_close_num, gaps, stack.scales)
    lhs = open_num * close_gap
    rhs = close_num * open_gap
    values = np.where(lhs > rhs, open_scale, np.where(rhs > lhs, -close_scale, 0))
    return CharacteristicMap(values=values.astype(np.int64))


def segment_average_characteristic(cmap, region):
    """区域内|Φ|的平均值

    :param cmap: 多尺度特征图
    :type cmap: CharacteristicMap
    :param region: 区域或与特征图同样大小的mask
    :return: 平均尺度
    :rtype: float
    """
    return cmap.segment_average(region)
