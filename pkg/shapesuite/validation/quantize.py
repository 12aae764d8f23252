"""Equiprobable quantization of a real-valued feature into k levels."""
import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np


@dataclass(frozen=True)
class QuantizedVariable:
    k: int
    cut_points: np.ndarray
    codes: np.ndarray
    occupancy: np.ndarray
    flags: Tuple[str, ...] = field(default=())

    @property
    def n(self):
        return len(self.codes)

    @property
    def occupancy_slack(self):
        """最多和最少的非空级别之间的样本数差，由相同取值造成"""
        occupied = self.occupancy[self.occupancy > 0]
        return int(occupied.max() - occupied.min())

    @property
    def degenerate(self):
        return 'quantization_degenerate' in self.flags


def bin_count(n):
    """量化级别数 k = round(2 * N^0.4)，最小为2，最大为N

    :param n: 样本数量
    :type n: int
    :rtype: int
    """
    if n < 2:
        raise ValueError('样本数量必须大于等于2，当前值为: %s' % n)
    return min(n, max(2, int(math.floor(2.0 * n ** 0.4 + 0.5))))


def quantize_equiprobable(values, k):
    """按经验分位数把数值量化为k个近似等概率的级别

    第i个分割点取排序后第ceil(i*N/k)个值，等于分割点的样本归入较低的级别。

    :param values: 一维数值
    :param k: 级别数
    :type k: int
    :return: 量化结果
    :rtype: QuantizedVariable
    :raises ValueError: k小于2或k大于样本数
    """
    values = np.asarray(values, dtype=np.float64).ravel()
    n = len(values)
    if k < 2:
        raise ValueError('量化级别数必须大于等于2，当前值为: %s' % k)
    if k > n:
        raise ValueError('量化级别数%d大于样本数量%d' % (k, n))
    if not np.all(np.isfinite(values)):
        raise ValueError('量化的数值中存在NaN或无穷大')
    ordered = np.sort(values, kind='mergesort')
    positions = np.array([-(-i * n // k) - 1 for i in range(1, k)], dtype=np.int64)
    cut_points = ordered[positions]
    codes = np.searchsorted(cut_points, values, side='left').astype(np.int64)
    occupancy = np.bincount(codes, minlength=k)
    flags = ('quantization_degenerate',) if np.count_nonzero(occupancy) < 2 else ()
    return QuantizedVariable(k=int(k), cut_points=cut_points, codes=codes, occupancy=occupancy, flags=flags)
