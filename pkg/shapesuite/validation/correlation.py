"""Spearman rank and Pearson product-moment correlation."""
import numpy as np
from scipy import stats

SRCC_MODERATE = 0.4


def _pair(x, y, min_count):
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if len(x) != len(y):
        raise ValueError('两个变量的样本数量不一致: %d != %d' % (len(x), len(y)))
    if len(x) < min_count:
        raise ValueError('至少需要%d个样本，当前为: %d' % (min_count, len(x)))
    return x, y


def pearson_cc(x, y):
    """Pearson相关系数，方差为0时返回NaN"""
    x, y = _pair(x, y, 2)
    zx = x - x.mean()
    zy = y - y.mean()
    denom = float(np.sqrt(np.dot(zx, zx) * np.dot(zy, zy)))
    if denom == 0.0:
        return float('nan')
    return float(np.clip(np.dot(zx, zy) / denom, -1.0, 1.0))


def spearman_rcc(x, y):
    """Spearman秩相关系数，相同取值使用平均秩

    没有相同取值时用整数秩差公式精确计算，严格单调的数据得到精确的±1。

    :return: [-1, 1]内的系数，秩方差为0时返回NaN
    :rtype: float
    """
    x, y = _pair(x, y, 3)
    rank_x = stats.rankdata(x, method='average')
    rank_y = stats.rankdata(y, method='average')
    n = len(x)
    if len(np.unique(x)) == n and len(np.unique(y)) == n:
        d = (rank_x - rank_y).astype(np.int64)
        return 1.0 - 6 * int(np.dot(d, d)) / (n * (n * n - 1))
    return pearson_cc(rank_x, rank_y)


def srcc_band(srcc, strong=0.8):
    """按|SRCC|分级：poor < 0.4 <= moderate < strong <= strong"""
    if not np.isfinite(srcc):
        return 'undefined'
    value = abs(srcc)
    if value >= strong:
        return 'strong'
    if value >= SRCC_MODERATE:
        return 'moderate'
    return 'poor'
