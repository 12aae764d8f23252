"""Search for a sample triple showing that a globally monotone pair is locally non-monotone."""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from shapesuite.utils.logger import setup_logger

logger = setup_logger(__name__)

DEFAULT_MAX_TRIPLES = 10 ** 6


@dataclass(frozen=True)
class MonotonicityWitness:
    """First triple (R, E1, E2) found in lexicographic index order, if any."""
    indices: Optional[Tuple[int, int, int]]
    condition: Optional[str]
    examined: int
    capped: bool

    @property
    def found(self):
        return self.indices is not None


def condition_a(x, y, r, e1, e2):
    """E1在R的右上，E2在R的右下或左上"""
    return (x[e1] > x[r] and y[e1] >= y[r]
            and ((x[e2] >= x[r] and y[e2] < y[r]) or (x[e2] <= x[r] and y[e2] > y[r])))


def condition_b(x, y, r, e1, e2):
    """E1在R的左下，E2在R的左上或右下"""
    return (x[e1] < x[r] and y[e1] <= y[r]
            and ((x[e2] <= x[r] and y[e2] > y[r]) or (x[e2] > x[r] and y[e2] <= y[r])))


def _first(candidates):
    hits = np.flatnonzero(candidates)
    return int(hits[0]) if len(hits) else None


def find_nonmonotone_triple(x, y, max_triples=DEFAULT_MAX_TRIPLES):
    """按(R, E1, E2)的字典序搜索第一个满足条件A或条件B的三元组

    对每个R一次向量化地检查所有(E1, E2)，已检查的有序三元组数量超过max_triples时停止并标记。

    :param x: 第一个特征
    :param y: 第二个特征
    :param max_triples: 最多检查的有序三元组数量
    :type max_triples: int
    :rtype: MonotonicityWitness
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if len(x) != len(y):
        raise ValueError('两个变量的样本数量不一致: %d != %d' % (len(x), len(y)))
    n = len(x)
    if n < 3:
        raise ValueError('至少需要3个样本，当前为: %d' % n)
    if max_triples < 1:
        raise ValueError('max_triples必须大于0，当前值为: %s' % max_triples)
    per_r = (n - 1) * (n - 2)
    examined = 0
    for r in range(n):
        if examined + per_r > max_triples and examined > 0:
            logger.warning('已检查%d个三元组，达到上限%d，剩余%d个R未搜索', examined, max_triples, n - r)
            return MonotonicityWitness(indices=None, condition=None, examined=examined, capped=True)
        xr, yr = x[r], y[r]
        not_r = np.arange(n) != r
        found = []
        e1 = _first(not_r & (x > xr) & (y >= yr))
        e2 = _first(not_r & (((x >= xr) & (y < yr)) | ((x <= xr) & (y > yr))))
        if e1 is not None and e2 is not None:
            found.append((e1, e2, 'A'))
        e1 = _first(not_r & (x < xr) & (y <= yr))
        e2 = _first(not_r & (((x <= xr) & (y > yr)) | ((x > xr) & (y <= yr))))
        if e1 is not None and e2 is not None:
            found.append((e1, e2, 'B'))
        examined += per_r
        if found:
            e1, e2, condition = min(found)
            return MonotonicityWitness(indices=(r, e1, e2), condition=condition, examined=examined, capped=False)
    return MonotonicityWitness(indices=None, condition=None, examined=examined, capped=False)
