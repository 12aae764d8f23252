"""Contains the contingency table chi-square test of independence and Cramer's V."""
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
import pandas as pd
from scipy import special, stats

# 期望频数低于该值时卡方近似不可靠
MIN_EXPECTED_COUNT = 5.0


@dataclass(frozen=True)
class ContingencyTable:
    counts: np.ndarray
    expected: np.ndarray
    chi2: float
    df: int
    p_value: float
    min_expected: float
    collapsed_rows: int = 0
    collapsed_cols: int = 0
    flags: Tuple[str, ...] = field(default=())

    @property
    def n(self):
        return int(self.counts.sum())

    @property
    def shape(self):
        return self.counts.shape


def chi2_p_value(chi2, df):
    """卡方分布的上尾概率，即正则化上不完全伽马函数Q(df/2, chi2/2)，自由度为0时返回1"""
    if df < 0 or chi2 < 0:
        raise ValueError('卡方值和自由度不能小于0: chi2=%s, df=%s' % (chi2, df))
    if df == 0:
        return 1.0
    return float(special.gammaincc(df / 2.0, chi2 / 2.0))


def contingency_chi_square(x, y):
    """两个量化变量的Pearson卡方独立性检验

    全为0的行和列在计算自由度之前去掉，p值为卡方分布的上尾概率，自由度为0时p值为1。

    :param x: 第一个量化变量
    :type x: QuantizedVariable
    :param y: 第二个量化变量
    :type y: QuantizedVariable
    :rtype: ContingencyTable
    :raises ValueError: 两个变量的样本数量不一致
    """
    if x.n != y.n:
        raise ValueError('两个变量的样本数量不一致: %d != %d' % (x.n, y.n))
    counts = pd.crosstab(x.codes, y.codes).to_numpy().astype(np.int64)
    collapsed_rows = x.k - counts.shape[0]
    collapsed_cols = y.k - counts.shape[1]
    rows, cols = counts.shape
    df = (rows - 1) * (cols - 1)
    expected = np.outer(counts.sum(axis=1), counts.sum(axis=0)) / float(counts.sum())
    flags = []
    if df == 0:
        chi2, p_value = 0.0, 1.0
        flags.append('chi2_no_df')
    else:
        chi2, _, _, expected = stats.chi2_contingency(counts, correction=False)
        chi2 = max(0.0, float(chi2))
        p_value = chi2_p_value(chi2, df)
    min_expected = float(expected.min())
    if min_expected < MIN_EXPECTED_COUNT:
        flags.append('low_expected_count')
    return ContingencyTable(counts=counts,
                            expected=expected,
                            chi2=chi2,
                            df=int(df),
                            p_value=min(1.0, max(0.0, p_value)),
                            min_expected=min_expected,
                            collapsed_rows=int(collapsed_rows),
                            collapsed_cols=int(collapsed_cols),
                            flags=tuple(flags))


def cramers_v(table, n=None):
    """Cramer's V = chi2 / (N * (min(R, C) - 1))，只有一行或一列时无定义，返回NaN

    :param table: 列联表
    :type table: ContingencyTable
    :param n: 样本数量，默认为列联表的总数
    :rtype: float
    """
    n = table.n if n is None else int(n)
    smaller = min(table.shape)
    if smaller < 2 or n <= 0:
        return float('nan')
    return float(min(1.0, max(0.0, table.chi2 / (n * (smaller - 1)))))
