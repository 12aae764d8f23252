"""Three-level minimum-dependence validation of a feature set.

Every feature pair goes through: (i) chi-square independence of the equiprobably quantized
features, (ii) Spearman rank correlation, (iii) search for a locally non-monotone triple.
A pair is a causal risk only when it is dependent, strongly rank correlated and no triple
is found. The report never claims that a pair is causally unrelated, only that no
evidence of a causal relationship was found at any level.
"""
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from tqdm import tqdm

from shapesuite.utils.logger import setup_logger
from shapesuite.utils.utils import num_threads
from shapesuite.validation.correlation import pearson_cc, spearman_rcc, srcc_band
from shapesuite.validation.independence import contingency_chi_square, cramers_v
from shapesuite.validation.monotonicity import DEFAULT_MAX_TRIPLES, find_nonmonotone_triple
from shapesuite.validation.quantize import bin_count, quantize_equiprobable

logger = setup_logger(__name__)

SCHEMA_VERSION = '1.0'

VERDICT_INDEPENDENT = 'independent'
VERDICT_NONMONOTONE = 'dependent-nonmonotone'
VERDICT_LOCAL_NONMONOTONE = 'dependent-monotone-global-nonmonotone-local'
VERDICT_CAUSAL_RISK = 'causal-risk'


class SampleMatrix(object):
    """N samples x F features, all values finite.

    :param values: N x F array of reals.
    :type values: ndarray
    :param names: Feature names, one per column.
    :type names: list
    """

    def __init__(self, values, names):
        values = np.array(values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError('样本矩阵必须是二维的，当前维度为: %d' % values.ndim)
        names = tuple(str(name) for name in names)
        if len(names) != values.shape[1]:
            raise ValueError('特征名数量%d与列数%d不一致' % (len(names), values.shape[1]))
        if len(set(names)) != len(names):
            raise ValueError('特征名不能重复: %s' % (names,))
        if values.shape[0] < 2:
            raise ValueError('样本数量必须大于等于2，当前为: %d' % values.shape[0])
        if not np.all(np.isfinite(values)):
            raise ValueError('样本矩阵中存在NaN或无穷大')
        self._values = values
        self._values.setflags(write=False)
        self._names = names

    def __str__(self):
        return "%s: samples=%d, features=%s" % (type(self), self.n, ','.join(self._names))

    @property
    def values(self):
        return self._values

    @property
    def names(self):
        return self._names

    @property
    def n(self):
        return self._values.shape[0]

    @property
    def f(self):
        return self._values.shape[1]

    def column(self, name):
        return self._values[:, self._names.index(name)]

    def take(self, indices):
        """选取部分样本组成新的样本矩阵"""
        return SampleMatrix(self._values[np.asarray(indices, dtype=np.int64)], self._names)


@dataclass(frozen=True)
class PairwiseReport:
    features: Tuple[str, str]
    p_value: float
    chi2: float
    df: int
    min_expected: float
    independent_at_alpha: bool
    cvi: float
    srcc: float
    srcc_band: str
    pcc: float
    witness: Optional[Tuple[int, int, int]]
    witness_condition: Optional[str]
    verdict: str
    flags: Tuple[str, ...] = field(default=())

    def to_dict(self):
        return {'features': list(self.features),
                'p_value': self.p_value,
                'chi2': self.chi2,
                'df': self.df,
                'min_expected': self.min_expected,
                'cvi': self.cvi,
                'srcc': self.srcc,
                'srcc_band': self.srcc_band,
                'pcc': self.pcc,
                'witness_indices': list(self.witness) if self.witness is not None else None,
                'witness_condition': self.witness_condition,
                'verdict': self.verdict,
                'flags': list(self.flags)}


@dataclass(frozen=True)
class ValidationReport:
    pairs: Tuple[PairwiseReport, ...]
    alpha: float
    srcc_strong: float
    k: int
    n: int
    features: Tuple[str, ...]
    seed: Optional[int] = None
    config: dict = field(default_factory=dict)

    @property
    def md_accepted(self):
        """没有任何一对特征存在因果风险时接受该特征集"""
        return all(pair.verdict != VERDICT_CAUSAL_RISK for pair in self.pairs)

    def causal_risks(self):
        return [pair for pair in self.pairs if pair.verdict == VERDICT_CAUSAL_RISK]

    def to_dict(self):
        return {'schema_version': SCHEMA_VERSION,
                'md_accepted': self.md_accepted,
                'alpha': self.alpha,
                'srcc_strong': self.srcc_strong,
                'k': self.k,
                'N': self.n,
                'seed': self.seed,
                'config': dict(self.config),
                'features': list(self.features),
                'pairs': [pair.to_dict() for pair in self.pairs]}


def evaluate_pair(x, y, qx, qy, names, alpha=0.05, srcc_strong=0.8, max_triples=DEFAULT_MAX_TRIPLES):
    """对一对特征依次做三个层次的检验

    :param x: 第一个特征的原始值
    :param y: 第二个特征的原始值
    :param qx: 第一个特征的量化结果
    :param qy: 第二个特征的量化结果
    :param names: 两个特征的名称
    :rtype: PairwiseReport
    """
    flags = set()
    table = contingency_chi_square(qx, qy)
    flags.update(table.flags)
    flags.update(qx.flags)
    flags.update(qy.flags)
    cvi = cramers_v(table)
    if not np.isfinite(cvi):
        flags.add('cvi_undefined')
    srcc = spearman_rcc(x, y)
    if not np.isfinite(srcc):
        flags.add('srcc_undefined')
    pcc = pearson_cc(x, y)
    if not np.isfinite(pcc):
        flags.add('pcc_undefined')
    independent = table.p_value >= alpha
    witness = None
    if independent:
        verdict = VERDICT_INDEPENDENT
    elif not np.isfinite(srcc) or abs(srcc) < srcc_strong:
        verdict = VERDICT_NONMONOTONE
    else:
        witness = find_nonmonotone_triple(x, y, max_triples=max_triples)
        if witness.capped:
            flags.add('witness_search_capped')
        verdict = VERDICT_LOCAL_NONMONOTONE if witness.found else VERDICT_CAUSAL_RISK
    return PairwiseReport(features=tuple(names),
                          p_value=table.p_value,
                          chi2=table.chi2,
                          df=table.df,
                          min_expected=table.min_expected,
                          independent_at_alpha=bool(independent),
                          cvi=cvi,
                          srcc=srcc,
                          srcc_band=srcc_band(srcc, srcc_strong),
                          pcc=pcc,
                          witness=witness.indices if witness is not None else None,
                          witness_condition=witness.condition if witness is not None else None,
                          verdict=verdict,
                          flags=tuple(sorted(flags)))


def validate_feature_set(m, alpha=0.05, srcc_strong=0.8, max_triples=DEFAULT_MAX_TRIPLES, threads=None,
                         seed=None, config=None):
    """对特征集的所有特征对做最小依赖验证

    :param m: 样本矩阵
    :type m: SampleMatrix
    :param alpha: 卡方检验的显著性水平
    :type alpha: float
    :param srcc_strong: 判定为强秩相关的|SRCC|下限
    :type srcc_strong: float
    :param max_triples: 非单调三元组搜索的上限
    :type max_triples: int
    :param threads: 并行计算特征对的线程数，受SHAPESUITE_THREADS限制
    :type threads: int
    :param seed: 记录在报告中的随机种子
    :param config: 记录在报告中的配置
    :return: 验证报告，特征对的顺序与特征列的组合顺序一致
    :rtype: ValidationReport
    """
    if not isinstance(m, SampleMatrix):
        raise TypeError('m必须是SampleMatrix类型，当前类型为: %s' % type(m))
    if m.f < 2:
        raise ValueError('至少需要2个特征，当前为: %d' % m.f)
    if not 0.0 < alpha < 1.0:
        raise ValueError('alpha必须在(0, 1)之间，当前值为: %s' % alpha)
    if not 0.0 < srcc_strong <= 1.0:
        raise ValueError('srcc_strong必须在(0, 1]之间，当前值为: %s' % srcc_strong)
    # 秩相关和非单调三元组都需要至少3个样本
    if m.n < 3:
        raise ValueError('验证至少需要3个样本，当前为: %d' % m.n)
    k = bin_count(m.n)
    quantized = [quantize_equiprobable(m.values[:, i], k) for i in range(m.f)]
    pairs = list(itertools.combinations(range(m.f), 2))

    def run(pair):
        i, j = pair
        return evaluate_pair(m.values[:, i], m.values[:, j], quantized[i], quantized[j],
                             (m.names[i], m.names[j]), alpha=alpha, srcc_strong=srcc_strong,
                             max_triples=max_triples)

    with ThreadPoolExecutor(max_workers=num_threads(threads)) as executor:
        reports = list(tqdm(executor.map(run, pairs), total=len(pairs), desc='验证特征对'))
    low_expected = sum('low_expected_count' in r.flags for r in reports)
    if low_expected:
        logger.warning('%d/%d个列联表的最小期望频数小于5，卡方检验的近似可能不可靠', low_expected, len(reports))
    report = ValidationReport(pairs=tuple(reports), alpha=float(alpha), srcc_strong=float(srcc_strong), k=k,
                              n=m.n, features=m.names, seed=seed, config=dict(config or {}))
    logger.info('特征数: %d, 样本数: %d, k=%d, 因果风险的特征对: %d, 最小依赖: %s',
                m.f, m.n, k, len(report.causal_risks()), '接受' if report.md_accepted else '拒绝')
    return report
