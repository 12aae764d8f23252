import os

import numpy as np
import pandas as pd

from shapesuite.featurizer.shape_featurizer import DESCRIPTOR_COLUMNS
from shapesuite.utils.logger import setup_logger
from shapesuite.validation.validator import SampleMatrix

logger = setup_logger(__name__)

# 不参与验证的编号和文本列
_ID_COLUMNS = ('label', 'flags')


def _usable(frame, name):
    return pd.api.types.is_numeric_dtype(frame[name]) and frame[name].notna().any()


def select_features(frame, features=None):
    """确定参与验证的特征列

    默认使用表中存在且非空的七个描述子，不足2个时使用全部数值列（编号列除外）。

    :param frame: 特征表
    :type frame: pandas.DataFrame
    :param features: 指定的特征列名
    :type features: list|None
    :return: 特征列名列表
    :rtype: list
    """
    if features:
        missing = [name for name in features if name not in frame.columns]
        if missing:
            raise ValueError('特征表中不存在以下列: %s' % ','.join(missing))
        not_numeric = [name for name in features if not pd.api.types.is_numeric_dtype(frame[name])]
        if not_numeric:
            raise ValueError('以下列不是数值类型: %s' % ','.join(not_numeric))
        selected = list(dict.fromkeys(features))
    else:
        selected = [name for name in DESCRIPTOR_COLUMNS if name in frame.columns and _usable(frame, name)]
        if len(selected) < 2:
            selected = [name for name in frame.columns if name not in _ID_COLUMNS and _usable(frame, name)]
    if len(selected) < 2:
        raise ValueError('至少需要2个数值特征列，当前为: %s' % (selected,))
    return selected


def read_feature_table(csv_path, features=None):
    """读取特征CSV为样本矩阵，含有NaN或无穷大的行会被去掉并记录警告

    :param csv_path: 带表头的CSV文件路径
    :type csv_path: str
    :param features: 指定的特征列名，为None时自动选择
    :type features: list|None
    :rtype: SampleMatrix
    :raises IOError: 文件不存在
    :raises ValueError: 特征列不足2个或有效样本不足2个
    """
    if not os.path.exists(csv_path):
        raise IOError('特征表文件不存在: %s' % csv_path)
    frame = pd.read_csv(csv_path)
    selected = select_features(frame, features)
    values = frame[selected].to_numpy(dtype=np.float64)
    finite = np.all(np.isfinite(values), axis=1)
    dropped = int(np.count_nonzero(~finite))
    if dropped:
        logger.warning('去掉了%d/%d行含有缺失值或非有限值的样本', dropped, len(values))
    values = values[finite]
    if len(values) < 2:
        raise ValueError('有效样本数量不足2个: %s' % csv_path)
    return SampleMatrix(values, selected)


def decimate(matrix, factor=1.0, seed=0):
    """按抽样比例做简单随机抽样，不放回，保留的样本保持原来的顺序

    :param matrix: 样本矩阵
    :type matrix: SampleMatrix
    :param factor: 抽样比例，范围(0, 1]，例如0.1
    :type factor: float
    :param seed: 随机种子
    :type seed: int
    :rtype: SampleMatrix
    """
    if not 0.0 < factor <= 1.0:
        raise ValueError('抽样比例必须在(0, 1]之间，当前值为: %s' % factor)
    if factor == 1.0:
        return matrix
    size = max(2, int(round(matrix.n * factor)))
    if size >= matrix.n:
        return matrix
    rng = np.random.default_rng(seed)
    indices = np.sort(rng.choice(matrix.n, size=size, replace=False))
    return matrix.take(indices)
