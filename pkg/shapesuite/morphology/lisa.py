"""Contains spatial weights and the global / local Moran's I and Geary's C indicators."""
import numpy as np
from scipy import sparse

from shapesuite.utils.logger import setup_logger

logger = setup_logger(__name__)


class SpatialWeights(object):
    """Symmetric non-negative weights between N spatial units with an empty diagonal.

    :param matrix: N x N weight matrix.
    :type matrix: scipy.sparse matrix or ndarray
    """

    def __init__(self, matrix):
        matrix = sparse.csr_matrix(matrix, dtype=np.float64)
        if matrix.shape[0] != matrix.shape[1]:
            raise ValueError('权重矩阵必须是方阵，当前大小为: %s' % (matrix.shape,))
        if matrix.nnz and matrix.data.min() < 0:
            raise ValueError('空间权重不能为负数')
        if matrix.diagonal().any():
            raise ValueError('空间权重的对角线必须为0')
        if (abs(matrix - matrix.T) > 1e-12).nnz:
            raise ValueError('空间权重矩阵必须对称')
        self.matrix = matrix

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def w_sum(self):
        return float(self.matrix.sum())

    @classmethod
    def from_grid(cls, shape, connectivity=4):
        """规则网格上的二值邻接权重，4为rook邻接，8为queen邻接"""
        if connectivity not in (4, 8):
            raise ValueError('连通性只能是4或8，当前值为: %s' % connectivity)
        rows, cols = shape
        index = np.arange(rows * cols).reshape(rows, cols)
        offsets = [(0, 1), (1, 0)] if connectivity == 4 else [(0, 1), (1, 0), (1, 1), (1, -1)]
        src, dst = [], []
        for dr, dc in offsets:
            r0, r1 = max(0, -dr), rows - max(0, dr)
            c0, c1 = max(0, -dc), cols - max(0, dc)
            src.append(index[r0:r1, c0:c1].ravel())
            dst.append(index[r0 + dr:r1 + dr, c0 + dc:c1 + dc].ravel())
        return cls._from_pairs(np.concatenate(src), np.concatenate(dst), rows * cols)

    @classmethod
    def from_segments(cls, segment_ids, n):
        """共享4邻接边的分割块之间权重为1，segment_ids中小于0的像素不参与

        :param segment_ids: 每个像素所属分割块的编号
        :param n: 分割块数量
        """
        segment_ids = np.asarray(segment_ids)
        pairs = [(segment_ids[:, :-1], segment_ids[:, 1:]), (segment_ids[:-1, :], segment_ids[1:, :])]
        src, dst = [], []
        for a, b in pairs:
            valid = (a != b) & (a >= 0) & (b >= 0)
            src.append(a[valid])
            dst.append(b[valid])
        return cls._from_pairs(np.concatenate(src), np.concatenate(dst), n)

    @classmethod
    def _from_pairs(cls, src, dst, n):
        data = np.ones(len(src) * 2)
        matrix = sparse.coo_matrix((data, (np.concatenate([src, dst]), np.concatenate([dst, src]))),
                                   shape=(n, n)).tocsr()
        matrix.data[:] = 1.0
        return cls(matrix)


def _centered(values, w):
    values = np.asarray(values, dtype=np.float64).ravel()
    if values.shape[0] != w.n:
        raise ValueError('数值个数%d与空间单元个数%d不一致' % (values.shape[0], w.n))
    if values.shape[0] < 2:
        raise ValueError('至少需要2个空间单元')
    z = values - values.mean()
    ss = float(np.dot(z, z))
    if ss == 0.0:
        raise ValueError('数值方差为0，空间自相关无定义')
    if w.w_sum == 0.0:
        raise ValueError('空间权重之和为0，空间自相关无定义')
    return values, z, ss


def morans_i(values, w):
    """全局和局部Moran's I

    :param values: 每个空间单元的数值
    :param w: 空间权重
    :type w: SpatialWeights
    :return: (全局值, 每个单元的局部值)
    :rtype: tuple
    :raises ValueError: 方差为0
    """
    values, z, ss = _centered(values, w)
    n = len(values)
    lag = w.matrix @ z
    global_i = n / w.w_sum * float(np.dot(z, lag)) / ss
    local = z * lag / (ss / n)
    return global_i, local


def gearys_c(values, w):
    """全局和局部Geary's C，局部值为加权平方差除以方差"""
    values, z, ss = _centered(values, w)
    n = len(values)
    coo = w.matrix.tocoo()
    squared = coo.data * (values[coo.row] - values[coo.col]) ** 2
    global_c = (n - 1) * float(squared.sum()) / (2.0 * w.w_sum * ss)
    local = np.bincount(coo.row, weights=squared, minlength=n) / (ss / n)
    return global_c, local


def reversed_gearys_c(global_c):
    """Reversed Geary's C = 1 - min(C, 2)，范围[-1, 1]，与Moran's I同向"""
    return 1.0 - min(float(global_c), 2.0)


def moran_geary_agree(values, w):
    """检查Moran's I与1-C的符号是否一致，不一致时只记录日志"""
    global_i, _ = morans_i(values, w)
    global_c, _ = gearys_c(values, w)
    agree = np.sign(global_i) == np.sign(1.0 - global_c)
    if not agree:
        logger.warning('Moran\'s I=%.4f与Geary\'s C=%.4f的方向不一致', global_i, global_c)
    return bool(agree)
