"""Contains the Euclidean distance transform, the filtered Euclidean skeleton and
skeleton length / width measures."""
import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from shapesuite.data_utils.region import apply_pose, canonical_pose, find_holes, inverse_pose
from shapesuite.geometry.kernels import POPCOUNT, SIMPLE_LUT, guided_thinning, squared_edt

_NEIGHBORS_8 = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


@dataclass(frozen=True)
class DistanceField:
    """Squared Euclidean distance of every region pixel to the nearest non-region pixel."""
    squared: np.ndarray

    @property
    def distance(self):
        return np.sqrt(self.squared)

    def __getitem__(self, item):
        return math.sqrt(self.squared[item])


@dataclass(frozen=True)
class Skeleton:
    pixels: np.ndarray
    filter_param: float
    flags: Tuple[str, ...] = field(default=())

    @property
    def coords(self):
        return np.argwhere(self.pixels)

    def __len__(self):
        return int(np.count_nonzero(self.pixels))


@dataclass(frozen=True)
class SkeletonMetrics:
    l_total: int
    w_avg: float
    l_longest: int
    w_longest_avg: float
    flags: Tuple[str, ...] = field(default=())


def _as_mask(mask):
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 2 or not mask.any():
        raise ValueError('mask必须是非空的二维数组')
    return mask


def distance_transform(mask):
    """Meijster线性时间欧氏距离变换，图像外算作背景

    :param mask: 区域的二值图
    :type mask: ndarray
    :return: 精确的平方距离场，区域外为0
    :rtype: DistanceField
    """
    mask = _as_mask(mask)
    padded = np.pad(mask, 1, mode='constant', constant_values=False)
    squared = squared_edt(np.ascontiguousarray(padded))[1:-1, 1:-1]
    squared = np.ascontiguousarray(squared)
    squared.setflags(write=False)
    return DistanceField(squared=squared)


def medial_anchors(squared, mask, filter_param):
    """中轴锚点：距离场沿任意方向每单位步长的上升量都不超过cos(filter_param/2)

    filter_param为平分角下限（弧度），越大保留的分支越少。
    """
    dist = np.pad(np.sqrt(squared.astype(np.float64)), 1, mode='constant', constant_values=0.0)
    center = dist[1:-1, 1:-1]
    rows, cols = center.shape
    max_slope = np.full(center.shape, -np.inf)
    for dr, dc in _NEIGHBORS_8:
        neighbor = dist[1 + dr:1 + dr + rows, 1 + dc:1 + dc + cols]
        max_slope = np.maximum(max_slope, (neighbor - center) / math.hypot(dr, dc))
    threshold = math.cos(filter_param / 2.0)
    return mask & (max_slope <= threshold + 1e-12)


def _thin(mask, squared, filter_param):
    padded = np.pad(mask, 1, mode='constant', constant_values=False).astype(np.uint8)
    padded_sq = np.pad(squared, 1, mode='constant', constant_values=0)
    anchors = np.pad(medial_anchors(squared, mask, filter_param), 1, mode='constant', constant_values=False)
    flat = np.flatnonzero(padded)
    # 按距离从小到大、再按光栅顺序删除
    order = flat[np.lexsort((flat, padded_sq.ravel()[flat]))].astype(np.int64)
    guided_thinning(padded, order, anchors, SIMPLE_LUT, POPCOUNT, False)
    # 去掉锚点造成的两像素宽，保留端点
    no_anchor = np.zeros_like(anchors)
    guided_thinning(padded, order, no_anchor, SIMPLE_LUT, POPCOUNT, True)
    return padded[1:-1, 1:-1].astype(bool)


def euclidean_skeleton(mask, filter_param=1.0, canonical=True):
    """过滤的欧氏骨架：以中轴锚点为引导的保拓扑细化，结果8连通

    :param mask: 连通的区域二值图
    :type mask: ndarray
    :param filter_param: 过滤强度，为平分角下限（弧度），默认1.0只去掉单像素毛刺
    :type filter_param: float
    :param canonical: 是否在规范姿态下计算，使旋转和镜像的输入得到对应的骨架
    :type canonical: bool
    :return: 骨架
    :rtype: Skeleton
    """
    mask = _as_mask(mask)
    if filter_param < 0:
        raise ValueError('filter_param不能小于0，当前值为: %s' % filter_param)
    pose = (0, False)
    work = mask
    if canonical:
        work, pose = canonical_pose(mask)
    squared = distance_transform(work).squared
    pixels = _thin(work, squared, filter_param)
    if canonical:
        pixels = _undo_pose(pixels, pose)
    flags = ('skeleton_cycles',) if find_holes(pixels, 8)[1] > 0 else ()
    pixels.setflags(write=False)
    return Skeleton(pixels=pixels, filter_param=float(filter_param), flags=flags)


def _undo_pose(array, pose):
    return apply_pose(array, inverse_pose(pose))


def _skeleton_graph(pixels):
    coords = np.argwhere(pixels)
    index = -np.ones(pixels.shape, dtype=np.int64)
    index[coords[:, 0], coords[:, 1]] = np.arange(len(coords))
    padded = np.pad(index, 1, mode='constant', constant_values=-1)
    rows, cols = [], []
    for dr, dc in _NEIGHBORS_8:
        neighbor = padded[1 + coords[:, 0] + dr, 1 + coords[:, 1] + dc]
        valid = neighbor >= 0
        rows.append(np.nonzero(valid)[0])
        cols.append(neighbor[valid])
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    graph = sparse.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(coords), len(coords)))
    return coords, graph


def _farthest(graph, source):
    dist, predecessors = csgraph.shortest_path(graph, method='D', directed=False, unweighted=True,
                                               indices=source, return_predecessors=True)
    dist = np.where(np.isfinite(dist), dist, -1)
    # 距离相同时取索引最小的
    return int(np.argmax(dist)), predecessors


def longest_skeleton_path(skel):
    """两次广度优先搜索求骨架最长路径，树上精确，有环时为启发式并标记

    :param skel: 骨架
    :type skel: Skeleton
    :return: 路径像素坐标和标记
    :rtype: tuple
    """
    pixels = skel.pixels if isinstance(skel, Skeleton) else np.asarray(skel, dtype=bool)
    if not pixels.any():
        raise ValueError('骨架不能为空')
    coords, graph = _skeleton_graph(pixels)
    degree = np.asarray(graph.sum(axis=1)).ravel()
    endpoints = np.nonzero(degree == 1)[0]
    start = int(endpoints[0]) if len(endpoints) else 0
    u, _ = _farthest(graph, start)
    v, predecessors = _farthest(graph, u)
    path = [v]
    while path[-1] != u:
        path.append(int(predecessors[path[-1]]))
    flags = ('path_heuristic',) if find_holes(pixels, 8)[1] > 0 else ()
    return [tuple(int(x) for x in coords[i]) for i in path], flags


def skeleton_metrics(skel, df):
    """骨架长度和宽度，宽度为2*距离-1，即单像素宽的线宽度为1

    :param skel: 骨架
    :type skel: Skeleton
    :param df: 同一区域的距离场
    :type df: DistanceField
    :rtype: SkeletonMetrics
    """
    pixels = skel.pixels
    if pixels.shape != df.squared.shape:
        raise ValueError('骨架和距离场的大小不一致')
    widths = 2.0 * np.sqrt(df.squared[pixels].astype(np.float64)) - 1.0
    path, path_flags = longest_skeleton_path(skel)
    path_widths = [2.0 * math.sqrt(df.squared[p]) - 1.0 for p in path]
    l_total = int(len(widths))
    return SkeletonMetrics(l_total=l_total,
                           w_avg=math.fsum(widths) / l_total,
                           l_longest=len(path),
                           w_longest_avg=math.fsum(path_widths) / len(path),
                           flags=tuple(sorted(set(skel.flags) | set(path_flags))))
