"""Contains region extraction from label rasters and the boundary measures of a region."""
from functools import cached_property

import numpy as np
from scipy import ndimage

from shapesuite.data_utils.image import LabelImage

# 4连通和8连通的结构元素
STRUCTURE_4 = ndimage.generate_binary_structure(2, 1)
STRUCTURE_8 = ndimage.generate_binary_structure(2, 2)

# 顺时针的8邻域：NW, N, NE, E, SE, S, SW, W
_MOORE_RING = ((-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1))
_MOORE_INDEX = {offset: i for i, offset in enumerate(_MOORE_RING)}


def _structure(connectivity):
    if connectivity == 4:
        return STRUCTURE_4
    if connectivity == 8:
        return STRUCTURE_8
    raise ValueError('连通性只能是4或8，当前值为: %s' % connectivity)


def _edge_count(mask):
    """统计区域像素与非区域像素之间的4邻接边数，图像外也算作非区域"""
    padded = np.pad(mask, 1, mode='constant', constant_values=False)
    vertical = np.count_nonzero(padded[1:, :] != padded[:-1, :])
    horizontal = np.count_nonzero(padded[:, 1:] != padded[:, :-1])
    return int(vertical + horizontal)


def find_holes(mask, region_connectivity=8):
    """找出被区域完全包围的背景连通分量，背景连通性与区域连通性互补

    :return: 洞的标记图（0为非洞）和洞的数量
    """
    hole_connectivity = 4 if region_connectivity == 8 else 8
    padded = np.pad(~mask, 1, mode='constant', constant_values=True)
    labeled, count = ndimage.label(padded, structure=_structure(hole_connectivity))
    # 与外框相连的背景是外部
    border = np.unique(np.concatenate([labeled[0], labeled[-1], labeled[:, 0], labeled[:, -1]]))
    labeled[np.isin(labeled, border)] = 0
    labeled = labeled[1:-1, 1:-1]
    ids = np.unique(labeled[labeled > 0])
    relabeled = np.zeros_like(labeled)
    for new_id, old_id in enumerate(ids, start=1):
        relabeled[labeled == old_id] = new_id
    return relabeled, len(ids)


def moore_trace(mask):
    """Moore邻域边界跟踪，返回首尾相同、逆时针方向的外边界像素序列（相对mask坐标）"""
    coords = np.argwhere(mask)
    if len(coords) == 0:
        raise ValueError('区域不能为空')
    rows, cols = mask.shape

    def inside(p):
        return 0 <= p[0] < rows and 0 <= p[1] < cols and mask[p[0], p[1]]

    start = (int(coords[0][0]), int(coords[0][1]))
    sequence = [start]
    current = start
    backtrack = (start[0], start[1] - 1)
    while True:
        index = _MOORE_INDEX[(backtrack[0] - current[0], backtrack[1] - current[1])]
        found = None
        previous = backtrack
        for k in range(1, 9):
            dr, dc = _MOORE_RING[(index + k) % 8]
            candidate = (current[0] + dr, current[1] + dc)
            if inside(candidate):
                found = candidate
                break
            previous = candidate
        if found is None:
            # 孤立像素
            return sequence
        if current == start and len(sequence) > 1 and found == sequence[1]:
            break
        sequence.append(found)
        backtrack = previous
        current = found
    # 扫描方向为屏幕上的顺时针，反转后为逆时针
    sequence.reverse()
    return sequence


# 二面体群的8个变换：(逆时针旋转90度的次数, 是否先左右翻转)
DIHEDRAL_POSES = tuple((k, flip) for flip in (False, True) for k in range(4))


def apply_pose(array, pose):
    k, flip = pose
    if flip:
        array = array[:, ::-1]
    return np.ascontiguousarray(np.rot90(array, k))


def inverse_pose(pose):
    k, flip = pose
    # 翻转是对合变换，先翻转再旋转k次的逆就是它本身
    return (k, True) if flip else ((4 - k) % 4, False)


def canonical_pose(mask):
    """在8个旋转/翻转姿态中选取字典序最小的mask，使旋转和镜像后的区域得到完全相同的输入

    :return: 规范姿态下的mask和使用的变换
    """
    best = None
    for pose in DIHEDRAL_POSES:
        candidate = apply_pose(mask, pose)
        key = (candidate.shape, np.packbits(candidate, axis=None).tobytes())
        if best is None or key < best[0]:
            best = (key, candidate, pose)
    return best[1], best[2]


def angle_from_pose(angle_deg, pose):
    """把规范姿态下测得的方向角换算回原始姿态，范围[0, 180)"""
    k, flip = pose
    angle = (angle_deg - 90.0 * (k % 2)) % 180.0
    if flip:
        angle = (-angle) % 180.0
    if angle >= 180.0:
        angle -= 180.0
    return angle + 0.0


class Region(object):
    """One connected segment of a label raster.

    :param label: Label value of the segment.
    :type label: int
    :param mask: Boolean pixel mask cropped to the bounding box.
    :type mask: ndarray
    :param origin: (row, col) of the crop's top-left pixel in the source raster.
    :type origin: tuple
    :param region_connectivity: Connectivity the pixels were grouped with, 4 or 8.
    :type region_connectivity: int
    """

    def __init__(self, label, mask, origin=(0, 0), region_connectivity=8):
        mask = np.asarray(mask, dtype=bool)
        if mask.ndim != 2 or not mask.any():
            raise ValueError('区域的mask必须是非空的二维数组')
        _structure(region_connectivity)
        # 裁剪到最小外接框
        rows = np.nonzero(mask.any(axis=1))[0]
        cols = np.nonzero(mask.any(axis=0))[0]
        self._mask = np.ascontiguousarray(mask[rows[0]:rows[-1] + 1, cols[0]:cols[-1] + 1])
        self._mask.setflags(write=False)
        self.label = int(label)
        self.origin = (int(origin[0]) + int(rows[0]), int(origin[1]) + int(cols[0]))
        self.region_connectivity = region_connectivity

    def __str__(self):
        return "%s: label=%d, bbox=%s, area=%d, holes=%d" % (type(self), self.label, self.bbox,
                                                             self.area, self.hole_count)

    @classmethod
    def from_mask(cls, label, mask, origin=(0, 0), region_connectivity=8):
        return cls(label, mask, origin=origin, region_connectivity=region_connectivity)

    @property
    def mask(self):
        return self._mask

    @property
    def bbox(self):
        """(min_row, min_col, max_row, max_col)，包含端点"""
        r0, c0 = self.origin
        return r0, c0, r0 + self._mask.shape[0] - 1, c0 + self._mask.shape[1] - 1

    @cached_property
    def coords(self):
        """区域像素在原图中的坐标"""
        return np.argwhere(self._mask) + np.asarray(self.origin)

    @cached_property
    def area(self):
        return int(np.count_nonzero(self._mask))

    @cached_property
    def _holes(self):
        return find_holes(self._mask, self.region_connectivity)

    @property
    def hole_count(self):
        return self._holes[1]

    @cached_property
    def filled_mask(self):
        filled = self._mask | (self._holes[0] > 0)
        filled.setflags(write=False)
        return filled

    @property
    def filled_area(self):
        return int(np.count_nonzero(self.filled_mask))

    @cached_property
    def pl_total(self):
        return _edge_count(self._mask)

    @cached_property
    def pl_external(self):
        return _edge_count(self.filled_mask)

    @cached_property
    def outer_boundary(self):
        """逆时针闭合的外边界像素序列，原图坐标"""
        r0, c0 = self.origin
        return [(r + r0, c + c0) for r, c in moore_trace(self._mask)]

    @cached_property
    def hole_boundaries(self):
        """每个洞沿洞像素跟踪得到的闭合序列，原图坐标"""
        r0, c0 = self.origin
        labeled, count = self._holes
        boundaries = []
        for hole_id in range(1, count + 1):
            hole_mask = labeled == hole_id
            boundaries.append([(r + r0, c + c0) for r, c in moore_trace(hole_mask)])
        return boundaries

    def full_mask(self, shape):
        """区域在整幅图像大小下的mask"""
        out = np.zeros(shape, dtype=bool)
        r0, c0, r1, c1 = self.bbox
        out[r0:r1 + 1, c0:c1 + 1] = self._mask
        return out


def extract_regions(img, region_connectivity=8, background_label=0):
    """把标签图像分解为连通区域

    :param img: 标签图像
    :type img: LabelImage
    :param region_connectivity: 区域的连通性，4或8，洞使用互补的连通性
    :type region_connectivity: int
    :param background_label: 背景标签，为None时所有标签都产生区域
    :type background_label: int|None
    :return: 按标签、外接框排序的区域列表
    :rtype: list
    """
    if not isinstance(img, LabelImage):
        img = LabelImage(img)
    structure = _structure(region_connectivity)
    labels = img.labels
    regions = []
    slices = ndimage.find_objects(labels + 1)
    for index, bbox_slice in enumerate(slices):
        if bbox_slice is None:
            continue
        value = index
        if background_label is not None and value == background_label:
            continue
        crop = labels[bbox_slice] == value
        components, count = ndimage.label(crop, structure=structure)
        for component in range(1, count + 1):
            mask = components == component
            origin = (bbox_slice[0].start, bbox_slice[1].start)
            regions.append(Region(value, mask, origin=origin, region_connectivity=region_connectivity))
    regions.sort(key=lambda region: (region.label, region.bbox))
    return regions


def cross_aura(img):
    """4邻接交叉光环图：每个像素的4邻域中标签不同的个数，图像外算作不同

    :param img: 标签图像
    :type img: LabelImage
    :return: 每个像素取值0到4的整数图
    :rtype: ndarray
    """
    if not isinstance(img, LabelImage):
        img = LabelImage(img)
    padded = np.pad(img.labels, 1, mode='constant', constant_values=-1)
    center = padded[1:-1, 1:-1]
    aura = ((padded[:-2, 1:-1] != center).astype(np.int64)
            + (padded[2:, 1:-1] != center)
            + (padded[1:-1, :-2] != center)
            + (padded[1:-1, 2:] != center))
    return aura


def trace_outer_boundary(region):
    """Moore边界跟踪，返回首尾相同的逆时针外边界像素序列，单像素区域返回长度为1的序列"""
    return region.outer_boundary


def boundary_cross_aura_lengths(region):
    """返回(pl_external, pl_total)，分别为外边界和全部边界的4邻接交叉光环长度"""
    return region.pl_external, region.pl_total
