from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Tuple

import numpy as np

from shapesuite.data_utils.image import GrayImage
from shapesuite.data_utils.region import Region, angle_from_pose, canonical_pose
from shapesuite.featurizer.config import FuzzyRectConfig, StraightnessConfig
from shapesuite.featurizer.descriptors import (convexity, elongatedness, elongatedness_nm, fuzzy_rectangularity,
                                               roundness, simple_connectivity, straightness)
from shapesuite.geometry.contour import convex_hull, discretize_hull_area, min_enclosing_rect
from shapesuite.geometry.skeleton import distance_transform, euclidean_skeleton, skeleton_metrics
from shapesuite.morphology.profile import dmp, multiscale_characteristic, profile_scales
from shapesuite.utils.utils import format_float

# CSV的列顺序固定，附加列在flags之后
CSV_COLUMNS = ('label', 'area', 'mer_angle_deg', 'mer_w', 'mer_l', 'cnvxty_and_no_hole',
               'fuzzy_rule_bsd_rctnglrty', 'rndnss_and_no_hole', 'mlt_scl_strghtns_of_bndrs',
               'dmp_mlt_scl_chrctrstc', 'elngtdnss_and_no_hole', 'elngtdnss_nm', 'smpl_cnctvty_4adjncy',
               'filled_area_ratio', 'combnd_smpl_cnctvty', 'flags')
AUX_COLUMNS = ('mean_intensity', 'boundary_contrast', 'mer_rectangularity')
# 参与验证的七个描述子
DESCRIPTOR_COLUMNS = ('cnvxty_and_no_hole', 'fuzzy_rule_bsd_rctnglrty', 'rndnss_and_no_hole',
                      'mlt_scl_strghtns_of_bndrs', 'dmp_mlt_scl_chrctrstc', 'elngtdnss_and_no_hole',
                      'combnd_smpl_cnctvty')
# 取值范围为[0, 1]的字段，可以按字节编码输出
UNIT_COLUMNS = ('cnvxty_and_no_hole', 'fuzzy_rule_bsd_rctnglrty', 'rndnss_and_no_hole',
                'mlt_scl_strghtns_of_bndrs', 'smpl_cnctvty_4adjncy', 'filled_area_ratio',
                'combnd_smpl_cnctvty', 'mer_rectangularity')


@dataclass(frozen=True)
class FeatureVector:
    """One output row: area, MER, the seven descriptors and their auxiliary terms."""
    label: int
    area: int
    mer_angle_deg: float
    mer_w: float
    mer_l: float
    cnvxty_and_no_hole: float
    fuzzy_rule_bsd_rctnglrty: float
    rndnss_and_no_hole: float
    mlt_scl_strghtns_of_bndrs: float
    dmp_mlt_scl_chrctrstc: Optional[float]
    elngtdnss_and_no_hole: float
    elngtdnss_nm: float
    smpl_cnctvty_4adjncy: float
    filled_area_ratio: float
    combnd_smpl_cnctvty: float
    straightness_per_scale: Dict[int, float] = field(default_factory=dict)
    mean_intensity: Optional[float] = None
    boundary_contrast: Optional[float] = None
    mer_rectangularity: float = 0.0
    flags: Tuple[str, ...] = field(default=())

    def descriptors(self):
        """七个描述子，没有灰度图时DMP为None"""
        return {name: getattr(self, name) for name in DESCRIPTOR_COLUMNS}

    def to_row(self, byte_code=False):
        """转换为CSV的一行字符串

        :param byte_code: 是否把[0, 1]范围的字段编码为0到255的整数
        :type byte_code: bool
        :return: 按CSV_COLUMNS + AUX_COLUMNS顺序的字符串列表
        :rtype: list
        """
        row = []
        for name in CSV_COLUMNS + AUX_COLUMNS:
            if name == 'flags':
                row.append(';'.join(sorted(set(self.flags))))
                continue
            value = getattr(self, name)
            if name in ('label', 'area'):
                row.append(str(int(value)))
            elif value is None or not np.isfinite(value):
                row.append('')
            elif byte_code and name in UNIT_COLUMNS:
                row.append(str(int(round(255.0 * value))))
            else:
                row.append(format_float(value))
        return row


def _gray_companions(region, intensities):
    """区域平均灰度和跨4邻接边界的平均灰度差，图像外的边不计"""
    height, width = intensities.shape
    r0, c0, r1, c1 = region.bbox
    wr0, wc0 = max(r0 - 1, 0), max(c0 - 1, 0)
    wr1, wc1 = min(r1 + 2, height), min(c1 + 2, width)
    window = intensities[wr0:wr1, wc0:wc1].astype(np.float64)
    inside = np.zeros(window.shape, dtype=bool)
    inside[r0 - wr0:r1 - wr0 + 1, c0 - wc0:c1 - wc0 + 1] = region.mask
    mean_intensity = float(window[inside].mean())
    horizontal = inside[:, :-1] != inside[:, 1:]
    vertical = inside[:-1, :] != inside[1:, :]
    diffs = np.concatenate([np.abs(window[:, :-1] - window[:, 1:])[horizontal],
                            np.abs(window[:-1, :] - window[1:, :])[vertical]])
    if len(diffs) == 0:
        return mean_intensity, None
    return mean_intensity, float(diffs.mean())


class ShapeFeaturizer(object):
    """区域形状特征器，从Region中计算七个描述子以及面积和MER方向

    所有描述子都在区域mask的规范姿态下计算，旋转90度和镜像的区域得到完全相同的值，
    MER的方向角再换算回原图。

    :param straightness_cfg: 多尺度直线度配置
    :type straightness_cfg: StraightnessConfig
    :param fuzzy_cfg: 模糊规则矩形度配置
    :type fuzzy_cfg: FuzzyRectConfig
    :param skeleton_filter: 骨架过滤参数，平分角下限（弧度）
    :type skeleton_filter: float
    :param dmp_depth: 只给灰度图时计算差分形态学剖面的深度
    :type dmp_depth: int
    """

    def __init__(self, straightness_cfg=None, fuzzy_cfg=None, skeleton_filter=1.0, dmp_depth=4):
        if skeleton_filter < 0:
            raise ValueError('skeleton_filter不能小于0，当前值为: %s' % skeleton_filter)
        self._straightness_cfg = straightness_cfg or StraightnessConfig()
        self._fuzzy_cfg = fuzzy_cfg or FuzzyRectConfig()
        self._skeleton_filter = float(skeleton_filter)
        profile_scales(dmp_depth)
        self._dmp_depth = dmp_depth

    @property
    def straightness_cfg(self):
        return self._straightness_cfg

    @property
    def fuzzy_cfg(self):
        return self._fuzzy_cfg

    @property
    def skeleton_filter(self):
        return self._skeleton_filter

    @property
    def dmp_depth(self):
        return self._dmp_depth

    def featurize(self, region, gray=None, cmap=None):
        """计算一个区域的特征

        :param region: 需要计算的区域
        :type region: Region
        :param gray: 与标签图同样大小的灰度图，提供时计算平均灰度和边界对比度
        :type gray: GrayImage|None
        :param cmap: 灰度图的多尺度特征图，为None且提供灰度图时按dmp_depth计算
        :type cmap: CharacteristicMap|None
        :return: 特征向量
        :rtype: FeatureVector
        """
        if not isinstance(region, Region):
            raise TypeError('region必须是Region类型，当前类型为: %s' % type(region))
        flags = set()
        mask, pose = canonical_pose(region.mask)
        canon = Region.from_mask(region.label, mask, region_connectivity=region.region_connectivity)

        hull = convex_hull(canon.outer_boundary)
        hull = replace(hull, a_convex=discretize_hull_area(hull))
        flags.update(hull.flags)
        rect = min_enclosing_rect(hull)
        flags.update(rect.flags)
        mer_angle = 0.0 if rect.degenerate else angle_from_pose(rect.angle_deg, pose)
        mer_area = rect.length_l * rect.width_w
        mer_rectangularity = min(1.0, canon.area / mer_area) if mer_area > 0 else 0.0

        straight = straightness(canon.outer_boundary, self._straightness_cfg)
        flags.update(straight.flags)
        rect_result = fuzzy_rectangularity(canon.outer_boundary, self._fuzzy_cfg, straight)
        flags.update(rect_result.flags)

        # 保留洞的骨架用于细长度，填充洞的骨架用于参照的最长路径细长度
        skel = euclidean_skeleton(canon.mask, self._skeleton_filter, canonical=False)
        metrics = skeleton_metrics(skel, distance_transform(canon.mask))
        flags.update(metrics.flags)
        elong, elong_flags = elongatedness(metrics)
        flags.update(elong_flags)
        filled = canon.filled_mask
        if canon.hole_count:
            filled_skel = euclidean_skeleton(filled, self._skeleton_filter, canonical=False)
            filled_metrics = skeleton_metrics(filled_skel, distance_transform(filled))
        else:
            filled_metrics = metrics
        term1, term2, combined = simple_connectivity(canon)

        dmp_value = None
        if cmap is None and gray is not None:
            cmap = multiscale_characteristic(dmp(gray, self._dmp_depth))
        if cmap is not None:
            dmp_value = cmap.segment_average(region)
            if cmap.mixed_sign(region):
                flags.add('dmp_mixed_sign')
        mean_intensity, boundary_contrast = None, None
        if gray is not None:
            intensities = gray.intensities if isinstance(gray, GrayImage) else np.asarray(gray)
            mean_intensity, boundary_contrast = _gray_companions(region, intensities)
            if boundary_contrast is None:
                flags.add('no_boundary_edge')
        if gray is None and cmap is None:
            flags.add('no_gray_image')

        return FeatureVector(label=region.label,
                             area=region.area,
                             mer_angle_deg=mer_angle,
                             mer_w=rect.width_w,
                             mer_l=rect.length_l,
                             cnvxty_and_no_hole=convexity(canon, hull),
                             fuzzy_rule_bsd_rctnglrty=rect_result.value,
                             rndnss_and_no_hole=roundness(canon),
                             mlt_scl_strghtns_of_bndrs=straight.value,
                             dmp_mlt_scl_chrctrstc=dmp_value,
                             elngtdnss_and_no_hole=elong,
                             elngtdnss_nm=elongatedness_nm(filled_metrics),
                             smpl_cnctvty_4adjncy=term1,
                             filled_area_ratio=term2,
                             combnd_smpl_cnctvty=combined,
                             straightness_per_scale=dict(straight.per_scale),
                             mean_intensity=mean_intensity,
                             boundary_contrast=boundary_contrast,
                             mer_rectangularity=mer_rectangularity,
                             flags=tuple(sorted(flags)))


def compute_features(region, gray=None, cmap=None, straightness_cfg=None, fuzzy_cfg=None, skeleton_filter=1.0,
                     dmp_depth=4):
    """用默认或给定的配置计算单个区域的特征向量"""
    featurizer = ShapeFeaturizer(straightness_cfg=straightness_cfg, fuzzy_cfg=fuzzy_cfg,
                                 skeleton_filter=skeleton_filter, dmp_depth=dmp_depth)
    return featurizer.featurize(region, gray=gray, cmap=cmap)
