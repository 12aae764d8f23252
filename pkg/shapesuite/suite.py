import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd
from tqdm import tqdm

from shapesuite import __version__
from shapesuite.data_utils.image import GrayImage, LabelImage
from shapesuite.data_utils.reader import decimate, read_feature_table
from shapesuite.data_utils.region import extract_regions
from shapesuite.data_utils.synth import make_shape_set, write_shape_set
from shapesuite.featurizer.config import FuzzyRectConfig, StraightnessConfig
from shapesuite.featurizer.shape_featurizer import (AUX_COLUMNS, CSV_COLUMNS, DESCRIPTOR_COLUMNS, FeatureVector,
                                                    ShapeFeaturizer)
from shapesuite.morphology.lisa import SpatialWeights, gearys_c, moran_geary_agree, morans_i, reversed_gearys_c
from shapesuite.morphology.profile import dmp, multiscale_characteristic, profile_scales
from shapesuite.utils.logger import setup_logger
from shapesuite.utils.utils import dump_json, num_threads
from shapesuite.validation.validator import SCHEMA_VERSION, validate_feature_set

logger = setup_logger(__name__)


def _failed_vector(region):
    nan = float('nan')
    return FeatureVector(label=region.label, area=region.area, mer_angle_deg=nan, mer_w=nan, mer_l=nan,
                         cnvxty_and_no_hole=nan, fuzzy_rule_bsd_rctnglrty=nan, rndnss_and_no_hole=nan,
                         mlt_scl_strghtns_of_bndrs=nan, dmp_mlt_scl_chrctrstc=None, elngtdnss_and_no_hole=nan,
                         elngtdnss_nm=nan, smpl_cnctvty_4adjncy=nan, filled_area_ratio=nan,
                         combnd_smpl_cnctvty=nan, mer_rectangularity=nan, flags=('region_failed',))


class ShapeSuite(object):
    def __init__(self,
                 straightness_angle=15.0,
                 scales=(1, 2, 4, 8, 16, 32),
                 fuzzy_separation=3.0,
                 skeleton_filter=1.0,
                 dmp_depth=4,
                 region_connectivity=8,
                 background_label=0,
                 alpha=0.05,
                 srcc_strong=0.8,
                 decimate=1.0,
                 seed=0,
                 max_triples=10 ** 6,
                 threads=None):
        """
        形状描述子计算和最小依赖验证集成工具类
        :param straightness_angle: 判定边界点为直的最大偏转角（度）
        :param scales: 多尺度直线度的步长
        :param fuzzy_separation: 模糊矩形度中近直角顶点的最小间距（像素）
        :param skeleton_filter: 骨架过滤参数，平分角下限（弧度）
        :param dmp_depth: 差分形态学剖面的深度
        :param region_connectivity: 区域的连通性，4或8
        :param background_label: 背景标签，小于0时所有标签都产生区域
        :param alpha: 卡方检验的显著性水平
        :param srcc_strong: 判定为强秩相关的|SRCC|下限
        :param decimate: 验证前简单随机抽样的比例
        :param seed: 随机种子，记录在所有输出中
        :param max_triples: 非单调三元组搜索的上限
        :param threads: 线程数量，受环境变量SHAPESUITE_THREADS限制
        """
        self.straightness_cfg = StraightnessConfig(angle_threshold_deg=straightness_angle, scales=tuple(scales))
        self.fuzzy_cfg = FuzzyRectConfig(separation_min=fuzzy_separation)
        self.skeleton_filter = skeleton_filter
        profile_scales(dmp_depth)
        self.dmp_depth = dmp_depth
        self.region_connectivity = region_connectivity
        self.background_label = background_label if background_label is not None and background_label >= 0 else None
        self.alpha = alpha
        self.srcc_strong = srcc_strong
        self.decimate = decimate
        self.seed = seed
        self.max_triples = max_triples
        self.threads = threads
        self.featurizer = ShapeFeaturizer(straightness_cfg=self.straightness_cfg,
                                          fuzzy_cfg=self.fuzzy_cfg,
                                          skeleton_filter=skeleton_filter,
                                          dmp_depth=dmp_depth)

    def extract_config(self):
        return {'straightness': self.straightness_cfg.to_dict(),
                'fuzzy_rectangularity': self.fuzzy_cfg.to_dict(),
                'skeleton_filter': self.skeleton_filter,
                'dmp_depth': self.dmp_depth,
                'dmp_scales': list(profile_scales(self.dmp_depth)),
                'region_connectivity': self.region_connectivity,
                'background_label': self.background_label}

    def validate_config(self):
        return {'alpha': self.alpha,
                'srcc_strong': self.srcc_strong,
                'decimate': self.decimate,
                'max_triples': self.max_triples}

    def featurize_image(self, labels, gray=None):
        """计算标签图中所有区域的特征，单个区域出错时只记录日志并标记

        :param labels: 标签图像
        :type labels: LabelImage
        :param gray: 同样大小的灰度图像
        :type gray: GrayImage|None
        :return: 区域列表和按区域顺序的特征向量列表
        :rtype: tuple
        """
        if gray is not None and gray.shape != labels.shape:
            raise ValueError('灰度图的大小%s和标签图的大小%s不一致' % (gray.shape, labels.shape))
        regions = extract_regions(labels, region_connectivity=self.region_connectivity,
                                  background_label=self.background_label)
        logger.info('标签图大小: %s, 区域数量: %d', labels.shape, len(regions))
        cmap = None
        if gray is not None:
            cmap = multiscale_characteristic(dmp(gray, self.dmp_depth))

        def run(region):
            try:
                return self.featurizer.featurize(region, gray=gray, cmap=cmap)
            except Exception as e:
                logger.warning('区域label=%d bbox=%s计算出错: %s', region.label, region.bbox, e)
                return _failed_vector(region)

        with ThreadPoolExecutor(max_workers=num_threads(self.threads)) as executor:
            vectors = list(tqdm(executor.map(run, regions), total=len(regions), desc='计算区域特征'))
        mixed = sum('dmp_mixed_sign' in v.flags for v in vectors)
        if mixed:
            logger.warning('%d个区域内的多尺度特征同时有正负值，平均值按|Φ|计算', mixed)
        return regions, vectors

    def extract(self, labels_path, out_path, gray_path=None, byte_code=False, lisa=False):
        """
        计算标签图中每个区域的形状描述子并保存为CSV
        :param labels_path: 标签图路径
        :param out_path: 输出的CSV路径，同时生成<out>.meta.json
        :param gray_path: 灰度图路径，提供时计算DMP描述子和灰度附加列
        :param byte_code: 是否把[0, 1]范围的描述子编码为0到255的整数
        :param lisa: 是否在区域邻接图上计算各描述子的全局Moran's I和Geary's C
        :return: 特征向量列表
        """
        labels = LabelImage.from_file(labels_path)
        gray = GrayImage.from_file(gray_path) if gray_path else None
        regions, vectors = self.featurize_image(labels, gray)
        columns = list(CSV_COLUMNS + AUX_COLUMNS)
        frame = pd.DataFrame([v.to_row(byte_code=byte_code) for v in vectors], columns=columns)
        out_dir = os.path.dirname(out_path)
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
        frame.to_csv(out_path, index=False)
        meta = {'schema_version': SCHEMA_VERSION,
                'version': __version__,
                'seed': self.seed,
                'labels': os.path.basename(labels_path),
                'gray': os.path.basename(gray_path) if gray_path else None,
                'regions': len(vectors),
                'columns': columns,
                'byte_code': bool(byte_code),
                'config': self.extract_config(),
                'notes': ['dmp_mlt_scl_chrctrstc is the mean of |Φ| over the segment',
                          'fuzzy separation_min is in pixels',
                          'descriptors are evaluated on the canonical rotation/reflection of each region',
                          'cnvxty_and_no_hole divides by the discretized hull area',
                          'byte-coded columns hold round(255 * value)' if byte_code else
                          'columns hold full precision values']}
        dump_json(meta, out_path + '.meta.json')
        if lisa:
            dump_json(self.segment_autocorrelation(labels, regions, vectors), out_path + '.lisa.json')
        logger.info('特征已保存到: %s', out_path)
        return vectors

    def segment_autocorrelation(self, labels, regions, vectors):
        """在共享4邻接边的区域之间计算每个描述子的全局Moran's I和Geary's C"""
        ids = -np.ones(labels.shape, dtype=np.int64)
        for index, region in enumerate(regions):
            coords = region.coords
            ids[coords[:, 0], coords[:, 1]] = index
        result = {'schema_version': SCHEMA_VERSION, 'seed': self.seed, 'weights': 'segment 4-adjacency',
                  'descriptors': {}}
        if len(regions) < 2:
            logger.warning('区域数量少于2个，跳过空间自相关')
            return result
        weights = SpatialWeights.from_segments(ids, len(regions))
        for name in DESCRIPTOR_COLUMNS:
            values = np.array([np.nan if getattr(v, name) is None else getattr(v, name) for v in vectors],
                              dtype=np.float64)
            if not np.all(np.isfinite(values)):
                logger.warning('描述子%s存在缺失值，跳过空间自相关', name)
                continue
            try:
                global_i, _ = morans_i(values, weights)
                global_c, _ = gearys_c(values, weights)
            except ValueError as e:
                logger.warning('描述子%s的空间自相关无定义: %s', name, e)
                continue
            result['descriptors'][name] = {'morans_i': global_i,
                                           'gearys_c': global_c,
                                           'reversed_gearys_c': reversed_gearys_c(global_c),
                                           'sign_agree': moran_geary_agree(values, weights)}
        return result

    def validate(self, csv_path, out_path, features=None):
        """
        对特征表做最小依赖验证并保存json报告
        :param csv_path: 特征CSV路径
        :param out_path: 输出的json报告路径
        :param features: 参与验证的特征列，默认为表中的七个描述子
        :return: 验证报告
        """
        matrix = read_feature_table(csv_path, features=features)
        matrix = decimate(matrix, factor=self.decimate, seed=self.seed)
        logger.info('参与验证的特征: %s, 样本数: %d', ','.join(matrix.names), matrix.n)
        report = validate_feature_set(matrix, alpha=self.alpha, srcc_strong=self.srcc_strong,
                                      max_triples=self.max_triples, threads=self.threads,
                                      seed=self.seed, config=self.validate_config())
        out_dir = os.path.dirname(out_path)
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
        dump_json(report.to_dict(), out_path)
        logger.info('验证报告已保存到: %s', out_path)
        return report

    def synth(self, set_name, out_prefix, size=32):
        """
        生成合成形状集的标签图、灰度图和真值文件
        :param set_name: 形状集名称
        :param out_prefix: 输出文件的前缀
        :param size: 形状的基准大小
        :return: (标签图路径, 灰度图路径, 真值文件路径)
        """
        synthetic = make_shape_set(set_name, size=size)
        out_dir = os.path.dirname(out_prefix)
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
        paths = write_shape_set(synthetic, out_prefix)
        logger.info('形状集%s共%d个形状，已保存到: %s', set_name, len(synthetic.truth), paths[0])
        return paths
