import argparse
import functools
import sys
import time

from shapesuite.suite import ShapeSuite
from shapesuite.utils.logger import setup_logger
from shapesuite.utils.utils import add_arguments, apply_config, print_arguments, str2ints

logger = setup_logger('extract')

parser = argparse.ArgumentParser(description=__doc__)
add_arg = functools.partial(add_arguments, argparser=parser)
add_arg('config',              str,    None,                   'yaml配置文件路径，使用其中的extract部分')
add_arg('labels',              str,    'dataset/suite_labels.png', '标签图路径')
add_arg('gray',                str,    None,                   '灰度图路径，提供时计算DMP描述子')
add_arg('out',                 str,    'output/features.csv',  '输出的特征CSV路径')
add_arg('straightness_angle',  float,  15.0,                   '判定边界点为直的最大偏转角（度）')
add_arg('scales',              str2ints, '1,2,4,8,16,32',      '多尺度直线度的步长，逗号分隔')
add_arg('fuzzy_separation',    float,  3.0,                    '模糊矩形度中近直角顶点的最小间距（像素）')
add_arg('skeleton_filter',     float,  1.0,                    '骨架过滤参数，平分角下限（弧度）')
add_arg('dmp_depth',           int,    4,                      '差分形态学剖面的深度')
add_arg('region_connectivity', int,    8,                      '区域的连通性', choices=[4, 8])
add_arg('background_label',    int,    0,                      '背景标签，小于0时所有标签都产生区域')
add_arg('byte_code',           bool,   False,                  '是否把[0, 1]范围的描述子编码为0到255的整数')
add_arg('lisa',                bool,   False,                  '是否输出区域邻接图上的空间自相关')
add_arg('seed',                int,    0,                      '随机种子，记录在输出中')
add_arg('threads',             int,    None,                   '线程数量，受环境变量SHAPESUITE_THREADS限制')
args = apply_config(parser, section='extract')
print_arguments(args)

try:
    suite = ShapeSuite(straightness_angle=args.straightness_angle,
                       scales=args.scales,
                       fuzzy_separation=args.fuzzy_separation,
                       skeleton_filter=args.skeleton_filter,
                       dmp_depth=args.dmp_depth,
                       region_connectivity=args.region_connectivity,
                       background_label=args.background_label,
                       seed=args.seed,
                       threads=args.threads)
    start = time.time()
    vectors = suite.extract(labels_path=args.labels,
                            out_path=args.out,
                            gray_path=args.gray,
                            byte_code=args.byte_code,
                            lisa=args.lisa)
except Exception as e:
    logger.error('计算特征失败: %s', e)
    sys.exit(1)
print('计算消耗时间：{:.2f}s，区域数量：{}'.format(time.time() - start, len(vectors)))
