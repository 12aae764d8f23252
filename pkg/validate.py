import argparse
import functools
import sys
import time

from shapesuite.suite import ShapeSuite
from shapesuite.utils.logger import setup_logger
from shapesuite.utils.utils import add_arguments, apply_config, print_arguments, str2strs

logger = setup_logger('validate')

parser = argparse.ArgumentParser(description=__doc__)
add_arg = functools.partial(add_arguments, argparser=parser)
add_arg('config',       str,      None,                      'yaml配置文件路径，使用其中的validate部分')
add_arg('features_csv', str,      'output/features.csv',     '特征CSV路径')
add_arg('out',          str,      'output/report.json',      '输出的验证报告路径')
add_arg('features',     str2strs, None,                      '参与验证的特征列，逗号分隔，默认为七个描述子')
add_arg('alpha',        float,    0.05,                      '卡方检验的显著性水平')
add_arg('srcc_strong',  float,    0.8,                       '判定为强秩相关的|SRCC|下限')
add_arg('decimate',     float,    1.0,                       '验证前简单随机抽样的比例，范围(0, 1]')
add_arg('seed',         int,      0,                         '抽样的随机种子')
add_arg('max_triples',  int,      1000000,                   '非单调三元组搜索的上限')
add_arg('threads',      int,      None,                      '线程数量，受环境变量SHAPESUITE_THREADS限制')
args = apply_config(parser, section='validate')
print_arguments(args)

try:
    suite = ShapeSuite(alpha=args.alpha,
                       srcc_strong=args.srcc_strong,
                       decimate=args.decimate,
                       seed=args.seed,
                       max_triples=args.max_triples,
                       threads=args.threads)
    start = time.time()
    report = suite.validate(csv_path=args.features_csv, out_path=args.out, features=args.features)
except Exception as e:
    logger.error('验证失败: %s', e)
    sys.exit(1)
print('验证消耗时间：{:.2f}s，k={}，N={}，最小依赖：{}'.format(time.time() - start, report.k, report.n,
                                                    '接受' if report.md_accepted else '拒绝'))
sys.exit(0 if report.md_accepted else 2)
