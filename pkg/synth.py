import argparse
import functools
import sys

from shapesuite.data_utils.synth import SHAPE_SETS
from shapesuite.suite import ShapeSuite
from shapesuite.utils.logger import setup_logger
from shapesuite.utils.utils import add_arguments, apply_config, print_arguments

logger = setup_logger('synth')

parser = argparse.ArgumentParser(description=__doc__)
add_arg = functools.partial(add_arguments, argparser=parser)
add_arg('config', str, None,             'yaml配置文件路径，使用其中的synth部分')
add_arg('set',    str, 'suite',          '合成形状集名称', choices=SHAPE_SETS)
add_arg('size',   int, 32,               '形状的基准大小（像素）')
add_arg('out',    str, 'dataset/suite',  '输出文件前缀，生成<out>_labels.png、<out>_gray.png和<out>.truth.json')
args = apply_config(parser, section='synth')
print_arguments(args)

try:
    labels_path, gray_path, truth_path = ShapeSuite().synth(set_name=args.set, out_prefix=args.out, size=args.size)
except Exception as e:
    logger.error('生成形状集失败: %s', e)
    sys.exit(1)
print('标签图：{}，灰度图：{}，真值：{}'.format(labels_path, gray_path, truth_path))
