"""Contains the label raster and gray raster abstractions."""
import os

import numpy as np
from PIL import Image

# 可以直接解释为单通道整数图像的PIL模式
_SINGLE_CHANNEL_MODES = ('1', 'L', 'P', 'I', 'I;16', 'I;16B', 'I;16L', 'I;16N')


def _read_single_channel(file):
    if isinstance(file, str) and not os.path.exists(file):
        raise IOError('图像文件不存在: %s' % file)
    with Image.open(file) as image:
        if image.mode not in _SINGLE_CHANNEL_MODES:
            raise ValueError('只支持单通道图像，当前模式为: %s' % image.mode)
        data = np.asarray(image)
    if data.dtype == np.bool_:
        data = data.astype(np.uint8)
    if data.ndim != 2:
        raise ValueError('只支持单通道图像，当前数据维度为: %d' % data.ndim)
    return data


def _write_single_channel(data, file):
    if data.min(initial=0) < 0 or data.max(initial=0) > 65535:
        raise ValueError('只能保存0到65535之间的像素值')
    if data.max(initial=0) <= 255:
        image = Image.fromarray(data.astype(np.uint8))
    else:
        image = Image.fromarray(data.astype(np.uint16))
    image.save(file)


class LabelImage(object):
    """Multi-level label raster, one non-negative integer label per pixel.

    :param labels: Label grid [height x width].
    :type labels: ndarray
    :raises TypeError: If the labels are not integers.
    :raises ValueError: If the grid is empty, not 2-D or negative.
    """

    def __init__(self, labels):
        labels = np.asarray(labels)
        if labels.dtype == np.bool_:
            labels = labels.astype(np.int64)
        if not np.issubdtype(labels.dtype, np.integer):
            raise TypeError('标签图像必须是整数类型，当前类型为: %s' % labels.dtype)
        if labels.ndim != 2:
            raise ValueError('标签图像必须是二维的，当前维度为: %d' % labels.ndim)
        if labels.shape[0] < 1 or labels.shape[1] < 1:
            raise ValueError('标签图像的宽和高必须大于等于1')
        if labels.min() < 0:
            raise ValueError('标签值不能为负数')
        self._labels = labels.astype(np.int64)
        self._labels.setflags(write=False)

    def __eq__(self, other):
        """返回两个对象是否相等"""
        if type(other) is not type(self):
            return False
        return self._labels.shape == other._labels.shape and bool(np.all(self._labels == other._labels))

    def __ne__(self, other):
        """返回两个对象是否不相等"""
        return not self.__eq__(other)

    def __str__(self):
        """返回该图像的信息"""
        return "%s: width=%d, height=%d, num_labels=%d" % (type(self), self.width, self.height,
                                                            len(self.unique_labels))

    @classmethod
    def from_file(cls, file):
        """从PGM(P2/P5)或8/16位单通道PNG文件创建标签图像，像素值即标签

        :param file: 文件路径
        :type file: str
        :return: 标签图像实例
        :rtype: LabelImage
        """
        return cls(_read_single_channel(file))

    @classmethod
    def from_ndarray(cls, labels):
        return cls(labels)

    def to_file(self, file):
        _write_single_channel(self._labels, file)

    @property
    def labels(self):
        return self._labels

    @property
    def width(self):
        return self._labels.shape[1]

    @property
    def height(self):
        return self._labels.shape[0]

    @property
    def shape(self):
        return self._labels.shape

    @property
    def unique_labels(self):
        return np.unique(self._labels)


class GrayImage(object):
    """Single-channel gray raster with non-negative integer intensities up to 16 bits.

    :param intensities: Intensity grid [height x width].
    :type intensities: ndarray
    """

    def __init__(self, intensities):
        intensities = np.asarray(intensities)
        if intensities.dtype == np.bool_:
            intensities = intensities.astype(np.int64)
        if not np.issubdtype(intensities.dtype, np.integer):
            raise TypeError('灰度图像必须是整数类型，当前类型为: %s' % intensities.dtype)
        if intensities.ndim != 2 or intensities.shape[0] < 1 or intensities.shape[1] < 1:
            raise ValueError('灰度图像必须是非空的二维数组')
        if intensities.min() < 0 or intensities.max() > 65535:
            raise ValueError('灰度值必须在0到65535之间')
        self._intensities = intensities.astype(np.int64)
        self._intensities.setflags(write=False)

    def __eq__(self, other):
        if type(other) is not type(self):
            return False
        return (self._intensities.shape == other._intensities.shape
                and bool(np.all(self._intensities == other._intensities)))

    def __ne__(self, other):
        return not self.__eq__(other)

    def __str__(self):
        return "%s: width=%d, height=%d, min=%d, max=%d" % (type(self), self.width, self.height,
                                                             self.min_value, self.max_value)

    @classmethod
    def from_file(cls, file):
        """从PGM或PNG文件创建灰度图像"""
        return cls(_read_single_channel(file))

    @classmethod
    def from_ndarray(cls, intensities):
        return cls(intensities)

    def to_file(self, file):
        _write_single_channel(self._intensities, file)

    @property
    def intensities(self):
        return self._intensities

    @property
    def width(self):
        return self._intensities.shape[1]

    @property
    def height(self):
        return self._intensities.shape[0]

    @property
    def shape(self):
        return self._intensities.shape

    @property
    def min_value(self):
        return int(self._intensities.min())

    @property
    def max_value(self):
        return int(self._intensities.max())
