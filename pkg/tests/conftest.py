import numpy as np
import pytest
from scipy import ndimage

from shapesuite.data_utils.region import Region


def make_blob(rng, size=14, fill=0.55):
    """随机二值图中最大的8连通分量"""
    while True:
        noise = rng.random((size, size)) < fill
        labeled, count = ndimage.label(noise, structure=np.ones((3, 3), dtype=bool))
        if count == 0:
            continue
        sizes = np.bincount(labeled.ravel())[1:]
        blob = labeled == (int(np.argmax(sizes)) + 1)
        if blob.sum() >= 4:
            return blob


@pytest.fixture
def rng():
    return np.random.default_rng(20221019)


@pytest.fixture
def blobs():
    rng = np.random.default_rng(7)
    return [make_blob(rng) for _ in range(50)]


@pytest.fixture
def region_of():
    def build(mask, label=1, region_connectivity=8):
        return Region.from_mask(label, np.asarray(mask, dtype=bool), region_connectivity=region_connectivity)
    return build


@pytest.fixture
def donut_3x3():
    mask = np.ones((3, 3), dtype=bool)
    mask[1, 1] = False
    return mask


@pytest.fixture
def disk_mask():
    def build(radius):
        yy, xx = np.mgrid[-radius:radius + 1, -radius:radius + 1]
        return yy ** 2 + xx ** 2 <= radius ** 2
    return build
