import math
from dataclasses import replace

import numpy as np
import pytest

from shapesuite.data_utils.image import GrayImage
from shapesuite.featurizer.config import (FuzzyRectConfig, StraightnessConfig, pi_membership, s_membership,
                                          triangle_membership, z_membership)
from shapesuite.featurizer.descriptors import (combine_connectivity, convexity, elongatedness_nm_ratio,
                                               elongatedness_ratio, fuzzy_rectangularity, interior_angles,
                                               StraightnessResult, roundness, simple_connectivity,
                                               straightness, straightness_at_scale)
from shapesuite.featurizer.shape_featurizer import (CSV_COLUMNS, AUX_COLUMNS, FeatureVector, ShapeFeaturizer,
                                                    compute_features)
from shapesuite.geometry.contour import PolyChain, convex_hull, discretize_hull_area
from shapesuite.morphology.profile import dmp, multiscale_characteristic


def _hull(region):
    hull = convex_hull(region.outer_boundary)
    return replace(hull, a_convex=discretize_hull_area(hull))


def _square_with_hole(side=9, hole=3):
    mask = np.ones((side, side), dtype=bool)
    top = (side - hole) // 2
    mask[top:top + hole, top:top + hole] = False
    return mask


@pytest.mark.parametrize('n', [1, 2, 3, 7, 16, 64])
def test_square_roundness_is_one(region_of, n):
    assert roundness(region_of(np.ones((n, n)))) == pytest.approx(1.0)


def test_roundness_anchors(region_of):
    # 1x4: 4*sqrt(4)/10
    assert roundness(region_of(np.ones((1, 4)))) == pytest.approx(0.8)
    assert roundness(region_of(np.ones((1, 40)))) < 0.5


def test_convexity(region_of, donut_3x3):
    assert convexity(region_of(np.ones((5, 7))), _hull(region_of(np.ones((5, 7))))) == 1.0
    donut = region_of(donut_3x3)
    assert convexity(donut, _hull(donut)) == pytest.approx(8.0 / 9.0)
    ell = np.zeros((6, 6), dtype=bool)
    ell[:, :2] = True
    ell[4:, :] = True
    ell_region = region_of(ell)
    assert 0.0 < convexity(ell_region, _hull(ell_region)) < 0.8


@pytest.mark.parametrize('mask', [np.ones((1, 6)), np.ones((6, 1)), np.eye(6), np.fliplr(np.eye(6))])
def test_straight_lines_are_convex(region_of, mask):
    region = region_of(mask)
    assert convexity(region, _hull(region)) == 1.0
    assert compute_features(region).cnvxty_and_no_hole == 1.0


def test_simple_connectivity(region_of, donut_3x3):
    assert simple_connectivity(region_of(np.ones((4, 4)))) == (1.0, 1.0, 1.0)
    term1, term2, combined = simple_connectivity(region_of(donut_3x3))
    assert term1 == pytest.approx(0.75)
    assert term2 == pytest.approx(8.0 / 9.0)
    assert combined == pytest.approx(0.75)
    assert combine_connectivity(0.3, 0.9) == 0.3


def test_hole_lowers_descriptors(region_of):
    solid = compute_features(region_of(np.ones((9, 9))))
    holed = compute_features(region_of(_square_with_hole()))
    assert holed.cnvxty_and_no_hole < solid.cnvxty_and_no_hole
    assert holed.rndnss_and_no_hole < solid.rndnss_and_no_hole
    assert holed.combnd_smpl_cnctvty < solid.combnd_smpl_cnctvty
    assert holed.rndnss_and_no_hole == pytest.approx(4.0 * math.sqrt(72) / 48)


def test_elongatedness_ratio_anchors():
    value, flags = elongatedness_ratio(16, 4.1)
    assert round(value, 1) == 3.9
    assert flags == ()
    assert elongatedness_ratio(3, 10) == (1.0, ('elongatedness_floored',))
    assert elongatedness_nm_ratio(8, 3) == pytest.approx(8.0 / 3.0)
    # 参照值不截断
    assert elongatedness_nm_ratio(1, 10) == pytest.approx(0.1)
    with pytest.raises(ValueError):
        elongatedness_ratio(4, 0)


def test_long_rectangle_is_straight(region_of):
    result = straightness(region_of(np.ones((10, 200))).outer_boundary)
    assert result.per_scale[4] >= 0.9
    assert all(result.value >= v for v in result.per_scale.values())
    assert result.per_scale[result.best_scale] == result.value


def test_disk_is_less_straight_than_rectangle(region_of, disk_mask):
    rectangle = straightness(region_of(np.ones((20, 40))).outer_boundary).value
    disk = straightness(region_of(disk_mask(12)).outer_boundary).value
    assert rectangle - disk >= 0.1


def test_straightness_skips_short_boundaries(region_of):
    square = straightness(region_of(np.ones((2, 2))).outer_boundary)
    assert set(square.per_scale) == {1}
    point = straightness(region_of(np.ones((1, 1))).outer_boundary)
    assert point.value == 0.0
    assert 'straightness_undefined' in point.flags


def test_straightness_at_scale_on_line():
    positions = np.array([(0, c) for c in range(10)] + [(1, c) for c in range(9, -1, -1)], dtype=np.float64)
    # 只有四个拐角处的点不直
    assert straightness_at_scale(positions, 1, 15.0) == pytest.approx(16.0 / 20.0)


def test_interior_angles():
    square = PolyChain(((0, 0), (0, 4), (4, 4), (4, 0)), closed=True)
    np.testing.assert_allclose(interior_angles(square), [90.0] * 4)
    np.testing.assert_allclose(interior_angles(PolyChain(square.vertices[::-1], closed=True)), [90.0] * 4)
    ell = PolyChain(((0, 0), (0, 2), (1, 2), (1, 1), (2, 1), (2, 0)), closed=True)
    angles = interior_angles(ell)
    assert angles.sum() == pytest.approx(720.0)
    assert sorted(angles)[-1] == pytest.approx(270.0)


def test_rectangle_is_fuzzy_rectangular(region_of):
    result = fuzzy_rectangularity(region_of(np.ones((20, 40))).outer_boundary)
    assert result.value >= 0.95
    assert len(result.polygon) == 4


def test_disk_is_not_fuzzy_rectangular(region_of, disk_mask):
    boundary = region_of(disk_mask(20)).outer_boundary
    fine = StraightnessResult(per_scale={1: 0.5}, value=0.5, best_scale=1)
    result = fuzzy_rectangularity(boundary, straightness_result=fine)
    assert len(result.polygon) > 6
    assert result.value <= 0.1


def test_bar_polygon_is_degenerate(region_of):
    result = fuzzy_rectangularity(region_of(np.ones((1, 9))).outer_boundary)
    assert result.value == 0.0
    assert 'polygon_degenerate' in result.flags


def test_membership_functions():
    assert float(s_membership(135.0, 125.0, 145.0)) == pytest.approx(0.5)
    assert float(s_membership(100.0, 125.0, 145.0)) == 0.0
    assert float(z_membership(30.0, 35.0, 55.0)) == 1.0
    np.testing.assert_allclose(pi_membership([45, 50, 55, 90, 125, 130], 60, 120, 10),
                               [0.0, 0.0, 0.5, 1.0, 0.5, 0.0])
    assert float(triangle_membership(4, 4, 2)) == 1.0
    assert float(triangle_membership(3, 4, 2)) == pytest.approx(0.5)


def test_config_validation():
    with pytest.raises(ValueError):
        StraightnessConfig(scales=(2, 1))
    with pytest.raises(ValueError):
        StraightnessConfig(scales=(0, 1))
    with pytest.raises(ValueError):
        StraightnessConfig(angle_threshold_deg=0)
    with pytest.raises(ValueError):
        FuzzyRectConfig(right_angle_band=(95.0, 120.0))
    with pytest.raises(ValueError):
        FuzzyRectConfig(separation_min=-1)
    assert StraightnessConfig(scales=[1, 3]).scales == (1, 3)


def test_descriptor_ranges(region_of, blobs):
    for blob in blobs:
        features = compute_features(region_of(blob))
        for name in ('cnvxty_and_no_hole', 'fuzzy_rule_bsd_rctnglrty', 'rndnss_and_no_hole',
                     'mlt_scl_strghtns_of_bndrs', 'smpl_cnctvty_4adjncy', 'filled_area_ratio',
                     'combnd_smpl_cnctvty', 'mer_rectangularity'):
            assert 0.0 <= getattr(features, name) <= 1.0, name
        assert features.elngtdnss_and_no_hole >= 1.0
        assert features.elngtdnss_nm > 0.0
        assert 0.0 <= features.mer_angle_deg < 180.0
        assert features.mer_l >= features.mer_w
        assert features.dmp_mlt_scl_chrctrstc is None


def test_small_square_features(region_of):
    features = compute_features(region_of(np.ones((5, 5))))
    assert features.area == 25
    assert features.rndnss_and_no_hole == pytest.approx(1.0)
    assert features.cnvxty_and_no_hole == pytest.approx(1.0)
    assert features.combnd_smpl_cnctvty == 1.0
    assert (features.mer_l, features.mer_w) == (5.0, 5.0)
    assert 'mer_square_tie' in features.flags
    assert 1.0 <= features.elngtdnss_and_no_hole < 5.0
    assert 'no_gray_image' in features.flags


def test_gray_companions(region_of):
    mask = np.zeros((5, 5), dtype=bool)
    mask[1:4, 1:4] = True
    gray = np.where(mask, 200, 50).astype(np.int64)
    features = ShapeFeaturizer().featurize(region_of(mask), gray=gray)
    assert features.mean_intensity == pytest.approx(200.0)
    assert features.boundary_contrast == pytest.approx(150.0)
    assert 'no_gray_image' not in features.flags


def test_gray_image_alone_fills_dmp(region_of):
    mask = np.zeros((20, 20), dtype=bool)
    mask[8:13, 8:13] = True
    gray = GrayImage(np.where(mask, 200, 40).astype(np.uint8))
    region = region_of(mask)
    features = compute_features(region, gray=gray)
    assert features.dmp_mlt_scl_chrctrstc is not None
    assert features.dmp_mlt_scl_chrctrstc > 0
    assert 'no_gray_image' not in features.flags
    cmap = multiscale_characteristic(dmp(gray, 4))
    assert features.dmp_mlt_scl_chrctrstc == compute_features(region, gray=gray, cmap=cmap).dmp_mlt_scl_chrctrstc


def test_featurize_rejects_non_region():
    with pytest.raises(TypeError):
        ShapeFeaturizer().featurize(np.ones((3, 3), dtype=bool))
    with pytest.raises(ValueError):
        ShapeFeaturizer(skeleton_filter=-1.0)


def test_to_row(region_of):
    features = compute_features(region_of(np.ones((4, 4))))
    row = features.to_row()
    assert len(row) == len(CSV_COLUMNS) + len(AUX_COLUMNS)
    assert row[:2] == ['1', '16']
    assert row[CSV_COLUMNS.index('dmp_mlt_scl_chrctrstc')] == ''
    assert 'no_gray_image' in row[CSV_COLUMNS.index('flags')].split(';')
    coded = features.to_row(byte_code=True)
    assert coded[CSV_COLUMNS.index('rndnss_and_no_hole')] == '255'
    assert coded[CSV_COLUMNS.index('mer_l')] == row[CSV_COLUMNS.index('mer_l')]


def test_to_row_writes_nan_as_empty():
    vector = FeatureVector(label=3, area=0, mer_angle_deg=float('nan'), mer_w=float('nan'),
                           mer_l=float('nan'), cnvxty_and_no_hole=float('nan'),
                           fuzzy_rule_bsd_rctnglrty=float('nan'), rndnss_and_no_hole=float('nan'),
                           mlt_scl_strghtns_of_bndrs=float('nan'), dmp_mlt_scl_chrctrstc=None,
                           elngtdnss_and_no_hole=float('nan'), elngtdnss_nm=float('nan'),
                           smpl_cnctvty_4adjncy=float('nan'), filled_area_ratio=float('nan'),
                           combnd_smpl_cnctvty=float('nan'), mer_rectangularity=float('nan'),
                           flags=('region_failed',))
    row = vector.to_row(byte_code=True)
    assert row[0] == '3'
    assert set(row[2:CSV_COLUMNS.index('flags')]) == {''}
    assert row[CSV_COLUMNS.index('flags')] == 'region_failed'


def test_bar_elongatedness(region_of):
    features = compute_features(region_of(np.ones((3, 30))))
    assert 8.0 <= features.elngtdnss_and_no_hole <= 12.0
    assert elongatedness_ratio(12, 3) == (4.0, ())


@pytest.mark.parametrize('side', range(5, 16))
def test_hole_does_not_lower_elongatedness(region_of, side):
    solid = compute_features(region_of(np.ones((side, side))))
    holed = compute_features(region_of(_square_with_hole(side)))
    assert holed.elngtdnss_and_no_hole >= solid.elngtdnss_and_no_hole
