import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from facepulse.errors import FormatError, NoFaceError, RoiOutOfBoundsError
from facepulse.landmarks import FOREHEAD_CENTER, LEFT_CHEEK, RIGHT_CHEEK, LandmarkSet
from facepulse.roi import Region, RoiConfig, RoiSelection, crop_mean_rgb, select_roi

from support import make_landmarks

FRAME_W, FRAME_H = 640, 480


def selection_for(visible: bool, yaw: float) -> Region:
    lms = make_landmarks(occluded_forehead=not visible)
    return select_roi(lms, yaw, FRAME_W, FRAME_H).region


class TestSelectRoi:
    @pytest.mark.parametrize(
        "visible,yaw,expected",
        [
            (True, -20.0, Region.FOREHEAD),
            (True, 0.0, Region.FOREHEAD),
            (True, 20.0, Region.FOREHEAD),
            (False, -20.0, Region.LEFT_CHEEK),
            (False, 0.0, Region.LEFT_CHEEK),
            (False, 20.0, Region.RIGHT_CHEEK),
        ],
    )
    def test_selection_truth_table(self, visible, yaw, expected):
        assert selection_for(visible, yaw) == expected

    def test_visibility_dominates_at_high_yaw(self):
        assert selection_for(True, 30.0) == Region.FOREHEAD

    def test_threshold_is_strict(self):
        # at exactly the threshold the left cheek still wins
        assert selection_for(False, 15.0) == Region.LEFT_CHEEK
        assert selection_for(False, 15.0001) == Region.RIGHT_CHEEK

    def test_forehead_wins_for_any_yaw_when_visible(self):
        for yaw in np.linspace(-89.0, 89.0, 37):
            assert selection_for(True, float(yaw)) == Region.FOREHEAD

    def test_region_landmark_mapping(self):
        lms = make_landmarks()
        sel = select_roi(lms, 0.0, FRAME_W, FRAME_H)
        assert sel.region == Region.FOREHEAD and sel.center_landmark == FOREHEAD_CENTER
        lms = make_landmarks(occluded_forehead=True)
        assert select_roi(lms, 0.0, FRAME_W, FRAME_H).center_landmark == LEFT_CHEEK
        assert select_roi(lms, 20.0, FRAME_W, FRAME_H).center_landmark == RIGHT_CHEEK

    def test_rect_size_and_containment(self):
        sel = select_roi(make_landmarks(), 0.0, FRAME_W, FRAME_H, RoiConfig(roi_size=56))
        x0, y0, w, h = sel.rect
        assert (w, h) == (56, 56)
        assert 0 <= x0 and x0 + w <= FRAME_W and 0 <= y0 and y0 + h <= FRAME_H

    def test_fallback_cheek_out_of_frame_raises(self):
        lms = make_landmarks(occluded_forehead=True, left_cheek=(0.005, 0.5, 0.0))
        with pytest.raises(RoiOutOfBoundsError):
            select_roi(lms, 0.0, FRAME_W, FRAME_H)

    def test_no_face_raises(self):
        lms = LandmarkSet(0, 0.0, np.empty((0, 3)), False)
        with pytest.raises(NoFaceError):
            select_roi(lms, 0.0, FRAME_W, FRAME_H)

    def test_deterministic(self):
        lms = make_landmarks(occluded_forehead=True)
        first = select_roi(lms, 17.0, FRAME_W, FRAME_H)
        assert first == select_roi(lms, 17.0, FRAME_W, FRAME_H)


def square_roi(x0=0, y0=0, size=40, region=Region.FOREHEAD):
    return RoiSelection(region=region, rect=(x0, y0, size, size), center_landmark=FOREHEAD_CENTER)


class TestCropMeanRgb:
    def test_uniform_patch(self):
        frame = np.zeros((100, 100, 3), dtype=np.uint8)
        frame[:, :] = (100, 150, 200)
        s = crop_mean_rgb(frame, square_roi(10, 10), 0.5)
        assert (s.r, s.g, s.b) == (100.0, 150.0, 200.0)
        assert s.timestamp_s == 0.5 and s.region == Region.FOREHEAD

    def test_checkerboard_average(self):
        frame = np.zeros((40, 40, 3), dtype=np.uint8)
        idx = np.add.outer(np.arange(40), np.arange(40)) % 2 == 0
        frame[idx] = 255
        s = crop_mean_rgb(frame, square_roi(0, 0, 40), 0.0)
        assert (s.r, s.g, s.b) == (127.5, 127.5, 127.5)

    def test_small_patch_matches_direct_sum(self):
        frame = np.zeros((2, 2, 3), dtype=np.float64)
        frame[..., 0] = [[10, 20], [30, 40]]
        roi = square_roi(0, 0, 2)
        s = crop_mean_rgb(frame, roi, 0.0)
        assert s.r == (10 + 20 + 30 + 40) / 4.0

    def test_dimension_mismatch_raises(self):
        with pytest.raises(FormatError):
            crop_mean_rgb(np.zeros((10, 10)), square_roi(0, 0, 4), 0.0)
        with pytest.raises(FormatError):
            crop_mean_rgb(np.zeros((10, 10, 3), dtype=np.uint8), square_roi(0, 0, 40), 0.0)

    @given(seed=st.integers(0, 2**31 - 1))
    @settings(max_examples=50, deadline=None)
    def test_permutation_invariance(self, seed):
        rng = np.random.default_rng(seed)
        patch = rng.integers(0, 256, size=(8, 8, 3), dtype=np.uint8)
        shuffled = patch.reshape(-1, 3).copy()
        rng.shuffle(shuffled, axis=0)
        a = crop_mean_rgb(patch, square_roi(0, 0, 8), 0.0)
        b = crop_mean_rgb(shuffled.reshape(8, 8, 3), square_roi(0, 0, 8), 0.0)
        assert (a.r, a.g, a.b) == pytest.approx((b.r, b.g, b.b), abs=1e-12)
