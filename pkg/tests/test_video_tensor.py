import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from PIL import Image

from snowgt.errors import (
    BoundsError,
    DimensionMismatchError,
    FrameLoadError,
    InsufficientFramesError,
    ParameterError,
)
from snowgt.video_tensor import (
    VideoTensor,
    extract_slice,
    join_quadrants,
    load_frames,
    load_image,
    replace_slice,
    save_frames,
    save_image,
    slice_count,
    split_quadrants,
)


def write_png(path, array_uint8):
    Image.fromarray(array_uint8).save(path)


class TestLoadFrames:
    def test_black_frames_load_as_zeros(self, tmp_path):
        for t in range(2):
            write_png(tmp_path / f"frame_{t:06d}.png", np.zeros((4, 4), dtype=np.uint8))
        tensor = load_frames(tmp_path, channels=1)
        assert (tensor.rows, tensor.cols, tensor.frames, tensor.channels) == (4, 4, 2, 1)
        assert np.all(tensor.data == 0.0)

    def test_255_maps_to_exactly_one(self, tmp_path):
        img = np.zeros((4, 4), dtype=np.uint8)
        img[1, 2] = 255
        write_png(tmp_path / "frame_000000.png", img)
        write_png(tmp_path / "frame_000001.png", img)
        tensor = load_frames(tmp_path, channels=1)
        assert tensor.data[1, 2, 0, 0] == 1.0

    def test_mixed_dimensions_rejected(self, tmp_path):
        write_png(tmp_path / "a.png", np.zeros((4, 4), dtype=np.uint8))
        write_png(tmp_path / "b.png", np.zeros((4, 4), dtype=np.uint8))
        write_png(tmp_path / "c.png", np.zeros((5, 4), dtype=np.uint8))
        with pytest.raises(DimensionMismatchError, match="c.png"):
            load_frames(tmp_path, channels=1)

    def test_single_frame_rejected(self, tmp_path):
        write_png(tmp_path / "frame_000000.png", np.zeros((4, 4), dtype=np.uint8))
        with pytest.raises(InsufficientFramesError):
            load_frames(tmp_path, channels=1)

    def test_unreadable_file_names_the_file(self, tmp_path):
        write_png(tmp_path / "frame_000000.png", np.zeros((4, 4), dtype=np.uint8))
        (tmp_path / "frame_000001.png").write_bytes(b"not a png")
        with pytest.raises(FrameLoadError, match="frame_000001.png"):
            load_frames(tmp_path, channels=1)

    def test_lexicographic_order(self, tmp_path):
        bright = np.full((4, 4), 255, dtype=np.uint8)
        dark = np.zeros((4, 4), dtype=np.uint8)
        write_png(tmp_path / "b_second.png", bright)
        write_png(tmp_path / "a_first.png", dark)
        tensor = load_frames(tmp_path, channels=1)
        assert tensor.data[0, 0, 0, 0] == 0.0
        assert tensor.data[0, 0, 1, 0] == 1.0

    def test_round_trip_through_disk(self, tmp_path, rng):
        tensor = VideoTensor.from_array(rng.random((5, 7, 3)))
        save_frames(tensor, tmp_path / "out")
        again = load_frames(tmp_path / "out", channels=1)
        # 8-bit quantization at the file boundary
        assert np.abs(again.data - tensor.data).max() <= 0.5 / 255

    def test_color_round_trip(self, tmp_path, rng):
        tensor = VideoTensor.from_array(rng.random((5, 7, 3, 3)))
        save_frames(tensor, tmp_path / "out")
        again = load_frames(tmp_path / "out", channels=3)
        assert again.channels == 3
        assert np.abs(again.data - tensor.data).max() <= 0.5 / 255


class TestVideoTensor:
    def test_too_small_rejected(self):
        with pytest.raises(ParameterError):
            VideoTensor.from_array(np.zeros((1, 4, 4)))

    def test_non_finite_rejected(self):
        data = np.zeros((4, 4, 4))
        data[0, 0, 0] = np.nan
        with pytest.raises(ParameterError):
            VideoTensor.from_array(data)

    def test_clamped_on_ingest(self):
        data = np.full((4, 4, 4), 1.7)
        tensor = VideoTensor.from_array(data)
        assert tensor.data.max() == 1.0

    def test_immutable(self, random_tensor):
        with pytest.raises(ValueError):
            random_tensor.data[0, 0, 0, 0] = 0.5


class TestSlices:
    def test_horizontal_element_mapping(self, rng):
        tensor = VideoTensor.from_array(rng.random((4, 5, 6)))
        view = extract_slice(tensor, "horizontal", 1)
        assert view.matrix.shape == (6, 5)  # (frames, cols)
        assert view.matrix[0][2] == tensor.data[1, 2, 0, 0]

    def test_lateral_shape(self, rng):
        tensor = VideoTensor.from_array(rng.random((3, 4, 5)))
        view = extract_slice(tensor, "lateral", 0)
        assert view.matrix.shape == (5, 3)  # (frames, rows)
        assert view.matrix[2][1] == tensor.data[1, 0, 2, 0]

    def test_frontal_is_a_frame(self):
        tensor = VideoTensor.from_array(np.ones((3, 4, 5)))
        view = extract_slice(tensor, "frontal", 4)
        assert view.matrix.shape == (3, 4)
        assert np.all(view.matrix == 1.0)

    def test_matrix_is_a_copy(self, random_tensor):
        view = extract_slice(random_tensor, "horizontal", 0)
        view.matrix[0, 0] = 0.123
        assert random_tensor.data[0, 0, 0, 0] != 0.123

    def test_out_of_range_index(self, random_tensor):
        with pytest.raises(BoundsError):
            extract_slice(random_tensor, "horizontal", random_tensor.rows)
        with pytest.raises(BoundsError):
            extract_slice(random_tensor, "frontal", -1)
        with pytest.raises(BoundsError):
            extract_slice(random_tensor, "horizontal", 0, channel=1)

    @pytest.mark.parametrize("mode", ["horizontal", "lateral", "frontal"])
    def test_replace_extract_round_trip(self, random_tensor, mode):
        for index in range(slice_count(random_tensor, mode)):
            view = extract_slice(random_tensor, mode, index)
            again = replace_slice(random_tensor, view)
            assert np.array_equal(again.data, random_tensor.data)

    def test_replace_zero_row(self, random_tensor):
        view = extract_slice(random_tensor, "horizontal", 2)
        view.matrix[:] = 0.0
        out = replace_slice(random_tensor, view)
        assert np.all(out.data[2, :, :, 0] == 0.0)
        mask = np.ones(random_tensor.rows, dtype=bool)
        mask[2] = False
        assert np.array_equal(out.data[mask], random_tensor.data[mask])

    def test_replace_clamps(self, random_tensor):
        view = extract_slice(random_tensor, "horizontal", 0)
        view.matrix[:] = 1.7
        out = replace_slice(random_tensor, view)
        assert np.all(out.data[0, :, :, 0] == 1.0)

    def test_replace_shape_mismatch(self, random_tensor):
        view = extract_slice(random_tensor, "horizontal", 0)
        view.matrix = view.matrix[:, :-1]
        with pytest.raises(DimensionMismatchError):
            replace_slice(random_tensor, view)

    @pytest.mark.parametrize("mode", ["horizontal", "lateral", "frontal"])
    def test_slice_coverage_reassembles_tensor(self, rng, mode):
        tensor = VideoTensor.from_array(rng.random((4, 5, 6)))
        rebuilt = VideoTensor.from_array(np.zeros((4, 5, 6)))
        for index in range(slice_count(tensor, mode)):
            rebuilt = replace_slice(rebuilt, extract_slice(tensor, mode, index))
        assert np.array_equal(rebuilt.data, tensor.data)


class TestQuadrants:
    def test_2x2(self):
        frame = np.array([[1.0, 2.0], [3.0, 4.0]])
        tl, tr, bl, br = split_quadrants(frame)
        assert tl == np.array([[1.0]])
        assert tr == np.array([[2.0]])
        assert bl == np.array([[3.0]])
        assert br == np.array([[4.0]])

    def test_hd_frame_shapes(self):
        frame = np.zeros((1080, 1920))
        parts = split_quadrants(frame)
        assert all(p.shape == (540, 960) for p in parts)

    def test_odd_sizes_extra_to_top_left(self, rng):
        frame = rng.random((5, 4))
        tl, tr, bl, br = split_quadrants(frame)
        assert {tl.shape[0], bl.shape[0]} == {3, 2}
        assert tl.shape == (3, 2) and br.shape == (2, 2)
        assert np.array_equal(join_quadrants(tl, tr, bl, br), frame)

    def test_too_small(self):
        with pytest.raises(ParameterError):
            split_quadrants(np.zeros((1, 5)))

    @settings(max_examples=60, deadline=None)
    @given(
        m=st.integers(min_value=2, max_value=33),
        n=st.integers(min_value=2, max_value=33),
        color=st.booleans(),
        seed=st.integers(min_value=0, max_value=2**31),
    )
    def test_split_join_identity(self, m, n, color, seed):
        shape = (m, n, 3) if color else (m, n)
        frame = np.random.default_rng(seed).random(shape)
        assert np.array_equal(join_quadrants(*split_quadrants(frame)), frame)


class TestImageIO:
    def test_save_load_gray(self, tmp_path):
        img = np.linspace(0, 1, 24).reshape(4, 6)
        save_image(img, tmp_path / "x.png")
        again = load_image(tmp_path / "x.png")
        assert again.shape == (4, 6)
        assert np.abs(again - img).max() <= 0.5 / 255

    def test_save_load_color(self, tmp_path, rng):
        img = rng.random((4, 6, 3))
        save_image(img, tmp_path / "x.png")
        again = load_image(tmp_path / "x.png")
        assert again.shape == (4, 6, 3)
        assert np.abs(again - img).max() <= 0.5 / 255
