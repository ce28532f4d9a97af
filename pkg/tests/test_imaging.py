import os

import numpy as np
import pytest
from PIL import Image as PilImage

from classifier_distance_probes.imaging import (Image, AugmentationSpec, CropSpec, center_crop, center_crop_pixels,
                                                random_crop, random_crop_pixels, horizontal_flip, pad,
                                                resize_bilinear, resize_shorter_side, augment, augment_batch,
                                                load_image, save_image, read_ntf, write_ntf, read_ntf_tensor,
                                                load_split, write_split, list_distributions, stack_images)
from classifier_distance_probes.numerics import RngStream
from classifier_distance_probes.shared.errors import (BoundsError, ContractError, DataError, FormatError,
                                                      ImageIOError, SpecError)


class TestImage:

    def test_two_dimensional_pixels_gain_a_channel(self):
        image = Image(np.zeros((4, 5)))
        assert image.shape == (1, 4, 5)
        assert not image.pixels.flags.writeable

    def test_out_of_range_clamped_image_rejected(self):
        with pytest.raises(ContractError) as exc_info:
            Image(np.full((1, 2, 2), 1.5))
        assert 'outside [0,1]' in str(exc_info.value)
        assert Image(np.full((1, 2, 2), 1.5), clamped=False).pixels.max() == 1.5

    def test_channel_count_checked(self):
        with pytest.raises(ContractError):
            Image(np.zeros((2, 4, 4)))


class TestTransforms:

    def setup_class(self):
        self.image = Image(np.arange(3 * 6 * 8, dtype=np.float64).reshape(3, 6, 8) / 144.0)

    def test_center_crop_corner(self):
        cropped = center_crop(self.image, 4)
        assert cropped.shape == (3, 4, 4)
        assert np.array_equal(cropped.pixels, self.image.pixels[:, 1:5, 2:6])

    def test_full_size_crop_is_identity(self):
        square = Image(self.image.pixels[:, :, :6])
        assert np.array_equal(center_crop(square, 6).pixels, square.pixels)

    def test_crop_too_large(self):
        with pytest.raises(BoundsError) as exc_info:
            center_crop(self.image, 7)
        assert '7' in str(exc_info.value)

    def test_random_crop_is_a_window_and_reproducible(self):
        first = random_crop(self.image, 3, RngStream(5))
        second = random_crop(self.image, 3, RngStream(5))
        assert np.array_equal(first.pixels, second.pixels)
        found = False
        for top in range(4):
            for left in range(6):
                if np.array_equal(self.image.pixels[:, top:top + 3, left:left + 3], first.pixels):
                    found = True
        assert found

    def test_random_crop_batch_draws_one_corner_per_image(self):
        batch = np.stack([self.image.pixels] * 50)
        crops = random_crop_pixels(batch, 2, RngStream(9))
        assert crops.shape == (50, 3, 2, 2)
        assert len({crop.tobytes() for crop in crops}) > 1

    def test_random_crop_corners_are_uniform(self):
        n = 10000
        board = np.arange(16, dtype=np.float64).reshape(1, 1, 4, 4) / 15.0
        crops = random_crop_pixels(np.repeat(board, n, axis=0), 3, RngStream(12))
        corners = np.rint(crops[:, 0, 0, 0] * 15.0).astype(np.int64)
        frequencies = np.bincount(corners, minlength=16)[[0, 1, 4, 5]] / n
        assert frequencies.sum() == 1.0
        sigma = np.sqrt(0.25 * 0.75 / n)
        assert np.all(np.abs(frequencies - 0.25) <= 3 * sigma)

    def test_checkerboard_survives_up_and_down_resize(self):
        checkerboard = Image(np.array([[[1.0, 0.0], [0.0, 1.0]]]))
        restored = resize_bilinear(resize_bilinear(checkerboard, 4, 4), 2, 2)
        assert restored.pixels[0, 0, 0] == pytest.approx(0.875 ** 2 + 0.125 ** 2)
        assert np.max(np.abs(restored.pixels - checkerboard.pixels)) <= 0.3

    def test_flip_and_pad(self):
        flipped = horizontal_flip(self.image)
        assert np.array_equal(flipped.pixels[..., 0], self.image.pixels[..., -1])
        assert np.array_equal(horizontal_flip(flipped).pixels, self.image.pixels)
        padded = pad(self.image, 2)
        assert padded.shape == (3, 10, 12)
        assert padded.pixels[:, :2].sum() == 0.0
        assert np.array_equal(padded.pixels[:, 2:-2, 2:-2], self.image.pixels)

    def test_resize_keeps_constants_and_identity(self):
        constant = Image(np.full((1, 5, 7), 0.3))
        assert np.allclose(resize_bilinear(constant, 9, 4).pixels, 0.3)
        assert np.allclose(resize_bilinear(self.image, 6, 8).pixels, self.image.pixels)

    def test_resize_shorter_side(self):
        assert resize_shorter_side(self.image, 3).shape == (3, 3, 4)
        tall = Image(np.zeros((1, 10, 4)))
        assert resize_shorter_side(tall, 2).shape == (1, 5, 2)

    def test_augment_is_deterministic_per_stream(self):
        spec = AugmentationSpec(crop_pad=1, crop_size=6, horizontal_flip_prob=0.5)
        first = augment(self.image, spec, RngStream(2))
        second = augment(self.image, spec, RngStream(2))
        assert first.shape == (3, 6, 6)
        assert np.array_equal(first.pixels, second.pixels)

    def test_augment_batch_flip_probability_one(self):
        spec = AugmentationSpec(horizontal_flip_prob=1.0)
        batch = self.image.pixels[None]
        assert np.array_equal(augment_batch(batch, spec, RngStream(0))[0], self.image.pixels[..., ::-1])

    def test_identity_augmentation(self):
        spec = AugmentationSpec()
        assert spec.is_identity
        assert spec.describe() == 'none'
        assert AugmentationSpec(crop_pad=4, crop_size=32, horizontal_flip_prob=0.5).describe() == 'pad4-crop32+hflip0.5'

    def test_spec_validation(self):
        with pytest.raises(SpecError):
            AugmentationSpec(horizontal_flip_prob=1.5)
        with pytest.raises(SpecError):
            CropSpec('diagonal', 4)
        assert CropSpec('center', 4).describe() == 'center_crop:4'


class TestImageIO:

    def test_ntf_round_trip_is_exact_for_float32_values(self, tmp_path):
        pixels = RngStream(1).random((3, 4, 4)).astype(np.float32).astype(np.float64)
        path = str(tmp_path / 'x.ntf')
        save_image(Image(pixels), path)
        loaded = load_image(path)
        assert np.array_equal(loaded.pixels, pixels)
        assert loaded.clamped

    def test_ntf_keeps_out_of_range_values(self, tmp_path):
        path = str(tmp_path / 'x.ntf')
        write_ntf(np.array([[[-0.5, 2.0]]]), path)
        image = read_ntf(path)
        assert not image.clamped
        assert image.pixels.min() == -0.5

    def test_ntf_header_layout(self, tmp_path):
        path = str(tmp_path / 't.ntf')
        write_ntf(np.zeros((2, 3)), path)
        with open(path, 'rb') as handle:
            payload = handle.read()
        assert payload[:4] == b'NTF1'
        assert len(payload) == 4 + 4 + 2 * 4 + 6 * 4
        assert read_ntf_tensor(path).shape == (2, 3)

    def test_ntf_truncated_payload(self, tmp_path):
        path = str(tmp_path / 't.ntf')
        write_ntf(np.zeros((2, 3)), path)
        with open(path, 'rb') as handle:
            payload = handle.read()
        with open(path, 'wb') as handle:
            handle.write(payload[:-4])
        with pytest.raises(FormatError) as exc_info:
            read_ntf_tensor(path)
        assert 'expected' in str(exc_info.value)

    def test_png_quantization(self, tmp_path):
        pixels = RngStream(2).random((3, 5, 6))
        path = str(tmp_path / 'x.png')
        save_image(Image(pixels), path)
        loaded = load_image(path)
        assert loaded.shape == (3, 5, 6)
        assert np.max(np.abs(loaded.pixels - pixels)) <= 0.5 / 255 + 1e-12

    def test_grayscale_png(self, tmp_path):
        path = str(tmp_path / 'g.png')
        PilImage.fromarray(np.array([[0, 255], [51, 102]], dtype=np.uint8)).save(path)
        loaded = load_image(path)
        assert loaded.shape == (1, 2, 2)
        assert loaded.pixels[0, 1, 0] == pytest.approx(0.2)

    def test_unsupported_png_mode(self, tmp_path):
        path = str(tmp_path / 'p.png')
        PilImage.new('RGBA', (2, 2)).save(path)
        with pytest.raises(FormatError) as exc_info:
            load_image(path)
        assert 'RGBA' in str(exc_info.value)

    def test_unsupported_extension_and_missing_file(self, tmp_path):
        with pytest.raises(FormatError):
            load_image(str(tmp_path / 'x.jpg'))
        with pytest.raises(ImageIOError) as exc_info:
            load_image(str(tmp_path / 'missing.png'))
        assert isinstance(exc_info.value, OSError)
        assert exc_info.value.path.endswith('missing.png')


class TestDatasets:

    def test_write_then_load_preserves_order(self, tmp_path):
        images = [Image(np.full((1, 4, 4), i / 16.0)) for i in range(12)]
        write_split(str(tmp_path), 'real', 'train', images)
        loaded = load_split(str(tmp_path), 'real', 'train')
        assert [image.pixels[0, 0, 0] for image in loaded] == [image.pixels[0, 0, 0] for image in images]
        assert sorted(os.listdir(tmp_path / 'real' / 'train'))[0] == '00000.ntf'
        assert list_distributions(str(tmp_path)) == ['real']
        assert stack_images(loaded).shape == (12, 1, 4, 4)

    def test_mixed_shapes_rejected(self, tmp_path):
        write_split(str(tmp_path), 'a', 'val', [Image(np.zeros((1, 4, 4)))])
        save_image(Image(np.zeros((1, 5, 5))), str(tmp_path / 'a' / 'val' / '00001.ntf'))
        with pytest.raises(DataError) as exc_info:
            load_split(str(tmp_path), 'a', 'val')
        assert 'mixed shapes' in str(exc_info.value)

    def test_missing_and_unknown_splits(self, tmp_path):
        with pytest.raises(DataError):
            load_split(str(tmp_path), 'nothing', 'train')
        with pytest.raises(DataError):
            load_split(str(tmp_path), 'nothing', 'test')
