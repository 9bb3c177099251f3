import numpy as np
import pytest

from diamond_wiretap.channel import (ChannelUse, FadingState, det_output, draw_channel_use,
                                     mac_output, sample_fading)


def test_sampling_is_deterministic():
    a = sample_fading(7, L=2, M=2)
    b = sample_fading(7, L=2, M=2)
    np.testing.assert_array_equal(a.h, b.h)
    np.testing.assert_array_equal(a.g, b.g)
    assert not np.array_equal(a.h, sample_fading(8, L=2, M=2).h)


def test_support_respected_at_L4():
    f = sample_fading(0, L=4, M=2, size=100_000)
    mag = np.abs(f.h[:, 0])
    assert mag.min() >= 0.25 and mag.max() <= 4.0
    assert np.all((np.abs(f.g) >= 0.25) & (np.abs(f.g) <= 4.0))
    # both signs and most of the range get used
    assert mag.min() < 0.26 and mag.max() > 3.9
    assert 0.45 < np.mean(f.h > 0) < 0.55


def test_near_unit_support_leaves_only_signs():
    f = sample_fading(3, L=1 + 1e-9, M=3, size=50)
    np.testing.assert_allclose(np.abs(f.h), 1.0, atol=1e-8)
    np.testing.assert_allclose(np.abs(f.g), 1.0, atol=1e-8)
    assert set(np.sign(f.h).ravel()) == {-1.0, 1.0}


@pytest.mark.parametrize("L,M", [(1.0, 2), (0.5, 2), (2.0, 1)])
def test_sampling_rejects_bad_arguments(L, M):
    with pytest.raises(ValueError):
        sample_fading(0, L=L, M=M)


def test_fading_state_validation():
    with pytest.raises(ValueError):
        FadingState([3.0, 1.0], [1.0, 1.0], L=2)
    with pytest.raises(ValueError):
        FadingState([1.0, 1.0], [1.0, 1.0, 1.0], L=2)
    with pytest.raises(ValueError):
        FadingState([1.0], [1.0], L=2)
    f = FadingState([[1.0, 2.0], [0.5, -1.0]], [[1.0, 1.0], [1.0, 1.0]])
    assert f.M == 2 and len(f) == 2 and f.batch_shape == (2,)
    assert f[1].h.tolist() == [0.5, -1.0]
    f2 = f.with_g([[2.0, 2.0], [-0.5, 1.0]])
    np.testing.assert_array_equal(f2.h, f.h)
    assert f2.g[1].tolist() == [-0.5, 1.0]


def test_mac_output_examples():
    f = FadingState([2.0, 1.5], [1.0, -1.0], L=2)
    assert mac_output(f, ChannelUse(np.zeros(2), 0.3, -0.4)) == (0.3, -0.4)
    f = FadingState([2.0, 3.0], [1.0, -1.0], L=3)
    y1, _ = mac_output(f, ChannelUse(np.array([1.0, 1.0]), 0.0, 0.0))
    assert y1 == 5.0
    _, y2 = mac_output(f, ChannelUse(np.array([3.0, 3.0]), 0.0, 0.5))
    assert y2 == 0.5
    with pytest.raises(ValueError):
        mac_output(f, ChannelUse(np.zeros(3), 0.0, 0.0))


def test_mac_output_with_drawn_noise_is_reproducible():
    f = sample_fading(1)
    u = draw_channel_use([1.0, -1.0], 5)
    assert mac_output(f, u) == mac_output(f, draw_channel_use([1.0, -1.0], 5))


def test_det_output_examples():
    f = FadingState([1.5, 2.3], [1.0, 1.0], L=3)
    assert det_output(f, [0, 0], 9) == (0, 0)
    assert det_output(f, [2, 1], 9)[0] == 5
    with pytest.raises(ValueError):
        det_output(f, [4, 0], 9)
    with pytest.raises(ValueError):
        det_output(f, [0.5, 0], 9)
