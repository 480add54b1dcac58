import numpy as np

from entgeo.rng import SplitMix64


def test_reference_output():
    assert int(SplitMix64(1234567).next_u64(1)[0]) == 0x599ED017FB08FC85


def test_streams_are_deterministic():
    a = SplitMix64(42).normal(100)
    b = SplitMix64(42).normal(100)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, SplitMix64(43).normal(100))


def test_uniform_range_and_moments():
    u = SplitMix64(7).uniform(20000)
    assert u.min() >= 0.0 and u.max() < 1.0
    assert abs(u.mean() - 0.5) < 0.01


def test_normal_moments():
    x = SplitMix64(9).normal(20000)
    assert abs(x.mean()) < 0.03
    assert abs(x.var() - 1.0) < 0.05


def test_complex_normal_shape_and_variance():
    z = SplitMix64(11).complex_normal((100, 50))
    assert z.shape == (100, 50)
    assert abs(np.mean(np.abs(z) ** 2) - 1.0) < 0.05
