import math

import pytest

from bihole_lab.coupon import CouponStats, coupon_sim, expected_T, harmonic


def test_single_color():
    s = coupon_sim(1, 1, 500, 0)
    assert s.mean_T == 1.0 and s.var_T == 0.0 and s.p_hat == 1.0


def test_q2_mean():
    s = coupon_sim(2, 64, 100000, 1)
    assert abs(s.mean_T - 3.0) <= 0.05 * 3.0
    assert s.p_hat == 1.0


def test_expected_values():
    assert harmonic(1) == 1.0
    assert expected_T(2) == 3.0
    assert expected_T(20) == pytest.approx(71.9548, abs=1e-4)


def test_q20_moments():
    s = coupon_sim(20, 64, 20000, 2)
    exact_var = 20 ** 2 * sum(1 / k ** 2 for k in range(1, 21)) - expected_T(20)
    assert abs(s.mean_T - expected_T(20)) < 5 * math.sqrt(exact_var / 20000)
    assert s.var_T < 2 * 20 ** 2
    assert 0.0 < s.p_hat < 1.0


def test_p_hat_monotone_in_delta():
    a = coupon_sim(10, 20, 5000, 3)
    b = coupon_sim(10, 40, 5000, 3)
    assert a.mean_T == b.mean_T and a.p_hat <= b.p_hat
    assert coupon_sim(10, 9, 1000, 3).p_hat == 0.0


def test_deterministic_and_single_trial():
    assert coupon_sim(7, 10, 300, 5) == coupon_sim(7, 10, 300, 5)
    s = coupon_sim(3, 5, 1, 0)
    assert s.trials == 1 and s.var_T == 0.0


def test_validation():
    for args in [(0, 1, 1, 0), (2, 1, 0, 0), (2, -1, 1, 0)]:
        with pytest.raises(ValueError):
            coupon_sim(*args)


def test_to_dict():
    s = CouponStats(2, 3, 4, 0.5, 3.0, 2.0)
    assert s.to_dict() == {"q": 2, "delta": 3, "trials": 4, "p_hat": 0.5, "mean_T": 3.0, "var_T": 2.0}
