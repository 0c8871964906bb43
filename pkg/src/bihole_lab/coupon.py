"""Monte Carlo for the coupon-collector time ``T``.

``T`` is the number of uniform draws from ``q`` colours until every colour
has appeared.  A right vertex of degree ``d`` whose neighbours carry
independent uniform colours has an empty list exactly when ``T <= d``, so
``p_hat`` predicts the fraction of uncoloured vertices in phase 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels


@dataclass(frozen=True)
class CouponStats:
    q: int
    delta: int
    trials: int
    p_hat: float      # empirical P[T <= delta]
    mean_T: float
    var_T: float      # unbiased (ddof=1); 0.0 for a single trial

    def to_dict(self) -> dict:
        return {"q": self.q, "delta": self.delta, "trials": self.trials,
                "p_hat": self.p_hat, "mean_T": self.mean_T, "var_T": self.var_T}


def harmonic(q: int) -> float:
    return sum(1.0 / k for k in range(1, q + 1))


def expected_T(q: int) -> float:
    return q * harmonic(q)


def coupon_sim(q: int, delta: int, trials: int, seed: int) -> CouponStats:
    if q < 1:
        raise ValueError("q must be positive")
    if trials < 1:
        raise ValueError("trials must be positive")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    T = kernels.coupon_times(q, trials, seed)
    var = float(T.var(ddof=1)) if trials > 1 else 0.0
    return CouponStats(q, delta, trials, float(np.mean(T <= delta)), float(T.mean()), var)
