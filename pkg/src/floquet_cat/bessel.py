"""Bessel functions of the first kind, evaluated in-repo.

Two regimes: the ascending power series where it is numerically benign,
and Miller's backward recurrence (normalized with J0 + 2*sum J_{2k} = 1)
for larger arguments where the alternating series cancels catastrophically.
"""

import math

from .errors import InvalidDimensionError

MAX_ORDER = 64
MAX_ARG = 50.0

# Ascending series is safe while the largest term stays small enough that
# float64 rounding keeps the absolute error below ~1e-13.
_SERIES_ARG_CUTOFF = 10.0


def _series(order: int, x: float) -> float:
    half = 0.5 * x
    term = half**order / math.factorial(order)
    total = term
    k = 0
    while True:
        k += 1
        term *= -(half * half) / (k * (order + k))
        total += term
        if abs(term) < 1e-17 * (1.0 + abs(total)) and k > 4:
            return total


def _backward_recurrence(order: int, x: float) -> float:
    # Start high enough above both the order and the turning point |x|.
    m = max(order, int(x)) + int(math.sqrt(40.0 * max(order, int(x), 1))) + 12
    if m % 2:
        m += 1
    jp, j = 0.0, 1e-300
    norm = 0.0
    result = 0.0
    for k in range(m, 0, -1):
        jm = (2.0 * k / x) * j - jp
        jp, j = j, jm
        if k - 1 == order:
            result = j
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * j
        # Rescale to avoid overflow of the unnormalized recurrence.
        if abs(j) > 1e250:
            j *= 1e-250
            jp *= 1e-250
            norm *= 1e-250
            result *= 1e-250
    norm += j  # J0 contribution (the k-1 == 0 value is the final j)
    return result / norm


def bessel_j(order: int, x: float) -> float:
    """J_order(x) for 0 <= order <= 64 and |x| <= 50, abs error < 1e-12."""
    if not isinstance(order, (int,)) or order < 0 or order > MAX_ORDER:
        raise InvalidDimensionError(f"Bessel order must be in [0, {MAX_ORDER}], got {order!r}")
    if not math.isfinite(x) or abs(x) > MAX_ARG:
        raise InvalidDimensionError(f"Bessel argument must satisfy |x| <= {MAX_ARG}, got {x!r}")
    sign = 1.0
    if x < 0.0:
        # J_n(-x) = (-1)^n J_n(x)
        x = -x
        sign = -1.0 if order % 2 else 1.0
    if x == 0.0:
        return 1.0 if order == 0 else 0.0
    if x <= _SERIES_ARG_CUTOFF or order >= x:
        return sign * _series(order, x)
    return sign * _backward_recurrence(order, x)
