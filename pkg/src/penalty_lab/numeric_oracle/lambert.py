"""Lower real branch W_{-1} of the Lambert W function."""
import math

from scipy.optimize import brentq


BRANCH_POINT = -math.exp(-1.0)
_BRANCH_TOL = 1e-15


class LambertWDomainError(ValueError):
    pass


def _log_residual(w: float, log_minus_x: float) -> float:
    # w * e^w = x  <=>  w + ln(-w) = ln(-x) for w < -1; stays finite where e^w underflows.
    return w + math.log(-w) - log_minus_x


def lambert_w_minus1(x: float) -> float:
    """Solve w * e^w = x for w <= -1, with x in [-1/e, 0)."""
    if math.isnan(x) or x >= 0 or x < BRANCH_POINT - _BRANCH_TOL:
        raise LambertWDomainError(
            f"W_-1 is real only on [-1/e, 0), got x={x!r}"
        )
    if x <= BRANCH_POINT + _BRANCH_TOL:
        return -1.0

    log_minus_x = math.log(-x)
    u = -1.0 - log_minus_x
    # -1 - sqrt(2u) - u bounds W_-1 from below.
    lower = min(-745.0, -2.0 - math.sqrt(2 * u) - u)
    w = brentq(
        _log_residual, lower, -1.0,
        args=(log_minus_x,), xtol=1e-14, rtol=4 * 2.0 ** -52, maxiter=500,
    )
    if abs(w + 1) > 1e-3:
        g = _log_residual(w, log_minus_x)
        polished = w - g / (1 + 1 / w)
        if polished < -1 and abs(_log_residual(polished, log_minus_x)) < abs(g):
            w = polished
    return w
