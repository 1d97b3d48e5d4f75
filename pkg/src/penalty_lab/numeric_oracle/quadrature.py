"""
Quadrature oracles for the penalty curves.

Expectations over the period-1 value V are taken as integrals of its quantile
function over (0, 1], split at the quantile where the show decision flips.
The utility integrand is written in max form, E[max(V + b*w, -z)], so it is
continuous everywhere. CiPi agents have two atoms and are summed exactly.
"""
import math
import warnings
from typing import Callable, Tuple

from scipy import integrate, stats

from .. import agent_types, datatypes
from ..datatypes import CiPi, Exponential, Uniform


class QuadratureError(RuntimeError):

    def __init__(self, message: str, abserr: float = math.nan):
        super().__init__(message)
        self.abserr = abserr


def _quantile_and_kink(a: datatypes.AgentType, s: float) -> Tuple[Callable[[float], float], float]:
    """Quantile function of V and the level u_k = P[V < -s]."""
    match a.model:
        case Exponential(lam=lam):
            return (lambda u: math.log(u) / lam), math.exp(-lam * max(s, 0.0))
        case Uniform(alpha=alpha):
            return (lambda u: alpha * (u - 1)), min(max((alpha - s) / alpha, 0.0), 1.0)
    raise TypeError(f"No continuous quantile for {type(a.model).__name__}")


def _show_dist(a: datatypes.AgentType):
    """Frozen scipy distribution of the opportunity cost -V."""
    match a.model:
        case Exponential(lam=lam):
            return stats.expon(scale=1 / lam)
        case Uniform(alpha=alpha):
            return stats.uniform(loc=0.0, scale=alpha)
    raise TypeError(f"No continuous distribution for {type(a.model).__name__}")


def _integrate(f: Callable[[float], float], lo: float, hi: float, kink: float, cfg: datatypes.OracleConfig) -> float:
    if hi <= lo:
        return 0.0
    points = [kink] if lo < kink < hi else None
    with warnings.catch_warnings():
        warnings.simplefilter('error', integrate.IntegrationWarning)
        try:
            value, abserr = integrate.quad(
                f, lo, hi, points=points, epsabs=cfg.quad_abs_tol, epsrel=1e-12, limit=200
            )
        except integrate.IntegrationWarning as err:
            raise QuadratureError(f"[ORACLE] quadrature did not converge: {err}") from err
    if abserr > 10 * cfg.quad_abs_tol + 1e-12 * abs(value):
        raise QuadratureError(
            f"[ORACLE] quadrature error {abserr:.3g} exceeds tolerance {cfg.quad_abs_tol:.3g}",
            abserr=abserr,
        )
    return value


def _check(z: float) -> None:
    if z < 0:
        raise ValueError(f"Penalty z must be non-negative, got {z}")


def quad_show_prob(a: datatypes.AgentType, z: float, believed: bool = False) -> float:
    _check(z)
    b = agent_types.bias(a, believed)
    match a.model:
        case CiPi(c=c, p=p):
            return p if -c + b * a.w >= -z else 0.0
    return float(_show_dist(a).cdf(z + b * a.w))


def quad_utility(
    a: datatypes.AgentType,
    z: float,
    believed: bool,
    cfg: datatypes.OracleConfig = datatypes.OracleConfig(),
) -> float:
    """E[max(V + b*w, -z)] + (1 - b) * w * P[V >= -z - b*w] by quadrature."""
    _check(z)
    b = agent_types.bias(a, believed)
    w = a.w
    match a.model:
        case CiPi(c=c, p=p):
            able = max(-c + b * w, -z)
            return p * able + (1 - p) * -z + (1 - b) * w * quad_show_prob(a, z, believed)
    quantile, kink = _quantile_and_kink(a, z + b * w)
    clipped = _integrate(lambda u: max(quantile(u) + b * w, -z), 0.0, 1.0, kink, cfg)
    return clipped + (1 - b) * w * quad_show_prob(a, z, believed)


def quad_subjective_utility(
    a: datatypes.AgentType,
    z: float,
    cfg: datatypes.OracleConfig = datatypes.OracleConfig(),
) -> float:
    return quad_utility(a, z, True, cfg)


def quad_expected_utility(
    a: datatypes.AgentType,
    z: float,
    cfg: datatypes.OracleConfig = datatypes.OracleConfig(),
) -> float:
    return quad_utility(a, z, False, cfg)


def quad_welfare(
    a: datatypes.AgentType,
    z: float,
    cfg: datatypes.OracleConfig = datatypes.OracleConfig(),
) -> float:
    """E[(V + w) 1{V >= -z - beta*w}] by quadrature over the showing quantiles only."""
    _check(z)
    w = a.w
    match a.model:
        case CiPi(c=c):
            return (w - c) * quad_show_prob(a, z, believed=False)
    quantile, kink = _quantile_and_kink(a, z + a.beta * w)
    return _integrate(lambda u: quantile(u) + w, kink, 1.0, kink, cfg)
