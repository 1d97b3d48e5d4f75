from .lambert import LambertWDomainError, lambert_w_minus1
from .quadrature import (
    QuadratureError,
    quad_expected_utility,
    quad_show_prob,
    quad_subjective_utility,
    quad_utility,
    quad_welfare,
)
from .search import (
    NoSignChangeError,
    best_response_search,
    bracket_bound,
    grid_first_best,
    grid_sup,
    numeric_zero_crossing,
)
from .monte_carlo import mc_outcome_check
