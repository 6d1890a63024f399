"""Exact success probabilities, lower bounds and a brute-force oracle for the
measurement step of Shor's order-finding algorithm."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConsistencyError,
    GerjuoyInapplicableError,
    ModulusTooLargeError,
    NotCoprimeError,
    RegisterTooLargeError,
    RegisterTooSmallError,
    ShorProbError,
    UnreachableError,
)
from .modular import (  # noqa: E402
    OrderInstance,
    continued_fraction_convergents,
    decompose_order,
    extract_divisor,
    is_prime_power,
    multiplicative_order,
    register_sizes,
)
from .shor_state import (  # noqa: E402
    ProbabilityReport,
    TargetKind,
    TargetSet,
    exact_P,
    exact_P_tilde,
    exact_P_tilde_q,
    target_set_members,
)
from .bounds import (  # noqa: E402
    AsymptoticKind,
    BoundKind,
    BoundReport,
    asymptotic_bound,
    bounds_for_instance,
    integral_lower_bound_P,
    integral_lower_bound_window,
    series_lower_bound,
    threshold_search,
)
from .oracle import (  # noqa: E402
    amplitude_sq,
    closed_form_table,
    figure1_dump,
    full_transform,
    mass_on_set,
)
