"""Billiard-ball collision counting and Grover search, run side by side in exact arithmetic."""

from .analytic import (
    CountCertificate,
    count_collisions,
    count_collisions_analytic,
    cross_check,
    pi_digits_via_collisions,
)
from .billiards import (
    BilliardState,
    Event,
    Start,
    Trace,
    collide_balls,
    collide_wall,
    count_collisions_direct,
    next_event,
    reference_position_sim,
    run,
)
from .duality import (
    DualityReport,
    billiard_to_state,
    factor_of_four_report,
    state_to_billiard,
    verify_trace_equivalence,
)
from .grover import (
    GroverState,
    angle_of,
    apply_diffusion,
    apply_oracle,
    basis_states,
    grover_iterate,
    make_uniform,
    optimal_iterations,
    success_probability,
    theta_bar,
)
from .numerics import (
    AmbiguousFloor,
    IntervalReal,
    arctan_interval,
    floor_of_quotient,
    pi_interval,
    sqrt_interval,
)

__version__ = "0.1.0"
