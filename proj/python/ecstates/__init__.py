"""Energy-constrained quantum state toolkit.

Thin re-export of the compiled core: extremality tests for bounded-energy
state sets, equal-energy pure-state decompositions, energy-constrained
operator norms, and constrained minimal output entropy.
"""

from ._core import (
    ToolkitError,
    apply_channel,
    bounded_energy_decomposition,
    complementary_channel,
    convexity_transfer_check,
    energy,
    enorm,
    enorm_mixed_oracle,
    enorm_primal_oracle,
    equal_energy_decomposition,
    finite_rank_approximation,
    gibbs_state,
    ground_state,
    is_extreme_state,
    is_extreme_subnormalized,
    min_output_entropy,
    oscillator_observable,
    random_channel,
    random_density,
    random_pure,
    von_neumann_entropy,
)

__all__ = [
    "ToolkitError",
    "apply_channel",
    "bounded_energy_decomposition",
    "complementary_channel",
    "convexity_transfer_check",
    "energy",
    "enorm",
    "enorm_mixed_oracle",
    "enorm_primal_oracle",
    "equal_energy_decomposition",
    "finite_rank_approximation",
    "gibbs_state",
    "ground_state",
    "is_extreme_state",
    "is_extreme_subnormalized",
    "min_output_entropy",
    "oscillator_observable",
    "random_channel",
    "random_density",
    "random_pure",
    "von_neumann_entropy",
]

__version__ = "0.1.0"
