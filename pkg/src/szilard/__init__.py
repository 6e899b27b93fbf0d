"""Classical and quantum Szilard engines with one or two particles."""
from .engine import (
    EnginePoint, classical_binary_entropy, classical_engine, entropy_production,
    equilibrium_wall, low_t_fm_prediction, p_star,
)
from .ensemble import (
    Interaction, StateTable, Statistics, Truncation, enumerate_states,
    occupancy_probabilities, partition_by_m, system_entropy,
)
from .errors import (
    ConfigError, ConvergenceError, DomainError, ProtocolError, SzilardError, TruncationError,
)
from .spectrum import (
    DeltaWallSpec, DividedBoxSpec, delta_e, delta_wall_levels, doublet_mixture_equivalence,
    doublet_splitting, e_sym, left_level, right_level,
)

__version__ = "0.1.0"
