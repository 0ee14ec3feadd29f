"""Exact tools for matrix mortality and quantum measurement occurrence."""

__version__ = "0.1.0"

from .exact import Matrix, four_square_decompose, is_nilpotent, mat_mul, rank
from .measurement import (
    ClassicalDevice,
    MpsFamily,
    State,
    apply_outcome,
    classical_sequence_probability,
    decide_cmop,
    find_empty_ports,
    find_unobservable_mps,
    mps_amplitude,
    occurs_ever,
    sequence_probability,
)
from .mortality import (
    BoolMatrix,
    Immortal,
    Inconclusive,
    MmpInstance,
    Mortal,
    bool_product,
    bool_project,
    bounded_mortality_search,
    decide_nonneg_mortality,
)
from .pcp import PcpInstance, encode_pcp, pair_matrix, solve_pcp_bounded, three_adic
from .reduction import QuantumDevice, build_kraus_from_mmp, compute_probability_gap, map_word_q_to_m, validate_device
