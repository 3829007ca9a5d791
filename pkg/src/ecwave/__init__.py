"""Numerical lab for the radial focusing energy-critical wave equation in 3D."""

__version__ = "0.1.0"

from .core_fields import (
    ChannelRegion,
    NormValue,
    RadialGrid,
    RadialProfile,
    StatePair,
    channel,
    exterior,
    h_norm,
    l1l2_norm,
    make_grid,
    y_norm,
)
from .ground_state import Bubble, BubbleList, eval_W, ground_state_data, superpose
from .linear_radiation import (
    FreeWave,
    RadiationProfile,
    concentration_tau,
    data_from_profile,
    free_wave_from_profile,
    indicator_profile,
    maximal_function,
    profile_from_data,
)
from .nonlinear_evolution import Trajectory, evolve
from .elliptic import build_phi, solve_w_star
from .decomposition import DecompositionResult, extract_bubbles
from .estimates import (
    REGISTRY,
    RecursionConstants,
    bootstrap_recursion_check,
    interaction_terms,
    verify_scaling,
)

__all__ = [
    "Bubble", "BubbleList", "ChannelRegion", "DecompositionResult", "FreeWave", "NormValue",
    "REGISTRY", "RadialGrid", "RadialProfile", "RadiationProfile", "RecursionConstants",
    "StatePair", "Trajectory", "bootstrap_recursion_check", "build_phi", "channel",
    "concentration_tau", "data_from_profile", "eval_W", "evolve", "exterior", "extract_bubbles",
    "free_wave_from_profile", "ground_state_data", "h_norm", "indicator_profile",
    "interaction_terms", "l1l2_norm", "make_grid", "maximal_function", "profile_from_data",
    "solve_w_star", "superpose", "verify_scaling", "y_norm",
]
