"""Exact computational engine for graded-commutative DG algebras, semifree DG
modules, the diagonal tensor algebra, and naive-lifting obstructions."""

from .algebra import AlgebraElement, BaseRing, DGAlgebra, build_algebra, parse_element
from .config import DEFAULT_CONFIG, EngineConfig
from .diagonal import Diagonal
from .homotopy import HomSpace, check_AR1, check_AR2, hom_k_dim, is_null_homotopic
from .liftcheck import (appendix_battery, kernel_sequence_check, naive_lift_battery,
                        p_ideal_dims, splitting_search, summand_witness)
from .modules import (ChainMap, SemifreeModule, base_change, cone, direct_sum,
                      free_module, homology_dim, make_module, shift, zero_module)
from .obstruction import (ObstructionTower, chi_power, gamma_dim,
                          omega_action_matrix, omega_is_zero)
from .scalars import PrimeField, Rationals, field_from_spec

__all__ = [
    "AlgebraElement", "BaseRing", "DGAlgebra", "build_algebra", "parse_element",
    "DEFAULT_CONFIG", "EngineConfig", "Diagonal",
    "HomSpace", "check_AR1", "check_AR2", "hom_k_dim", "is_null_homotopic",
    "appendix_battery", "kernel_sequence_check", "naive_lift_battery",
    "p_ideal_dims", "splitting_search", "summand_witness",
    "ChainMap", "SemifreeModule", "base_change", "cone", "direct_sum",
    "free_module", "homology_dim", "make_module", "shift", "zero_module",
    "ObstructionTower", "chi_power", "gamma_dim", "omega_action_matrix",
    "omega_is_zero", "PrimeField", "Rationals", "field_from_spec",
]

__version__ = "0.1.0"
