"""Base-family modulus of matroids and its dual ecosystem, with exact oracles."""
from .errors import CapExceeded, ConsistencyError, ConvergenceError, MatroidError, ParseError
from .matroid import (CAPS, Dual, ExplicitBases, Graphic, Linear, Matroid, Minor, Uniform, caps,
                      contract, delete, dual, restrict)
from .modulus import (ModulusResult, base_decomposition, brute_force_eta, is_admissible, min_norm_point,
                      mod1_weighted, mod2, mod_p, mod_p_numeric)
from .principal import (critical_values, deflate, density_theta, exact_eta, fractional_arboricity,
                        is_homogeneous, parametric_minimizers, strength, weighted_strength)
from .duality import (admissible_vertices, blocker_qp, covering_value, dominant_membership,
                      dual_eta_identity, fulkerson_blocker, packing_value, verify_extremity, verify_meomod)
from .beurling import is_beurling, serial_split
