"""Exact Walsh-Fourier analysis on the dyadic group.

Binary index combinatorics, exact step-function calculus under the Haar
measure, the fast Walsh transform in Paley enumeration, dyadic martingale
Hardy spaces with atoms, and weighted maximal operators of partial sums,
together with reproducible experiment drivers and a CLI.
"""

from .dyadic import (
    CosetSelector,
    DyadicRational,
    StepFunction,
    dump_step_function,
    haar_integral,
    load_step_function,
    lp_norm,
    parse_step_function,
    save_step_function,
    shell_decompose,
    unit_point,
    weak_lp,
)
from .experiments import (
    ExperimentReport,
    blowup_ratio,
    conjecture_explorer,
    counterexample,
    lebesgue_sweep,
    make_window_family,
    partial_sum_norm_sweep,
    weak_type_sweep,
)
from .hardy import (
    Atom,
    AtomicCombination,
    Martingale,
    build_from_atoms,
    hp_norm,
    maximal_function,
    random_atom,
    validate_atom,
)
from .indexing import (
    BlockDecomposition,
    BoundarySet,
    IndexProfile,
    WindowProfile,
    blocks,
    boundary_set,
    index_profile,
    variation,
    window_profile,
)
from .operators import (
    IndexSet,
    WeightFamily,
    weak_type_statistic,
    weight_value,
    weighted_maximal,
)
from .transform import (
    Spectrum,
    dirichlet_closed,
    dirichlet_direct,
    dirichlet_l1_norm,
    inverse_wht,
    partial_sum,
    walsh_eval,
    wht,
)

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "AtomicCombination",
    "BlockDecomposition",
    "BoundarySet",
    "CosetSelector",
    "DyadicRational",
    "ExperimentReport",
    "IndexProfile",
    "IndexSet",
    "Martingale",
    "Spectrum",
    "StepFunction",
    "WeightFamily",
    "WindowProfile",
    "blocks",
    "blowup_ratio",
    "boundary_set",
    "build_from_atoms",
    "conjecture_explorer",
    "counterexample",
    "dirichlet_closed",
    "dirichlet_direct",
    "dirichlet_l1_norm",
    "dump_step_function",
    "haar_integral",
    "hp_norm",
    "index_profile",
    "inverse_wht",
    "lebesgue_sweep",
    "load_step_function",
    "lp_norm",
    "make_window_family",
    "maximal_function",
    "parse_step_function",
    "partial_sum",
    "partial_sum_norm_sweep",
    "random_atom",
    "save_step_function",
    "shell_decompose",
    "unit_point",
    "validate_atom",
    "variation",
    "walsh_eval",
    "weak_lp",
    "weak_type_statistic",
    "weak_type_sweep",
    "weight_value",
    "weighted_maximal",
    "wht",
    "window_profile",
]
