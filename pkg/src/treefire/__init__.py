"""treefire: fire dynamics, random cutting, and fragmentation on uniform
Cayley trees, with closed-form target laws and a seeded experiment runner.

The phase transition of the fireproof-vertex density sits at firing rate
n^(-1/2): the density tends to 1 above, 0 below, and to an explicit
nondegenerate law at criticality.  This package simulates the dynamics at
scale and verifies every limit statement against exact small-n enumeration
and closed-form distributions.
"""

from .cayley import (
    Fragmentation,
    LabeledTree,
    SpinalDecomposition,
    all_labeled_trees,
    conditioned_borel_sample,
    dump_tree,
    load_tree,
    prufer_decode,
    prufer_encode,
    remove_uniform_edges,
    sample_uniform_tree,
    spinal_decompose,
    tree_distance,
)
from .cutting import (
    CutResult,
    exhaustive_isolation_mean,
    first_cut_split,
    isolate,
    isolate_with_order,
)
from .distributions import (
    DinfLaw,
    TruncatedPmfTable,
    borel_pmf,
    borel_sample,
    borel_table,
    borel_tanner_pmf,
    chi_cdf,
    chi_pdf,
    chi_sample,
    conditioned_borel_marginal_pmf,
    dinf_cdf,
    dinf_moment,
    dinf_pdf,
    first_cut_law,
    first_cut_pmf,
    rayleigh_cdf,
    rayleigh_pdf,
    rayleigh_sample,
    spine_pmf,
)
from .experiments import ExperimentConfig, run_experiment, trial_rng
from .fire import (
    EdgeState,
    FireConfig,
    FireOutcome,
    are_connected,
    component_sizes,
    run_fire,
    run_fire_coupled,
    run_fire_with_randomness,
)
from .stats import Ecdf, GofResult, SampleSummary, chi_square_gof, ks_statistic, summarize

__version__ = "0.1.0"
