"""Exact rearrangements, symmetric-space norms, Dunford-Schwartz averages and
divergence counterexamples on quasi-non-atomic measure models."""

from .counterexample import (
    LevelBand,
    OscillationCertificate,
    build_tau_phi,
    find_level_band,
    greedy_ns,
    synthesize,
    verify_certificate,
)
from .evseq import EvSeq, IndexSet
from .measure_model import (
    INF,
    DomainError,
    Loc,
    Part,
    SpaceFunction,
    SpaceModel,
    evaluate,
    in_R_mu,
    level_measure,
    split_parts,
)
from .operators import (
    BlockExpectation,
    Compose,
    DSOperator,
    Lift,
    MultiplierComposition,
    apply,
    averages_at,
    block_expectation,
    ergodic_average,
    lift,
    verify_ds,
)
from .rearrangement import Rearrangement, majorizes, mu_at, rearrange
from .spaces import (
    LorentzWeight,
    OrliczFunction,
    contains_one,
    has_iet,
    lorentz_norm,
    luxemburg_norm,
    norm_l1,
    norm_l1_cap_linf,
    norm_l1_plus_linf,
    norm_linf,
)

__version__ = "0.1.0"
