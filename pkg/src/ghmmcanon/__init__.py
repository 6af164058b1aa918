"""Canonical forms, dimension bounds and equivalence tests for generalized and
quantum hidden Markov models."""

from .canonical import (
    DimensionBound,
    StandardGHMM,
    dimension_bound,
    entropy_dimension_witness,
    hf_matrix,
    standard_ghmm,
)
from .equivalence import (
    EquivalenceReport,
    equivalent,
    equivalent_by_length,
    equivalent_canonical,
    equivalent_thm1,
    find_witness,
)
from .errors import (
    AlgorithmBugError,
    DegenerateConditionError,
    DegenerateSteadyStateError,
    GhmmCanonError,
    ModelError,
    NumericalIntegrityError,
    ResourceCapError,
)
from .ghmm import (
    GHMM,
    apply_similarity,
    conditional_probability,
    hmm_flags,
    sample_hmm,
    steady_state,
    validate,
    word_probabilities,
    word_probability,
)
from .qhmm import (
    QHMM,
    UnitarySpec,
    conditional_probability_q,
    kraus_from_unitary,
    sample_qhmm,
    unitary_from_kraus,
    word_probability_q,
)
from .vectorize import as_ghmm, build_basis, qhmm_to_ghmm_bloch, qhmm_to_ghmm_liouville, to_all_ones_gauge
from .wordlist import (
    compute_minimal_wordlists,
    minimal_wordlists,
    sufficient_future_wordlist,
    sufficient_history_wordlist,
)

__version__ = "0.1.0"
