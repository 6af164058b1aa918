"""HF matrix, standard (canonical minimal) GHMM, and memory-dimension bounds."""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalIntegrityError, UnsupportedModelError
from .ghmm import GHMM, hmm_flags, steady_state, word_probabilities
from .linalg import COND_CAP, RANK_RTOL, as_real, solve_right
from .qhmm import QHMM, apply_subchannel, apply_word, normalize_memory
from .vectorize import as_ghmm
from .wordlist import MinimalWordlists, compute_minimal_wordlists

VERIFY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class HFMatrix:
    matrix: np.ndarray
    lists: MinimalWordlists
    cond: float


@dataclass(frozen=True, eq=False)
class StandardGHMM:
    """Canonical minimal GHMM plus the ordered wordlists it was built from."""

    ghmm: GHMM
    history: tuple
    future: tuple
    hf_cond: float = None

    @property
    def dim(self):
        return self.ghmm.dim

    @property
    def alphabet(self):
        return self.ghmm.alphabet

    @property
    def gamma0(self):
        return self.ghmm.eta0

    @property
    def transitions(self):
        return self.ghmm.transitions


@dataclass(frozen=True)
class DimensionBound:
    ell_min: int
    d_min_lower: int

    def to_dict(self):
        return {"ell_min": self.ell_min, "d_min_lower": self.d_min_lower}


@dataclass
class EntropyWitness:
    steady_state: np.ndarray
    entropy_bits: float
    exceeds_log2: dict = field(default_factory=dict)
    dimension_floor: int = 1

    def to_dict(self):
        return {
            "steady_state": [float(v) for v in self.steady_state],
            "entropy_bits": self.entropy_bits,
            "exceeds_log2": {str(k): v for k, v in self.exceeds_log2.items()},
            "dimension_floor": self.dimension_floor,
        }


class _GhmmEvaluator:
    """Normalized history states and future evaluations for a GHMM."""

    def __init__(self, model):
        self.model = model

    def history_state(self, w):
        state = self.model.eta0 @ self.model.matrix(w)
        return state / (state @ self.model.ones)

    def advance(self, state, x):
        return state @ self.model.transitions[x]

    def future_value(self, state, w):
        return state @ self.model.matrix(w) @ self.model.ones


class _QhmmEvaluator:
    """Same interface working directly on density matrices."""

    def __init__(self, model):
        self.model = model

    def history_state(self, w):
        return normalize_memory(apply_word(self.model, w, self.model.sigma0))

    def advance(self, state, x):
        return apply_subchannel(self.model, x, state)

    def future_value(self, state, w):
        return np.trace(apply_word(self.model, w, state))


def _evaluator(model):
    if isinstance(model, QHMM):
        return _QhmmEvaluator(model)
    return _GhmmEvaluator(as_ghmm(model))


def _initial_state(model):
    return model.sigma0 if isinstance(model, QHMM) else as_ghmm(model).eta0


def hf_matrix(model, lists, cond_cap=COND_CAP):
    """``HF[l, l'] = P(w'_l' | w_l)`` over minimal wordlists."""
    ev = _evaluator(model)
    states = [ev.history_state(w) for w in lists.history]
    hf = np.array([[ev.future_value(s, f) for f in lists.future] for s in states])
    hf = as_real(hf, what="HF matrix")
    _, cond = solve_right(np.eye(len(hf)), hf, cond_cap=cond_cap, what="HF matrix")
    return HFMatrix(hf, lists, cond)


def standard_ghmm(model, rtol=RANK_RTOL, check_len=None, cond_cap=COND_CAP):
    """Canonical minimal GHMM of the process generated by ``model``.

    Symbols are sorted lexicographically before the wordlists are built, which
    makes the result unique. The construction is verified against the source
    model on every word up to ``check_len`` (default ``min(6, 2 ell_min - 1)``).
    """
    if isinstance(model, StandardGHMM):
        model = model.ghmm
    order = tuple(sorted(model.alphabet))
    model = model.with_alphabet_order(order)
    lists = compute_minimal_wordlists(model, rtol=rtol)
    ev = _evaluator(model)
    hf = hf_matrix(model, lists, cond_cap=cond_cap)

    sigma0 = _initial_state(model)
    initial_row = as_real(
        np.array([ev.future_value(sigma0, f) for f in lists.future]), what="initial row"
    )
    gamma0, _ = solve_right(initial_row, hf.matrix, cond_cap, "HF matrix")

    states = [ev.history_state(w) for w in lists.history]
    transitions = {}
    for x in order:
        moved = [ev.advance(s, x) for s in states]
        m = as_real(
            np.array([[ev.future_value(s, f) for f in lists.future] for s in moved]),
            what=f"B^({x}) numerator",
        )
        transitions[x], _ = solve_right(m, hf.matrix, cond_cap, "HF matrix")

    std = GHMM(order, gamma0, transitions, np.ones(lists.ell_min), provenance={"kind": "standard_ghmm"})
    if check_len is None:
        check_len = min(6, 2 * lists.ell_min - 1)
    _verify(model, std, check_len)
    return StandardGHMM(std, lists.history, lists.future, hf.cond)


def _verify(source, std, check_len, tol=VERIFY_TOL):
    src = as_ghmm(source)
    for length in range(1, check_len + 1):
        _, p_src = word_probabilities(src, length)
        _, p_std = word_probabilities(std, length)
        err = np.max(np.abs(p_src - p_std))
        if err > tol:
            raise NumericalIntegrityError(
                f"standard GHMM deviates from the source by {err:.3e} on length-{length} words"
            )


def dimension_bound(lists):
    """Quantum memory lower bound ``ceil(sqrt(ell_min))``.

    The bound is attained by some processes but not all.
    """
    ell = lists.ell_min if isinstance(lists, MinimalWordlists) else int(lists)
    return DimensionBound(ell, math.isqrt(ell - 1) + 1 if ell > 0 else 0)


def entropy_dimension_witness(model):
    """Shannon-entropy lower bound on memory dimension for unifilar, co-unifilar HMMs.

    For such models the latent-state entropy ``H(pi)`` is minimal across
    classical and quantum generators, so the process needs at least
    ``ceil(2**H(pi))`` dimensions.
    """
    flags = hmm_flags(model) if isinstance(model, GHMM) else None
    if flags is None or not (flags.is_unifilar and flags.is_counifilar):
        raise UnsupportedModelError("entropy witness needs a unifilar and co-unifilar HMM")
    pi = np.clip(np.real(steady_state(model).pi), 0.0, None)
    nz = pi[pi > 0]
    h = float(-np.sum(nz * np.log2(nz)))
    exceeds = {k: bool(h > math.log2(k) + 1e-12) for k in range(1, model.dim)}
    floor = max(1, math.ceil(2.0**h - 1e-9))
    return EntropyWitness(pi, h, exceeds, floor)
