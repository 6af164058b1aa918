"""Generalized hidden Markov models.

A GHMM is a triple ``(alphabet, eta0, {T^(x)})`` together with an explicit
functional vector ``ones``; the probability of a word ``x0 x1 ... x_{L-1}`` is
``eta0 @ T[x0] @ ... @ T[x_{L-1}] @ ones``. Classical (Mealy) HMMs are the
special case with nonnegative entries, row-stochastic ``T`` and all-ones
``ones``. ``ones`` is not forced to the all-ones vector because vectorized
quantum models naturally come with ``ones = e_1``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateConditionError,
    DegenerateSteadyStateError,
    ModelError,
    NumericalIntegrityError,
    UnsupportedModelError,
)
from .linalg import (
    COND_CAP,
    STRUCT_TOL,
    as_real,
    clamp_probability,
    numerical_rank,
)
from .words import check_word, format_word, make_alphabet


def _frozen(array, dtype):
    array = np.array(array, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class GHMM:
    """Immutable GHMM.

    Parameters
    ----------
    alphabet : sequence of str
        Ordered symbol labels.
    eta0 : array_like, shape (D,)
        Initial row vector.
    transitions : mapping symbol -> array_like, shape (D, D)
        Per-symbol transition matrices ``T^(x)``.
    ones : array_like, shape (D,), optional
        Right functional vector; defaults to all ones.
    provenance : dict, optional
        Free-form record of where the model came from (kept in JSON exports).
    """

    alphabet: tuple
    eta0: np.ndarray
    transitions: dict
    ones: np.ndarray = None
    provenance: dict = field(default=None)

    def __post_init__(self):
        alphabet = make_alphabet(self.alphabet)
        if set(self.transitions) != set(alphabet):
            raise ModelError(
                f"transition symbols {sorted(self.transitions)} do not match alphabet {list(alphabet)}"
            )
        mats = [np.asarray(self.transitions[x]) for x in alphabet]
        eta0 = np.asarray(self.eta0)
        ones = np.ones(eta0.shape[-1]) if self.ones is None else np.asarray(self.ones)
        complex_model = any(np.iscomplexobj(a) for a in mats + [eta0, ones])
        dtype = complex if complex_model else float
        eta0 = _frozen(eta0, dtype).ravel()
        ones = _frozen(ones, dtype).ravel()
        dim = eta0.shape[0]
        if dim == 0:
            raise ModelError("GHMM must have at least one latent dimension")
        if ones.shape != (dim,):
            raise ModelError(f"ones has shape {ones.shape}, expected ({dim},)")
        transitions = {}
        for x, mat in zip(alphabet, mats):
            if mat.shape != (dim, dim):
                raise ModelError(f"T^({x}) has shape {mat.shape}, expected ({dim}, {dim})")
            transitions[x] = _frozen(mat, dtype)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "eta0", eta0)
        object.__setattr__(self, "ones", ones)
        object.__setattr__(self, "transitions", transitions)

    @property
    def dim(self):
        return self.eta0.shape[0]

    @property
    def is_complex(self):
        return np.iscomplexobj(self.eta0)

    @property
    def net(self):
        """Net transition operator ``T = sum_x T^(x)``."""
        return sum(self.transitions[x] for x in self.alphabet)

    def matrix(self, word):
        """``T^(w)`` for a word (identity for the empty word)."""
        out = np.eye(self.dim, dtype=self.eta0.dtype)
        for x in check_word(word, self.alphabet):
            out = out @ self.transitions[x]
        return out

    def with_eta0(self, eta0):
        return GHMM(self.alphabet, eta0, self.transitions, self.ones, self.provenance)

    def with_alphabet_order(self, alphabet):
        """Same model with symbols listed in a different order."""
        if sorted(alphabet) != sorted(self.alphabet):
            raise ModelError("reordering must be a permutation of the alphabet")
        return GHMM(tuple(alphabet), self.eta0, self.transitions, self.ones, self.provenance)

    def __repr__(self):
        kind = "complex " if self.is_complex else ""
        return f"<{kind}GHMM D={self.dim} alphabet={list(self.alphabet)}>"


@dataclass(frozen=True)
class SteadyState:
    pi: np.ndarray


@dataclass(frozen=True)
class HmmFlags:
    is_hmm: bool
    is_unifilar: bool
    is_counifilar: bool


@dataclass
class ValidationReport:
    ok: bool
    structural_ok: bool
    net_residual: float
    eta0_residual: float
    max_len: int
    min_probability: float
    witness: tuple = None
    witness_probability: float = None
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "ok": self.ok,
            "structural_ok": self.structural_ok,
            "net_residual": self.net_residual,
            "eta0_residual": self.eta0_residual,
            "max_len": self.max_len,
            "min_probability": self.min_probability,
            "witness": None if self.witness is None else list(self.witness),
            "witness_probability": self.witness_probability,
            "notes": list(self.notes),
        }


def word_probability(model, w):
    """``P(w) = eta0 T^(w) ones``; returns 1 for the empty word of a normalized model."""
    w = check_word(w, model.alphabet)
    state = model.eta0
    for x in w:
        state = state @ model.transitions[x]
    p = as_real(state @ model.ones, what=f"P({format_word(w)})")
    return clamp_probability(float(p))


def conditional_probability(model, w_future, w_history, tol=1e-12):
    """``P(w_future | w_history)`` as a ratio of word probabilities."""
    w_history = check_word(w_history, model.alphabet)
    w_future = check_word(w_future, model.alphabet)
    p_hist = word_probability(model, w_history)
    if p_hist <= tol:
        raise DegenerateConditionError(
            f"cannot condition on {format_word(w_history)!r}: P = {p_hist:.3e}"
        )
    return word_probability(model, w_history + w_future) / p_hist


def word_probabilities(model, length, start=None):
    """All words of a given length in length-lex order and their probabilities.

    ``start`` optionally replaces ``eta0``. Returns ``(words, probs)`` where
    ``probs`` is a real array (imaginary residues checked).
    """
    alphabet = model.alphabet
    eta = model.eta0 if start is None else np.asarray(start)
    states = eta[None, :]
    words = [()]
    stack = np.stack([model.transitions[x] for x in alphabet])  # (k, D, D)
    for _ in range(length):
        # (n, D) x (k, D, D) -> (n, k, D); word order is parent-major
        states = np.einsum("nd,kde->nke", states, stack).reshape(-1, model.dim)
        words = [w + (x,) for w in words for x in alphabet]
    probs = as_real(states @ model.ones, what=f"length-{length} word probabilities")
    return words, np.asarray(probs, dtype=float)


def normalization_check(model, L):
    """Sum of ``P(w)`` over all ``|w| = L``, by explicit enumeration."""
    if L < 0:
        raise ModelError("L must be nonnegative")
    _, probs = word_probabilities(model, L)
    return float(np.sum(probs))


def steady_state(model, tol=STRUCT_TOL):
    """Left unit eigenvector of the net operator, normalized so ``pi @ ones = 1``.

    Raises
    ------
    DegenerateSteadyStateError
        If the unit eigenspace is more than one dimensional.
    """
    net = model.net
    vals, vecs = np.linalg.eig(net.T)
    unit = np.flatnonzero(np.abs(vals - 1.0) < tol)
    if unit.size == 0:
        pi = _power_iteration(net, model)
    else:
        candidates = vecs[:, unit].T
        mult = numerical_rank(candidates, rtol=1e-6)
        if mult > 1:
            raise DegenerateSteadyStateError(
                f"unit eigenvalue has geometric multiplicity {mult}; steady state is not unique",
                multiplicity=mult,
                vectors=candidates,
            )
        pi = candidates[np.argmax(np.abs(candidates @ model.ones))]
    norm = pi @ model.ones
    if abs(norm) < 1e-12:
        raise NumericalIntegrityError("unit left eigenvector is annihilated by ones")
    pi = pi / norm
    if not model.is_complex:
        pi = as_real(pi, what="steady state", tol=1e-8)
    pi = _frozen(pi, pi.dtype)
    return SteadyState(pi)


def _power_iteration(net, model, iters=100_000, tol=1e-13):
    # Cesaro averaging copes with periodic chains.
    state = np.array(model.eta0, dtype=net.dtype)
    avg = state.copy()
    for k in range(1, iters + 1):
        state = state @ net
        new_avg = avg + (state - avg) / (k + 1)
        if np.max(np.abs(new_avg - avg)) < tol and np.max(np.abs(new_avg @ net - new_avg)) < 1e-10:
            return new_avg
        avg = new_avg
    raise NumericalIntegrityError("power iteration for the steady state did not converge")


def hmm_flags(model, tol=STRUCT_TOL):
    """Classify a GHMM as HMM / unifilar / co-unifilar.

    Unifilar: every row of every ``T^(x)`` has at most one nonzero entry (the
    current state and emitted symbol fix the next state). Co-unifilar: the same
    for columns (next state and emitted symbol fix the previous state).
    """
    if model.is_complex and any(
        np.max(np.abs(m.imag)) > tol for m in model.transitions.values()
    ):
        return HmmFlags(False, False, False)
    mats = [np.real(model.transitions[x]) for x in model.alphabet]
    nonneg = all(np.all(m >= -tol) for m in mats)
    stochastic = np.allclose(np.real(model.net).sum(axis=1), 1.0, atol=tol, rtol=0)
    all_ones = np.allclose(model.ones, 1.0, atol=tol, rtol=0)
    is_hmm = bool(nonneg and stochastic and all_ones)
    if not is_hmm:
        return HmmFlags(False, False, False)
    support = [np.abs(m) > tol for m in mats]
    unifilar = all(np.all(s.sum(axis=1) <= 1) for s in support)
    counifilar = all(np.all(s.sum(axis=0) <= 1) for s in support)
    return HmmFlags(True, bool(unifilar), bool(counifilar))


def validate(model, max_len, tol=STRUCT_TOL):
    """Bounded validity check.

    Checks ``T ones = ones``, ``eta0 ones = 1`` and ``P(w) >= -tol`` for every
    word up to ``max_len`` symbols. Passing certifies nonnegativity only up to
    that length.
    """
    if max_len < 0:
        raise ModelError("max_len must be nonnegative")
    net_res = float(np.max(np.abs(model.net @ model.ones - model.ones)))
    eta_res = float(abs(model.eta0 @ model.ones - 1.0))
    structural = net_res <= tol and eta_res <= tol
    notes = []
    if not structural:
        notes.append("structural check failed")
    min_p = 1.0
    witness = None
    witness_p = None
    for length in range(1, max_len + 1):
        words, probs = word_probabilities(model, length)
        i = int(np.argmin(probs))
        min_p = min(min_p, float(probs[i]))
        bad = np.flatnonzero(probs < -tol)
        if bad.size:
            witness = words[bad[0]]
            witness_p = float(probs[bad[0]])
            notes.append(f"negative probability at |w| = {length}")
            break
    if max_len == 0:
        notes.append("only structural checks performed")
    ok = structural and witness is None
    return ValidationReport(
        ok=ok,
        structural_ok=structural,
        net_residual=net_res,
        eta0_residual=eta_res,
        max_len=max_len,
        min_probability=min_p,
        witness=witness,
        witness_probability=witness_p,
        notes=notes,
    )


def apply_similarity(model, S, cond_cap=COND_CAP):
    """Gauge transform: ``eta0 -> eta0 S^-1``, ``T -> S T S^-1``, ``ones -> S ones``."""
    S = np.asarray(S)
    if S.shape != (model.dim, model.dim):
        raise ModelError(f"similarity has shape {S.shape}, expected {(model.dim, model.dim)}")
    cond = np.linalg.cond(S)
    if not np.isfinite(cond) or cond > cond_cap:
        raise NumericalIntegrityError(f"similarity transform is ill-conditioned (cond {cond:.3e})")
    S_inv = np.linalg.inv(S)
    return GHMM(
        model.alphabet,
        model.eta0 @ S_inv,
        {x: S @ model.transitions[x] @ S_inv for x in model.alphabet},
        S @ model.ones,
        model.provenance,
    )


def sample_hmm(model, length, seed, start="eta0"):
    """Draw a word of the given length from an HMM.

    ``start`` is ``"eta0"`` (the model's initial vector, which must be a
    probability distribution), ``"steady"``, or an explicit distribution.
    Deterministic for a fixed seed.
    """
    if not hmm_flags(model).is_hmm:
        raise UnsupportedModelError("sampling requires an HMM (nonnegative, row-stochastic)")
    if isinstance(start, str):
        if start == "eta0":
            dist = np.real(model.eta0)
        elif start == "steady":
            dist = np.real(steady_state(model).pi)
        else:
            raise ModelError(f"unknown start mode {start!r}")
    else:
        dist = np.asarray(start, dtype=float)
    if dist.shape != (model.dim,) or np.any(dist < -STRUCT_TOL) or abs(dist.sum() - 1) > STRUCT_TOL:
        raise ModelError("start distribution must be nonnegative and sum to 1")
    dist = np.clip(dist, 0, None)
    rng = np.random.default_rng(seed)
    if length == 0:
        return ()
    k = len(model.alphabet)
    D = model.dim
    # row s of `joint` is the distribution over (symbol, next state) pairs
    joint = np.stack([np.real(model.transitions[x]) for x in model.alphabet], axis=1)
    joint = np.clip(joint.reshape(D, k * D), 0, None)
    cdf = np.cumsum(joint, axis=1)
    cdf /= cdf[:, -1:]
    state = int(np.searchsorted(np.cumsum(dist) / dist.sum(), rng.random(), side="right"))
    state = min(state, D - 1)
    draws = rng.random(length)
    out = []
    for u in draws:
        j = min(int(np.searchsorted(cdf[state], u, side="right")), k * D - 1)
        out.append(model.alphabet[j // D])
        state = j % D
    return tuple(out)
