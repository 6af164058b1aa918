"""Decide whether two models generate the same process.

Three independent procedures are offered:

* ``thm1``: compare conditional and marginal probabilities over the union
  of the two models' sufficient wordlists;
* ``length``: compare every word of length ``2 d_max^2 - 1`` (exponential);
* ``canonical``: compare standard GHMMs entrywise.

QHMM operands are Bloch-vectorized before any wordlist machinery runs. A
``not_equal`` verdict always carries a witness word whose probability differs
by more than the tolerance.
"""

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .canonical import StandardGHMM, standard_ghmm
from .errors import ModelError, ResourceCapError
from .ghmm import GHMM, word_probabilities
from .linalg import RANK_RTOL, SpanTracker, as_real
from .qhmm import QHMM
from .vectorize import as_ghmm
from .wordlist import sufficient_future_wordlist, sufficient_history_wordlist

PROB_TOL = 1e-8
ENUMERATION_CAP = 10**6
CONDITION_TOL = 1e-12


@dataclass
class EquivalenceReport:
    verdict: str  # "equal" | "not_equal"
    method: str  # "thm1" | "length_bound" | "canonical"
    max_discrepancy: float
    horizon_used: int
    witness: tuple = None
    witness_delta: float = None

    @property
    def equal(self):
        return self.verdict == "equal"

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "method": self.method,
            "max_discrepancy": self.max_discrepancy,
            "horizon_used": self.horizon_used,
            "witness": None if self.witness is None else list(self.witness),
            "witness_delta": self.witness_delta,
        }


def _require_same_alphabet(a, b):
    if set(a.alphabet) != set(b.alphabet):
        raise ModelError(f"alphabets differ: {list(a.alphabet)} vs {list(b.alphabet)}")


def _sorted_ghmm(model):
    g = as_ghmm(model)
    return g.with_alphabet_order(tuple(sorted(g.alphabet)))


def _extend_alphabet(g, alphabet):
    """Add never-emitted symbols (zero matrices) so ``g`` lives on ``alphabet``."""
    zero = np.zeros((g.dim, g.dim), dtype=g.eta0.dtype)
    transitions = {x: g.transitions.get(x, zero) for x in alphabet}
    return GHMM(tuple(alphabet), g.eta0, transitions, g.ones)


def _probability_fn(g):
    def prob(w):
        state = g.eta0
        for x in w:
            state = state @ g.transitions[x]
        return float(as_real(state @ g.ones, what="word probability"))

    return prob


def find_witness(a, b, tol=PROB_TOL, rtol=RANK_RTOL):
    """Shortest-first word on which the two processes differ, or ``None``.

    Runs the breadth-first history search on the difference automaton
    ``(eta_a, -eta_b)``, ``T_a (+) T_b``, ``ones_a (+) ones_b``. Every word's
    difference vector lies in the span of the retained ones, so if all visited
    words agree the processes agree. Symbols missing from one alphabet are
    treated as never emitted.
    """
    ga, gb = as_ghmm(a), as_ghmm(b)
    alphabet = tuple(sorted(set(ga.alphabet) | set(gb.alphabet)))
    ga, gb = _extend_alphabet(ga, alphabet), _extend_alphabet(gb, alphabet)
    Da = ga.dim
    dtype = np.result_type(ga.eta0, gb.eta0)
    eta = np.concatenate([ga.eta0, -gb.eta0]).astype(dtype)
    ones = np.concatenate([ga.ones, gb.ones]).astype(dtype)
    trans = {}
    for x in alphabet:
        T = np.zeros((Da + gb.dim,) * 2, dtype=dtype)
        T[:Da, :Da] = ga.transitions[x]
        T[Da:, Da:] = gb.transitions[x]
        trans[x] = T
    tracker = SpanTracker(rtol=rtol)
    queue = deque([((), eta)])
    best = (None, 0.0)
    while queue:
        z, state = queue.popleft()
        delta = float(as_real(state @ ones, what="probability difference"))
        if abs(delta) > tol:
            return z, delta
        if abs(delta) > abs(best[1]):
            best = (z, delta)
        if not tracker.try_add(state):
            continue
        for x in alphabet:
            queue.append((z + (x,), state @ trans[x]))
    return None


def _not_equal(method, max_disc, horizon, a, b, tol, witness=None):
    if witness is None:
        found = find_witness(a, b, tol)
        if found is not None:
            witness = found
    w, delta = witness if witness is not None else (None, None)
    return EquivalenceReport("not_equal", method, max_disc, horizon, w, delta)


def equivalent_thm1(a, b, tol=PROB_TOL, rtol=RANK_RTOL):
    """Compare the processes through their sufficient wordlists.

    Checks ``P(w_f | w_h)``, ``P(x w_f | w_h)`` and ``P(w_f)`` for all ``w_h``
    in the union of the history lists and ``w_f`` in the union of the future
    lists. These finitely many equalities are necessary and sufficient.
    """
    _require_same_alphabet(a, b)
    ga, gb = _sorted_ghmm(a), _sorted_ghmm(b)
    hist, fut = [], []
    for g in (ga, gb):
        for w in sufficient_history_wordlist(g, rtol=rtol).words:
            if w not in hist:
                hist.append(w)
        for w in sufficient_future_wordlist(g, rtol=rtol).words:
            if w not in fut:
                fut.append(w)
    pa, pb = _probability_fn(ga), _probability_fn(gb)
    horizon = max(len(h) for h in hist) + 1 + max(len(f) for f in fut)

    max_disc = 0.0
    witness = None

    def note(word, delta):
        nonlocal witness
        if abs(delta) > tol and witness is None:
            witness = (word, delta)

    # condition 3: marginals
    for f in fut:
        d = pa(f) - pb(f)
        max_disc = max(max_disc, abs(d))
        note(f, d)
    # conditions 1 and 2: conditionals given each history word
    extended = list(fut) + [(x,) + f for x in ga.alphabet for f in fut]
    for h in hist:
        ph_a, ph_b = pa(h), pb(h)
        if ph_a <= CONDITION_TOL or ph_b <= CONDITION_TOL:
            d = ph_a - ph_b
            max_disc = max(max_disc, abs(d))
            note(h, d)
            continue
        for f in extended:
            joint_a, joint_b = pa(h + f), pb(h + f)
            d = joint_a / ph_a - joint_b / ph_b
            max_disc = max(max_disc, abs(d))
            if abs(d) > tol:
                # differing conditionals mean P(h) or P(h f) differs
                note(h, ph_a - ph_b)
                note(h + f, joint_a - joint_b)
    if max_disc <= tol:
        return EquivalenceReport("equal", "thm1", max_disc, horizon)
    return _not_equal("thm1", max_disc, horizon, ga, gb, tol, witness)


def length_horizon(a, b):
    """``2 d_max^2 - 1`` where a GHMM of dimension D counts as ``ceil(sqrt(D))``."""

    def eff_dim(m):
        if isinstance(m, QHMM):
            return m.dim
        return math.isqrt(as_ghmm(m).dim - 1) + 1

    d_max = max(eff_dim(a), eff_dim(b))
    return 2 * d_max**2 - 1


def equivalent_by_length(a, b, tol=PROB_TOL, cap=ENUMERATION_CAP, horizon=None):
    """Exhaustive comparison of all word probabilities up to the horizon length.

    Agreement at the horizon length alone is decisive; shorter lengths are also
    scanned so that the reported witness is a shortest one.
    """
    _require_same_alphabet(a, b)
    if horizon is None:
        horizon = length_horizon(a, b)
    ga, gb = _sorted_ghmm(a), _sorted_ghmm(b)
    k = len(ga.alphabet)
    if k**horizon > cap:
        raise ResourceCapError(
            f"{k}^{horizon} = {k ** horizon} words exceeds the enumeration cap {cap}; "
            "use the thm1 or canonical method"
        )
    max_disc = 0.0
    witness = None
    for length in range(1, horizon + 1):
        words, p_a = word_probabilities(ga, length)
        _, p_b = word_probabilities(gb, length)
        diff = p_a - p_b
        i = int(np.argmax(np.abs(diff)))
        max_disc = max(max_disc, float(abs(diff[i])))
        if witness is None:
            bad = np.flatnonzero(np.abs(diff) > tol)
            if bad.size:
                witness = (words[bad[0]], float(diff[bad[0]]))
    if witness is None:
        return EquivalenceReport("equal", "length_bound", max_disc, horizon)
    return EquivalenceReport("not_equal", "length_bound", max_disc, horizon, *witness)


def canonical_forms_match(sa, sb, tol=PROB_TOL):
    """Compare two :class:`StandardGHMM` objects; returns ``(same, max_entry_diff)``."""
    if sa.alphabet != sb.alphabet or sa.dim != sb.dim:
        return False, math.inf
    if sa.history != sb.history or sa.future != sb.future:
        return False, math.inf
    diffs = [np.max(np.abs(sa.gamma0 - sb.gamma0))]
    diffs += [np.max(np.abs(sa.transitions[x] - sb.transitions[x])) for x in sa.alphabet]
    worst = float(max(diffs))
    return worst <= tol, worst


def equivalent_canonical(a, b, tol=PROB_TOL, rtol=RANK_RTOL):
    """Compare standard GHMMs. Different alphabets give ``not_equal``."""
    sa = a if isinstance(a, StandardGHMM) else standard_ghmm(a, rtol=rtol)
    sb = b if isinstance(b, StandardGHMM) else standard_ghmm(b, rtol=rtol)
    same, worst = canonical_forms_match(sa, sb, tol)
    horizon = max(sa.dim, sb.dim)
    if same:
        return EquivalenceReport("equal", "canonical", worst, horizon)
    return _not_equal("canonical", worst, horizon, sa.ghmm, sb.ghmm, tol)


METHODS = {
    "thm1": equivalent_thm1,
    "length": equivalent_by_length,
    "canonical": equivalent_canonical,
}


def equivalent(a, b, method="canonical", **kwargs):
    try:
        fn = METHODS[method]
    except KeyError:
        raise ModelError(f"unknown method {method!r}; choose from {sorted(METHODS)}") from None
    return fn(a, b, **kwargs)
