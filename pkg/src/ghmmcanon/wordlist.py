"""Sufficient and minimal history/future wordlists.

Both searches are breadth-first over words, seeded with the empty word, with
children generated in alphabet order. A word is kept when its induced vector
is linearly independent of the vectors already kept, and only kept words are
expanded.

* History: the induced state of ``w`` is ``eta0 T^(w)``; children are ``w x``.
* Future: the induced functional of ``w`` is ``T^(w) ones``; children are
  ``x w``, because ``T^(xw) ones = T^(x) (T^(w) ones)``. Appending instead
  would miss directions (for the loose example it stops at ``{ε, 0}``).

Quantum models are Bloch-vectorized first. Minimal wordlists are then picked
out of the cross matrix ``[P(w_h w_f)]`` by keeping, in wordlist order, each
row (then column) that raises the numerical rank. This quotients out the inert
history and future directions.
"""

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import AlgorithmBugError, NumericalIntegrityError
from .ghmm import GHMM
from .linalg import RANK_RTOL, SpanTracker, as_real
from .qhmm import QHMM
from .vectorize import as_ghmm
from .words import format_word

PROB_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class InducedStateMatrix:
    words: tuple
    rows: np.ndarray
    # words that were linearly new but had (numerically) zero probability
    dropped: tuple = ()


@dataclass(frozen=True, eq=False)
class InducedFunctionalMatrix:
    words: tuple
    cols: np.ndarray


@dataclass(frozen=True, eq=False)
class MinimalWordlists:
    history: tuple
    future: tuple
    ell_min: int
    cross: np.ndarray = field(default=None, repr=False)

    def to_dict(self):
        return {
            "history": [list(w) for w in self.history],
            "future": [list(w) for w in self.future],
            "ell_min": self.ell_min,
        }


def sufficient_history_wordlist(model, rtol=RANK_RTOL, prob_tol=PROB_TOL):
    """Breadth-first sufficient history wordlist.

    Words whose probability is below ``prob_tol`` are never retained: for a
    valid model every extension of such a word also has zero probability, so
    its direction is inert. They are listed in ``dropped`` when they would
    otherwise have been new directions.
    """
    g = as_ghmm(model)
    tracker = SpanTracker(rtol=rtol)
    queue = deque([()])
    words, rows, dropped = [], [], []
    states = {(): g.eta0}
    while queue:
        z = queue.popleft()
        state = states.pop(z)
        p = float(as_real(state @ g.ones, what=f"P({format_word(z)})"))
        if abs(p) <= prob_tol:
            if tracker.copy().try_add(state):
                dropped.append(z)
            continue
        if not tracker.try_add(state):
            continue
        words.append(z)
        rows.append(state)
        for x in g.alphabet:
            child = z + (x,)
            states[child] = state @ g.transitions[x]
            queue.append(child)
    return InducedStateMatrix(tuple(words), np.array(rows), tuple(dropped))


def sufficient_future_wordlist(model, rtol=RANK_RTOL):
    """Breadth-first sufficient future wordlist (children prepend a symbol)."""
    g = as_ghmm(model)
    tracker = SpanTracker(rtol=rtol)
    queue = deque([()])
    words, cols = [], []
    funcs = {(): g.ones}
    while queue:
        z = queue.popleft()
        f = funcs.pop(z)
        if not tracker.try_add(f):
            continue
        words.append(z)
        cols.append(f)
        for x in g.alphabet:
            child = (x,) + z
            funcs[child] = g.transitions[x] @ f
            queue.append(child)
    return InducedFunctionalMatrix(tuple(words), np.array(cols).T)


def _forward_select(vectors, rtol):
    tracker = SpanTracker(rtol=rtol)
    return [i for i, v in enumerate(vectors) if tracker.try_add(v)]


def minimal_wordlists(model, H, F, rtol=RANK_RTOL):
    """Prune sufficient wordlists to minimal ones via the cross matrix.

    History rows are selected first, then future columns against the kept rows.
    """
    cross = as_real(H.rows @ F.cols, what="cross matrix")
    keep_h = _forward_select(cross, rtol)
    pruned = cross[keep_h]
    keep_f = _forward_select(pruned.T, rtol)
    if len(keep_h) != len(keep_f):
        raise NumericalIntegrityError(
            f"history rank {len(keep_h)} and future rank {len(keep_f)} disagree; "
            "the rank tolerance is too tight or too loose for this model"
        )
    if not keep_h:
        raise NumericalIntegrityError("cross matrix has rank zero")
    return MinimalWordlists(
        history=tuple(H.words[i] for i in keep_h),
        future=tuple(F.words[j] for j in keep_f),
        ell_min=len(keep_h),
        cross=pruned[:, keep_f],
    )


def compute_minimal_wordlists(model, rtol=RANK_RTOL):
    """Sufficient lists followed by pruning, in one call."""
    H = sufficient_history_wordlist(model, rtol=rtol)
    F = sufficient_future_wordlist(model, rtol=rtol)
    return minimal_wordlists(model, H, F, rtol=rtol)


def check_wordlist_bounds(model, lists):
    """Check the size and word-length bounds on minimal wordlists.

    A QHMM with memory dimension ``d`` admits at most ``d^2`` words of length at
    most ``d^2 - 1``; a GHMM of dimension ``D`` at most ``D`` words of length at
    most ``D - 1``. A violation means a bug, so it raises.
    """
    if isinstance(model, QHMM):
        bound = model.dim**2
        kind = "qhmm"
    elif isinstance(model, GHMM):
        bound = model.dim
        kind = "ghmm"
    else:
        bound = as_ghmm(model).dim
        kind = "ghmm"
    sizes = (len(lists.history), len(lists.future))
    longest = max(len(w) for w in lists.history + lists.future)
    report = {
        "model_kind": kind,
        "size_bound": bound,
        "length_bound": bound - 1,
        "history_size": sizes[0],
        "future_size": sizes[1],
        "max_word_length": longest,
        "ok": max(sizes) <= bound and longest <= bound - 1,
    }
    if not report["ok"]:
        raise AlgorithmBugError(f"wordlist bound violated: {report}")
    return report
