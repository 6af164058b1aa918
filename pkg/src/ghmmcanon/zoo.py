"""Worked example models and random model generators.

``tight_example_*``: a 4-state, 4-symbol Markov process where each step moves
to one of the three other states with probability 1/3 and emits the label of
the state it lands in. Its minimal GHMM has dimension 4, yet a qubit QHMM
generates it, because the four memory states are linearly dependent vectors
in C^2.

``loose_example_hmm``: a 4-state binary HMM (A -0|p-> A, A -1|1-p-> B,
B -1-> C, C -1-> D, D -1-> A) whose minimal GHMM, HMM and QHMM all need four
dimensions.

Every registry entry re-checks its documented facts when loaded.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space
from scipy.stats import unitary_group

from .errors import ModelError, NumericalIntegrityError
from .ghmm import GHMM, hmm_flags, steady_state, word_probability
from .qhmm import UnitarySpec, kraus_from_unitary

TIGHT_GRAM = 0.5 + 0.5j / math.sqrt(3)
_W = cmath.exp(1j * math.pi / 3)
# Output amplitudes (times sqrt(3)): U|psi_i>|0> = sum_j AMP[i][j] |psi_j>|j> / sqrt(3)
TIGHT_AMPLITUDES = np.array(
    [
        [0, 1, 1, 1],
        [1, 0, 1, _W],
        [-1, 1, 0, _W.conjugate()],
        [-_W.conjugate(), 1, _W, 0],
    ],
    dtype=complex,
)


def tight_memory_states():
    """The four qubit memory states, as rows."""
    g = TIGHT_GRAM
    psi0 = np.array([1, 0], dtype=complex)
    psi1 = np.array([g, math.sqrt(1 - abs(g) ** 2)], dtype=complex)
    psi2 = psi0 - psi1
    psi3 = psi0 - _W.conjugate() * psi1
    return np.array([psi0, psi1, psi2, psi3])


def tight_example_unitary():
    """Unitary on qubit (x) 4-level output register realizing the tight example."""
    psi = tight_memory_states()
    norms = np.linalg.norm(psi, axis=1)
    if not np.allclose(norms, 1.0, atol=1e-12):
        raise NumericalIntegrityError(f"tight-example memory states are not normalized: {norms}")
    # image of psi_i (x) |0> inside C^2 (x) C^4, flattened memory-major
    images = np.zeros((4, 2, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            images[i, :, j] = TIGHT_AMPLITUDES[i, j] * psi[j] / math.sqrt(3)
    images = images.reshape(4, 8)
    basis = psi[:2].T  # columns psi0, psi1
    iso = images[:2].T @ np.linalg.inv(basis)
    # linearity must hold on the dependent states psi2, psi3 as well
    if not np.allclose(iso @ psi[2:].T, images[2:].T, atol=1e-12):
        raise NumericalIntegrityError("tight-example amplitudes are inconsistent with linearity")
    if not np.allclose(iso.conj().T @ iso, np.eye(2), atol=1e-12):
        raise NumericalIntegrityError("tight-example map is not an isometry")
    U = np.zeros((8, 8), dtype=complex)
    blank = [0, 4]  # |m>|0> for m = 0, 1
    U[:, blank] = iso
    U[:, [1, 2, 3, 5, 6, 7]] = null_space(iso.conj().T)
    return UnitarySpec(2, 4, 1, U)


def tight_example_qhmm(start=None):
    """Qubit QHMM for the tight example.

    ``start=None`` uses the stationary memory state (uniform mixture of the four
    ``psi_i``); an integer selects the pure state ``psi_start``.
    """
    psi = tight_memory_states()
    if start is None:
        sigma0 = sum(np.outer(p, p.conj()) for p in psi) / 4
    else:
        sigma0 = np.outer(psi[start], psi[start].conj())
    return kraus_from_unitary(tight_example_unitary(), sigma0, alphabet="0123")


def tight_example_hmm(start=None):
    """4-state HMM for the tight example; latent state labels equal symbols."""
    transitions = {}
    for x in range(4):
        T = np.zeros((4, 4))
        # |1/sqrt(3)|^2 per branch
        T[[i for i in range(4) if i != x], x] = 1 / 3
        transitions[str(x)] = T
    eta0 = np.full(4, 0.25) if start is None else np.eye(4)[start]
    return GHMM("0123", eta0, transitions)


def loose_example_hmm(p=0.5, start="steady"):
    """4-state binary HMM on states A, B, C, D.

    ``start`` is ``"steady"`` (stationary distribution), ``"A"`` (the vector
    ``[1, 0, 0, 0]``), or an explicit distribution.
    """
    if not 0.0 <= p <= 1.0:
        raise ModelError(f"p must lie in [0, 1], got {p}")
    T0 = np.zeros((4, 4))
    T0[0, 0] = p
    T1 = np.zeros((4, 4))
    T1[0, 1] = 1 - p
    T1[1, 2] = T1[2, 3] = T1[3, 0] = 1.0
    if isinstance(start, str):
        if start == "steady":
            eta0 = np.array([1, 1 - p, 1 - p, 1 - p]) / (4 - 3 * p)
        elif start in "ABCD" and len(start) == 1:
            eta0 = np.eye(4)["ABCD".index(start)]
        else:
            raise ModelError(f"unknown start {start!r}")
    else:
        eta0 = np.asarray(start, dtype=float)
    return GHMM("01", eta0, {"0": T0, "1": T1})


def iid_model(probs, alphabet=None):
    """One-state process emitting symbols independently with the given probabilities."""
    probs = np.asarray(probs, dtype=float)
    if alphabet is None:
        alphabet = [str(i) for i in range(len(probs))]
    return GHMM(alphabet, [1.0], {x: [[q]] for x, q in zip(alphabet, probs)})


def random_density_matrix(d, rng):
    G = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def random_qhmm(d, n_symbols, n_trash, seed):
    """QHMM from a Haar-random dilation and a random full-rank initial state."""
    if d < 2 or n_symbols < 1 or n_trash < 1:
        raise ModelError("need d >= 2, n_symbols >= 1, n_trash >= 1")
    rng = np.random.default_rng(seed)
    n = d * n_symbols * n_trash
    U = unitary_group.rvs(n, random_state=rng) if n > 1 else np.eye(1)
    spec = UnitarySpec(d, n_symbols, n_trash, U)
    return kraus_from_unitary(spec, random_density_matrix(d, rng))


def random_hmm(n_states, n_symbols, seed, start="random"):
    """HMM with Dirichlet-distributed rows over (symbol, next state) pairs."""
    rng = np.random.default_rng(seed)
    rows = rng.dirichlet(np.ones(n_symbols * n_states), size=n_states)
    rows = rows.reshape(n_states, n_symbols, n_states)
    alphabet = [str(i) for i in range(n_symbols)]
    transitions = {x: rows[:, i, :] for i, x in enumerate(alphabet)}
    eta0 = rng.dirichlet(np.ones(n_states))
    model = GHMM(alphabet, eta0, transitions)
    if start == "steady":
        model = model.with_eta0(steady_state(model).pi)
    return model


def random_similarity(D, seed, scale=0.5):
    """Random, reasonably conditioned invertible matrix."""
    rng = np.random.default_rng(seed)
    return np.eye(D) + scale * rng.normal(size=(D, D)) / math.sqrt(D)


@dataclass
class ZooEntry:
    name: str
    model: object
    description: str
    expected: dict = field(default_factory=dict)


def _check(cond, name, fact):
    if not cond:
        raise NumericalIntegrityError(f"zoo entry {name!r} failed documented fact: {fact}")


def _verify_tight_hmm(entry):
    from .wordlist import compute_minimal_wordlists

    m = entry.model
    _check(np.allclose(steady_state(m).pi, 0.25, atol=1e-10), entry.name, "uniform steady state")
    probs = np.concatenate([t[t > 0] for t in m.transitions.values()])
    _check(np.allclose(probs, 1 / 3, atol=1e-12) and probs.size == 12, entry.name, "all edges 1/3")
    for i in range(4):
        s = str(i)
        _check(word_probability(m.with_eta0(np.eye(4)[i]), (s, s)) == 0.0, entry.name, f"P({s}{s}) = 0")
    lists = compute_minimal_wordlists(m)
    _check(lists.ell_min == 4, entry.name, "ell_min = 4")
    _check(lists.future == ((), ("0",), ("1",), ("2",)), entry.name, "future list {ε,0,1,2}")


def _verify_tight_qhmm(entry):
    from .canonical import standard_ghmm
    from .equivalence import canonical_forms_match

    m = entry.model
    psi = tight_memory_states()
    _check(abs(np.vdot(psi[0], psi[1]) - TIGHT_GRAM) < 1e-12, entry.name, "Gram <psi0|psi1>")
    _check(m.dim == 2 and m.is_unifilar, entry.name, "qubit memory, no trash")
    same, _ = canonical_forms_match(standard_ghmm(m), standard_ghmm(tight_example_hmm()))
    _check(same, entry.name, "canonical form equals the tight HMM's")


def _verify_loose(entry):
    from .wordlist import compute_minimal_wordlists

    m = entry.model
    p = entry.expected["p"]
    pi = steady_state(m).pi
    _check(np.allclose(pi, np.array([1, 1 - p, 1 - p, 1 - p]) / (4 - 3 * p), atol=1e-10), entry.name, "steady state")
    flags = hmm_flags(m)
    _check(flags.is_unifilar and flags.is_counifilar, entry.name, "unifilar and co-unifilar")
    lists = compute_minimal_wordlists(loose_example_hmm(p, start="A"))
    _check(lists.history == ((), ("1",), ("1", "1"), ("1", "1", "1")), entry.name, "history {ε,1,11,111}")
    _check(lists.future == ((), ("0",), ("1", "0"), ("1", "1", "0")), entry.name, "future {ε,0,10,110}")


def _verify_iid(entry):
    from .wordlist import compute_minimal_wordlists

    _check(compute_minimal_wordlists(entry.model).ell_min == 1, entry.name, "ell_min = 1")


_REGISTRY = {
    "tight_hmm": (
        lambda: tight_example_hmm(),
        "4-state HMM, stationary start; minimal GHMM dimension 4",
        {"ell_min": 4, "d_min_lower": 2},
        _verify_tight_hmm,
    ),
    "tight_qhmm": (
        lambda: tight_example_qhmm(),
        "qubit QHMM generating the tight_hmm process",
        {"ell_min": 4, "d_min_lower": 2, "memory_dim": 2},
        _verify_tight_qhmm,
    ),
    "loose_hmm": (
        lambda: loose_example_hmm(0.5),
        "4-state binary unifilar/co-unifilar HMM, p = 0.5, stationary start",
        {"ell_min": 4, "d_min_lower": 2, "p": 0.5},
        _verify_loose,
    ),
    "iid_bit": (
        lambda: iid_model([0.5, 0.5]),
        "fair coin",
        {"ell_min": 1, "d_min_lower": 1},
        _verify_iid,
    ),
}


def names():
    return list(_REGISTRY)


def load(name, verify=True):
    """Build a registry entry and (by default) re-check its documented facts."""
    if name not in _REGISTRY:
        raise ModelError(f"unknown zoo entry {name!r}; known: {names()}")
    factory, description, expected, verifier = _REGISTRY[name]
    entry = ZooEntry(name, factory(), description, dict(expected))
    if verify:
        verifier(entry)
    return entry
