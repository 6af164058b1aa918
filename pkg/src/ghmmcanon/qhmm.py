"""Quantum hidden Markov models in Kraus form.

Each symbol ``x`` owns a list of Kraus operators ``K_{xy}``; the list length is
the size of the trashed alphabet (length 1 everywhere means unifilar). The
subchannel for ``x`` is ``A_x(rho) = sum_y K_{xy} rho K_{xy}^dagger`` and word
probabilities are ``tr[A_w(sigma0)]`` with ``A_w`` applied left to right.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space
from scipy.stats import unitary_group

from .errors import DegenerateConditionError, ModelError
from .linalg import as_real, clamp_probability, numerical_rank
from .words import check_word, format_word, make_alphabet

HERMITIAN_TOL = 1e-10
COMPLETENESS_TOL = 1e-9
UNITARY_TOL = 1e-9


def _frozen(array):
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


def as_density_matrix(state, tol=HERMITIAN_TOL):
    """Promote a pure state vector to a density matrix and check the invariants."""
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        norm = np.linalg.norm(state)
        if norm == 0:
            raise ModelError("pure state vector is zero")
        psi = state / norm
        state = np.outer(psi, psi.conj())
    if state.ndim != 2 or state.shape[0] != state.shape[1]:
        raise ModelError(f"density matrix must be square, got shape {state.shape}")
    if np.max(np.abs(state - state.conj().T)) > tol:
        raise ModelError("density matrix is not Hermitian")
    if abs(np.trace(state) - 1) > tol:
        raise ModelError(f"density matrix has trace {np.trace(state).real:.12g}")
    if np.min(np.linalg.eigvalsh(state)) < -tol:
        raise ModelError("density matrix is not positive semidefinite")
    return _frozen(state)


@dataclass(frozen=True, eq=False)
class QHMM:
    """Immutable QHMM ``(alphabet, sigma0, {K_xy})``.

    ``sigma0`` may be given as a pure state vector. Completeness
    ``sum K^dagger K = I`` is enforced at construction.
    """

    alphabet: tuple
    sigma0: np.ndarray
    kraus: dict

    def __post_init__(self):
        alphabet = make_alphabet(self.alphabet)
        if set(self.kraus) != set(alphabet):
            raise ModelError(
                f"Kraus symbols {sorted(self.kraus)} do not match alphabet {list(alphabet)}"
            )
        sigma0 = as_density_matrix(self.sigma0)
        d = sigma0.shape[0]
        kraus = {}
        for x in alphabet:
            ops = self.kraus[x]
            if isinstance(ops, np.ndarray) and ops.ndim == 2:
                ops = [ops]
            ops = tuple(_frozen(k) for k in ops)
            if not ops:
                raise ModelError(f"symbol {x!r} has no Kraus operators")
            for k in ops:
                if k.shape != (d, d):
                    raise ModelError(f"Kraus operator for {x!r} has shape {k.shape}, expected {(d, d)}")
            kraus[x] = ops
        total = sum(k.conj().T @ k for ops in kraus.values() for k in ops)
        err = np.max(np.abs(total - np.eye(d)))
        if err > COMPLETENESS_TOL:
            raise ModelError(f"Kraus operators are not complete (deviation {err:.3e})")
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "sigma0", sigma0)
        object.__setattr__(self, "kraus", kraus)

    @property
    def dim(self):
        return self.sigma0.shape[0]

    @property
    def n_trash(self):
        return max(len(ops) for ops in self.kraus.values())

    @property
    def is_unifilar(self):
        return all(len(ops) == 1 for ops in self.kraus.values())

    def with_sigma0(self, sigma0):
        return QHMM(self.alphabet, sigma0, self.kraus)

    def with_alphabet_order(self, alphabet):
        if sorted(alphabet) != sorted(self.alphabet):
            raise ModelError("reordering must be a permutation of the alphabet")
        return QHMM(tuple(alphabet), self.sigma0, self.kraus)

    def conjugated(self, V):
        """Unitary gauge transform ``K -> V K V^dagger``, ``sigma0 -> V sigma0 V^dagger``."""
        V = np.asarray(V)
        Vh = V.conj().T
        return QHMM(
            self.alphabet,
            V @ self.sigma0 @ Vh,
            {x: [V @ k @ Vh for k in ops] for x, ops in self.kraus.items()},
        )

    def __repr__(self):
        return f"<QHMM d={self.dim} alphabet={list(self.alphabet)} trash={self.n_trash}>"


@dataclass(frozen=True, eq=False)
class UnitarySpec:
    """Unitary dilation acting on memory (x) output (x) trash, memory index slowest."""

    memory_dim: int
    output_dim: int
    trash_dim: int
    U: np.ndarray

    def __post_init__(self):
        U = _frozen(self.U)
        n = self.memory_dim * self.output_dim * self.trash_dim
        if U.shape != (n, n):
            raise ModelError(f"U has shape {U.shape}, expected {(n, n)}")
        err = np.max(np.abs(U.conj().T @ U - np.eye(n)))
        if err > UNITARY_TOL:
            raise ModelError(f"U is not unitary (deviation {err:.3e})")
        object.__setattr__(self, "U", U)


def apply_subchannel(model, x, rho):
    """``A_x(rho) = sum_y K_xy rho K_xy^dagger``."""
    rho = np.asarray(rho)
    if rho.shape != (model.dim, model.dim):
        raise ModelError(f"operator has shape {rho.shape}, expected {(model.dim, model.dim)}")
    if x not in model.kraus:
        raise ModelError(f"symbol {x!r} is not in the alphabet {list(model.alphabet)}")
    return sum(k @ rho @ k.conj().T for k in model.kraus[x])


def apply_word(model, w, rho):
    for x in check_word(w, model.alphabet):
        rho = apply_subchannel(model, x, rho)
    return rho


def _trace_probability(rho, what):
    p = as_real(np.trace(rho), what=what)
    return clamp_probability(float(p))


def word_probability_q(model, w):
    w = check_word(w, model.alphabet)
    return _trace_probability(apply_word(model, w, model.sigma0), f"P({format_word(w)})")


def normalize_memory(rho, tol=1e-12):
    """``N(rho) = rho / tr(rho)``."""
    rho = np.asarray(rho)
    tr = as_real(np.trace(rho), what="trace")
    if tr <= tol:
        raise DegenerateConditionError(f"cannot normalize operator with trace {float(tr):.3e}")
    return rho / tr


def memory_update(model, sigma, x, tol=1e-12):
    """Post-measurement memory ``N(A_x(sigma))``."""
    out = apply_subchannel(model, x, sigma)
    tr = as_real(np.trace(out), what="trace")
    if tr <= tol:
        raise DegenerateConditionError(f"symbol {x!r} has probability {float(tr):.3e} from this memory state")
    return as_density_matrix(out / tr, tol=1e-8)


def conditional_probability_q(model, w_future, w_history, tol=1e-12):
    w_history = check_word(w_history, model.alphabet)
    w_future = check_word(w_future, model.alphabet)
    induced = apply_word(model, w_history, model.sigma0)
    if as_real(np.trace(induced), what="trace") <= tol:
        raise DegenerateConditionError(f"cannot condition on {format_word(w_history)!r}: zero probability")
    sigma = normalize_memory(induced, tol)
    return _trace_probability(apply_word(model, w_future, sigma), "conditional probability")


def kraus_operators_from_unitary(spec):
    """``K_xy = (I (x) <x| <y|) U (I (x) |0> |0>)`` as an array (X, Y, d, d)."""
    d, nx, ny = spec.memory_dim, spec.output_dim, spec.trash_dim
    blocks = spec.U.reshape(d, nx, ny, d, nx, ny)[:, :, :, :, 0, 0]
    return np.transpose(blocks, (1, 2, 0, 3))


def kraus_from_unitary(spec, sigma0, alphabet=None):
    """Build the QHMM induced by a unitary dilation with blank ancillas."""
    if alphabet is None:
        alphabet = [str(i) for i in range(spec.output_dim)]
    alphabet = make_alphabet(alphabet)
    if len(alphabet) != spec.output_dim:
        raise ModelError(f"alphabet has {len(alphabet)} symbols, U expects {spec.output_dim}")
    ops = kraus_operators_from_unitary(spec)
    return QHMM(alphabet, sigma0, {x: list(ops[i]) for i, x in enumerate(alphabet)})


def reachable_support_rank(model, tol=1e-10):
    """Dimension of the smallest subspace that supports every reachable memory state.

    A value below ``model.dim`` means the memory space is over-padded.
    """
    d = model.dim
    proj = _support_projector(model.sigma0, tol)
    while True:
        grown = proj + sum(k @ proj @ k.conj().T for ops in model.kraus.values() for k in ops)
        new = _support_projector(grown, tol)
        if numerical_rank(new) == numerical_rank(proj):
            return numerical_rank(new)
        proj = new
        if numerical_rank(proj) == d:
            return d


def _support_projector(rho, tol):
    vals, vecs = np.linalg.eigh((rho + rho.conj().T) / 2)
    keep = vecs[:, vals > tol * max(1.0, vals.max())]
    return keep @ keep.conj().T


def diagnostics(model):
    rank = reachable_support_rank(model)
    notes = []
    if rank < model.dim:
        notes.append(
            f"reachable memory states are supported on a {rank}-dimensional subspace of the {model.dim}-dimensional memory"
        )
    return {
        "dim": model.dim,
        "n_trash": model.n_trash,
        "unifilar": model.is_unifilar,
        "reachable_support_rank": rank,
        "completeness_error": float(
            np.max(np.abs(sum(k.conj().T @ k for ops in model.kraus.values() for k in ops) - np.eye(model.dim)))
        ),
        "notes": notes,
    }


def sample_qhmm(model, length, seed):
    """Sample a word by measuring the output each step and updating the memory."""
    rng = np.random.default_rng(seed)
    symbols = model.alphabet
    groups = [np.stack(model.kraus[x]) for x in symbols]
    sigma = np.array(model.sigma0)
    out = []
    for u in rng.random(length):
        branches = [np.einsum("kij,jl,kml->im", g, sigma, g.conj()) for g in groups]
        probs = np.array([np.trace(b).real for b in branches])
        probs = np.clip(probs, 0, None)
        cdf = np.cumsum(probs)
        i = min(int(np.searchsorted(cdf / cdf[-1], u, side="right")), len(symbols) - 1)
        out.append(symbols[i])
        sigma = branches[i] / probs[i]
    return tuple(out)


def unitary_from_kraus(model, seed=None):
    """Dilate a Kraus-form QHMM into a :class:`UnitarySpec`.

    The columns acting on blank ancillas are fixed by the Kraus operators; the
    remaining columns are an orthonormal completion. With ``seed`` the
    completion is rotated by a random unitary, giving a different dilation of
    the same Kraus set.
    """
    d, nx, ny = model.dim, len(model.alphabet), model.n_trash
    n = d * nx * ny
    iso = np.zeros((d, nx, ny, d), dtype=complex)
    for i, x in enumerate(model.alphabet):
        for j, k in enumerate(model.kraus[x]):
            iso[:, i, j, :] = k
    iso = iso.reshape(n, d)
    rest = null_space(iso.conj().T)
    if seed is not None and rest.shape[1] > 1:
        rest = rest @ unitary_group.rvs(rest.shape[1], random_state=np.random.default_rng(seed))
    U = np.zeros((n, n), dtype=complex)
    blank = np.arange(d) * nx * ny
    U[:, blank] = iso
    U[:, np.setdiff1d(np.arange(n), blank)] = rest
    return UnitarySpec(d, nx, ny, U)
