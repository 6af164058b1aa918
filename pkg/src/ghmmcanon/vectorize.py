"""QHMM -> GHMM conversion.

Two routes are provided:

* generalized Bloch coordinates: real ``d^2``-dimensional GHMM with
  ``ones = e_1`` (the trace coordinate);
* Liouville space: complex ``d^2``-dimensional GHMM built from ``K (x) K*``.

Liouville convention: operators are vectorized row-major (numpy's default
``reshape``), so ``vec(K rho K^dagger) = (K (x) conj(K)) vec(rho)`` and the trace
functional is ``vec(I)``. The row-vector GHMM uses the transposes.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ModelError
from .ghmm import GHMM, apply_similarity
from .linalg import IMAG_TOL, as_real
from .qhmm import QHMM, apply_subchannel

HERMITIAN_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class OperatorBasis:
    """Traceless Hermitian basis ``Gamma_n`` with ``tr(Gamma_m Gamma_n) = xi delta_mn``."""

    dim: int
    gamma: np.ndarray  # (d^2 - 1, d, d)
    xi: float

    @property
    def elements(self):
        """``[I/d, Gamma_1, ..., Gamma_{d^2-1}]`` stacked as (d^2, d, d)."""
        return np.concatenate([np.eye(self.dim)[None] / self.dim, self.gamma])


@lru_cache(maxsize=None)
def build_basis(d):
    """Generalized Gell-Mann matrices rescaled to ``tr(Gamma^2) = (d-1)/d``.

    Ordering: symmetric off-diagonal family, antisymmetric family, then the
    diagonal family; for ``d = 2`` this is ``(X, Y, Z) / 2``.
    """
    if d < 2:
        raise ModelError("operator basis needs d >= 2")
    xi = (d - 1) / d
    sym, anti, diag = [], [], []
    for j in range(d):
        for k in range(j + 1, d):
            s = np.zeros((d, d), dtype=complex)
            s[j, k] = s[k, j] = 1
            a = np.zeros((d, d), dtype=complex)
            a[j, k] = -1j
            a[k, j] = 1j
            sym.append(s)
            anti.append(a)
    for l in range(1, d):
        g = np.zeros((d, d), dtype=complex)
        g[np.arange(l), np.arange(l)] = 1
        g[l, l] = -l
        diag.append(g * np.sqrt(2 / (l * (l + 1))))
    # Gell-Mann normalization is tr(G^2) = 2
    gamma = np.array(sym + anti + diag) * np.sqrt(xi / 2)
    gamma.setflags(write=False)
    return OperatorBasis(d, gamma, xi)


def _check_hermitian(M, tol=HERMITIAN_TOL):
    if np.max(np.abs(M - np.swapaxes(M, -1, -2).conj()), initial=0.0) > tol:
        raise ModelError("operator is not Hermitian")


def to_bloch(M, basis):
    """Extended Bloch vector ``[tr M, tr(M Gamma) / xi]`` of a Hermitian operator."""
    M = np.asarray(M)
    _check_hermitian(M)
    c = np.trace(M)
    b = np.einsum("ij,nji->n", M, basis.gamma) / basis.xi
    return as_real(np.concatenate([[c], b]), what="Bloch vector")


def from_bloch(v, basis):
    """Hermitian operator ``c I/d + b . Gamma`` from its extended Bloch vector."""
    v = np.asarray(v)
    if v.shape != (basis.dim**2,):
        raise ModelError(f"Bloch vector has shape {v.shape}, expected ({basis.dim ** 2},)")
    return np.einsum("n,nij->ij", v, basis.elements)


def subchannel_to_bloch_matrix(model, x, basis=None):
    """``G^(x)`` with ``bloch(A_x(M)) = bloch(M) @ G^(x)``.

    Row ``n`` is the Bloch vector of ``A_x`` applied to the ``n``-th basis
    element ``{I/d, Gamma_1, ...}``, so no matrix inversion is needed.
    """
    basis = basis or build_basis(model.dim)
    rows = [apply_subchannel(model, x, E) for E in basis.elements]
    out = np.stack(rows)
    c = np.einsum("nii->n", out)
    b = np.einsum("nij,mji->nm", out, basis.gamma) / basis.xi
    G = np.concatenate([c[:, None], b], axis=1)
    return as_real(G, what=f"G^({x})", tol=IMAG_TOL)


def qhmm_to_ghmm_bloch(model):
    basis = build_basis(model.dim)
    ones = np.zeros(model.dim**2)
    ones[0] = 1.0
    return GHMM(
        model.alphabet,
        to_bloch(model.sigma0, basis),
        {x: subchannel_to_bloch_matrix(model, x, basis) for x in model.alphabet},
        ones,
        provenance={"derived_from": "qhmm", "method": "bloch"},
    )


def liouville_matrix(model, x):
    """Column-action superoperator ``sum_y K (x) conj(K)`` on row-major vectors."""
    return sum(np.kron(k, k.conj()) for k in model.kraus[x])


def qhmm_to_ghmm_liouville(model):
    d = model.dim
    return GHMM(
        model.alphabet,
        model.sigma0.reshape(-1).astype(complex),
        {x: liouville_matrix(model, x).T for x in model.alphabet},
        np.eye(d, dtype=complex).reshape(-1),
        provenance={"derived_from": "qhmm", "method": "liouville"},
    )


def as_ghmm(model, method="bloch"):
    """Return a GHMM for any supported model (GHMMs pass through unchanged)."""
    if isinstance(model, GHMM):
        return model
    if hasattr(model, "ghmm"):  # StandardGHMM
        return model.ghmm
    if isinstance(model, QHMM):
        if method == "bloch":
            return qhmm_to_ghmm_bloch(model)
        if method == "liouville":
            return qhmm_to_ghmm_liouville(model)
        raise ModelError(f"unknown vectorization method {method!r}")
    raise ModelError(f"unsupported model type {type(model).__name__}")


def householder_to_ones(u):
    """Scaled Householder reflection ``S`` with ``S @ u`` equal to the all-ones vector."""
    u = np.asarray(u)
    if np.iscomplexobj(u):
        u = as_real(u, what="ones vector")
    u = u.astype(float)
    D = u.shape[0]
    norm = np.linalg.norm(u)
    if norm == 0:
        raise ModelError("ones vector is zero")
    a = u / norm
    b = np.ones(D) / np.sqrt(D)
    v = a - b
    if np.linalg.norm(v) < 1e-15:
        H = np.eye(D)
    else:
        H = np.eye(D) - 2 * np.outer(v, v) / (v @ v)
    return (np.sqrt(D) / norm) * H


def to_all_ones_gauge(model):
    """Similarity-transform a GHMM so that ``ones`` becomes the all-ones vector."""
    if np.allclose(model.ones, 1.0, atol=1e-15, rtol=0):
        return model
    return apply_similarity(model, householder_to_ones(model.ones))
