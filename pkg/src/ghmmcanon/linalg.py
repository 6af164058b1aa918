"""Small numerical helpers shared across modules."""

import numpy as np

from .errors import NumericalIntegrityError

# Absolute tolerance for structural equalities (T1 = 1, eta0 1 = 1, ...).
STRUCT_TOL = 1e-9
# Imaginary residue allowed before a supposedly real quantity is rejected.
IMAG_TOL = 1e-10
# Relative singular-value threshold for span/rank tests.
RANK_RTOL = 1e-9
# Negative probabilities in [-CLAMP_TOL, 0) are reported as 0.
CLAMP_TOL = 1e-12
# Refusal threshold for condition numbers of similarity transforms and HF matrices.
COND_CAP = 1e12


def as_real(value, what="value", tol=IMAG_TOL):
    """Drop the imaginary part of ``value`` after checking it is negligible."""
    value = np.asarray(value)
    if np.iscomplexobj(value):
        residue = np.max(np.abs(value.imag)) if value.size else 0.0
        if residue > tol:
            raise NumericalIntegrityError(
                f"{what} has imaginary residue {residue:.3e} > {tol:.1e}"
            )
        value = value.real
    return value


def clamp_probability(p):
    return 0.0 if -CLAMP_TOL <= p < 0.0 else p


def numerical_rank(matrix, rtol=RANK_RTOL):
    """Rank with singular values below ``rtol * s_max`` treated as zero."""
    matrix = np.atleast_2d(np.asarray(matrix))
    if matrix.size == 0:
        return 0
    s = np.linalg.svd(matrix, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def unit_rows(matrix):
    """Scale each nonzero row to unit Euclidean norm; zero rows stay zero."""
    matrix = np.asarray(matrix)
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    safe = np.where(norms > 0, norms, 1.0)
    return matrix / safe


class SpanTracker:
    """Incrementally test whether vectors lie in the span of those accepted so far.

    Vectors are normalized before testing, so the decision does not depend on
    their overall scale (word-induced vectors shrink geometrically with length).
    """

    def __init__(self, rtol=RANK_RTOL, atol=1e-13):
        self.rtol = rtol
        # vectors shorter than atol * (norm of the first accepted vector) count as zero
        self.atol = atol
        self._rows = []
        self._scale = None

    def __len__(self):
        return len(self._rows)

    def copy(self):
        other = SpanTracker(self.rtol, self.atol)
        other._rows = list(self._rows)
        other._scale = self._scale
        return other

    def try_add(self, vector):
        """Accept ``vector`` if it is independent of the accepted set; return whether it was."""
        vector = np.asarray(vector).ravel()
        norm = np.linalg.norm(vector)
        if norm <= self.atol * (self._scale or 1.0):
            return False
        candidate = vector / norm
        stack = np.vstack(self._rows + [candidate])
        s = np.linalg.svd(stack, compute_uv=False)
        if len(s) == len(self._rows) + 1 and s[-1] > self.rtol * s[0]:
            self._rows.append(candidate)
            if self._scale is None:
                self._scale = norm
            return True
        return False


def solve_right(lhs, matrix, cond_cap=COND_CAP, what="matrix"):
    """Return ``lhs @ inv(matrix)`` via SVD, refusing ill-conditioned ``matrix``.

    Returns ``(result, condition_number)``.
    """
    u, s, vh = np.linalg.svd(matrix)
    cond = np.inf if s[-1] == 0 else s[0] / s[-1]
    if not np.isfinite(cond) or cond > cond_cap:
        raise NumericalIntegrityError(
            f"{what} is singular to working precision (condition number {cond:.3e})"
        )
    inverse = (vh.conj().T / s) @ u.conj().T
    return lhs @ inverse, cond
