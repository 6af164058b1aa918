import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghmmcanon import zoo
from ghmmcanon.errors import DegenerateConditionError, ModelError
from ghmmcanon.ghmm import word_probability
from ghmmcanon.qhmm import (
    QHMM,
    UnitarySpec,
    as_density_matrix,
    conditional_probability_q,
    diagnostics,
    kraus_from_unitary,
    memory_update,
    sample_qhmm,
    unitary_from_kraus,
    word_probability_q,
)


def test_pure_state_promotion():
    rho = as_density_matrix([1, 1j])
    assert np.allclose(rho, np.array([[0.5, -0.5j], [0.5j, 0.5]]))


@pytest.mark.parametrize(
    "bad",
    [np.diag([1.0, 1.0]), np.array([[0.5, 1.0], [0.0, 0.5]]), np.diag([1.5, -0.5])],
    ids=["trace", "hermitian", "positive"],
)
def test_bad_density_matrices(bad):
    with pytest.raises(ModelError):
        as_density_matrix(bad)


def test_incomplete_kraus_rejected():
    with pytest.raises(ModelError):
        QHMM("01", [1, 0], {"0": np.eye(2) * 0.5, "1": np.eye(2) * 0.5})


def test_non_unitary_rejected():
    with pytest.raises(ModelError):
        UnitarySpec(2, 1, 1, np.ones((2, 2)))


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10_000), trash=st.integers(1, 2))
def test_random_qhmm_completeness(seed, trash):
    q = zoo.random_qhmm(2, 2, trash, seed)
    total = sum(k.conj().T @ k for ops in q.kraus.values() for k in ops)
    assert np.allclose(total, np.eye(2), atol=1e-9)


def test_tight_qhmm_probabilities(tight_qhmm, tight_hmm):
    for w in [("0",), ("0", "1"), ("2", "2"), ("3", "1", "0")]:
        assert word_probability_q(tight_qhmm, w) == pytest.approx(word_probability(tight_hmm, w), abs=1e-12)


def test_conditional_matches_ratio(tight_qhmm):
    p = conditional_probability_q(tight_qhmm, ("1",), ("0",))
    ratio = word_probability_q(tight_qhmm, ("0", "1")) / word_probability_q(tight_qhmm, ("0",))
    assert p == pytest.approx(ratio)


def test_memory_update_impossible_symbol():
    q = zoo.tight_example_qhmm(start=0)
    with pytest.raises(DegenerateConditionError):
        memory_update(q, q.sigma0, "0")


def test_dilation_roundtrip():
    q = zoo.random_qhmm(2, 2, 2, 3)
    spec = unitary_from_kraus(q, seed=5)
    back = kraus_from_unitary(spec, q.sigma0, q.alphabet)
    for x in q.alphabet:
        for a, b in zip(q.kraus[x], back.kraus[x]):
            assert np.allclose(a, b)


def test_conjugation_preserves_probabilities():
    q = zoo.random_qhmm(2, 2, 1, 11)
    theta = 0.3
    V = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    r = q.conjugated(V)
    for w in [("0",), ("1", "0"), ("0", "0", "1")]:
        assert word_probability_q(q, w) == pytest.approx(word_probability_q(r, w), abs=1e-12)


def test_diagnostics_flags_padding():
    # memory padded by an unreachable third level
    K0 = np.zeros((3, 3))
    K0[0, 0] = K0[2, 2] = 1.0
    K0[1, 1] = np.sqrt(0.5)
    K1 = np.zeros((3, 3))
    K1[1, 1] = np.sqrt(0.5)
    q = QHMM("01", np.diag([1.0, 0, 0]), {"0": K0, "1": K1})
    info = diagnostics(q)
    assert info["reachable_support_rank"] == 1
    assert info["notes"]


def test_sampler_deterministic(tight_qhmm):
    a = sample_qhmm(tight_qhmm, 30, 1)
    assert a == sample_qhmm(tight_qhmm, 30, 1)
    assert all(x != y for x, y in zip(a, a[1:]))
