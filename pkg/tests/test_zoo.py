import math

import numpy as np
import pytest

from ghmmcanon import zoo
from ghmmcanon.errors import ModelError
from ghmmcanon.ghmm import word_probabilities
from ghmmcanon.qhmm import word_probability_q
from ghmmcanon.vectorize import as_ghmm


@pytest.mark.parametrize("name", zoo.names())
def test_entries_verify_on_load(name):
    entry = zoo.load(name)
    assert entry.expected
    assert entry.description


def test_unknown_entry():
    with pytest.raises(ModelError):
        zoo.load("nope")


def test_gram_constraint_forced_by_norms():
    # |psi0 - psi1| = 1 and |psi0 - e^{-i pi/3} psi1| = 1 fix Re g and Re(e^{-i pi/3} g)
    g = zoo.TIGHT_GRAM
    assert g.real == pytest.approx(0.5)
    assert (np.exp(-1j * math.pi / 3) * g).real == pytest.approx(0.5)
    psi = zoo.tight_memory_states()
    assert np.allclose(np.linalg.norm(psi, axis=1), 1.0)


def test_tight_unitary_action():
    spec = zoo.tight_example_unitary()
    psi = zoo.tight_memory_states()
    for i in range(4):
        image = spec.U @ np.kron(psi[i], np.eye(4)[0])
        expected = sum(zoo.TIGHT_AMPLITUDES[i, j] * np.kron(psi[j], np.eye(4)[j]) for j in range(4)) / math.sqrt(3)
        assert np.allclose(image, expected)


def test_tight_pair_agrees_to_length_six(tight_hmm, tight_qhmm):
    for length in range(7):
        words, p = word_probabilities(tight_hmm, length)
        if length <= 4:
            q = np.array([word_probability_q(tight_qhmm, w) for w in words])
            assert np.allclose(p, q, atol=1e-9)
    g = as_ghmm(tight_qhmm)
    for length in (5, 6):
        assert np.allclose(word_probabilities(tight_hmm, length)[1], word_probabilities(g, length)[1], atol=1e-9)


@pytest.mark.parametrize("p", [-0.1, 1.5])
def test_loose_rejects_bad_p(p):
    with pytest.raises(ModelError):
        zoo.loose_example_hmm(p)


@pytest.mark.parametrize("p", [0.0, 1.0])
def test_loose_accepts_endpoints(p):
    assert zoo.loose_example_hmm(p, start="A").dim == 4


def test_random_generators_are_seeded():
    a, b = zoo.random_qhmm(2, 2, 2, 9), zoo.random_qhmm(2, 2, 2, 9)
    assert np.allclose(a.sigma0, b.sigma0)
    assert not np.allclose(a.sigma0, zoo.random_qhmm(2, 2, 2, 10).sigma0)
    h = zoo.random_hmm(3, 2, 1, start="steady")
    assert np.allclose(h.eta0 @ h.net, h.eta0)
