import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghmmcanon import zoo
from ghmmcanon.errors import AlgorithmBugError
from ghmmcanon.ghmm import GHMM
from ghmmcanon.linalg import numerical_rank
from ghmmcanon.wordlist import (
    MinimalWordlists,
    check_wordlist_bounds,
    compute_minimal_wordlists,
    minimal_wordlists,
    sufficient_future_wordlist,
    sufficient_history_wordlist,
)

EPS = ()


def test_loose_example_lists_from_state_a():
    lists = compute_minimal_wordlists(zoo.loose_example_hmm(0.5, start="A"))
    assert lists.history == (EPS, ("1",), ("1", "1"), ("1", "1", "1"))
    assert lists.future == (EPS, ("0",), ("1", "0"), ("1", "1", "0"))
    assert lists.ell_min == 4


def test_tight_example_lists(tight_hmm):
    lists = compute_minimal_wordlists(tight_hmm)
    assert lists.ell_min == 4
    assert lists.future == (EPS, ("0",), ("1",), ("2",))
    assert len(lists.history) == 4


def test_tight_alternative_history_list(tight_hmm):
    # the single-symbol words alone are another valid minimal history list
    H = sufficient_history_wordlist(tight_hmm)
    F = sufficient_future_wordlist(tight_hmm)
    rows = np.array([tight_hmm.eta0 @ tight_hmm.matrix((x,)) for x in "0123"])
    assert numerical_rank(rows @ F.cols) == 4
    assert numerical_rank(H.rows @ F.cols) == 4


def test_iid_has_single_word():
    lists = compute_minimal_wordlists(zoo.iid_model([0.2, 0.8]))
    assert lists.history == (EPS,) and lists.future == (EPS,)


def test_impossible_words_never_enter_history_list():
    H = sufficient_history_wordlist(zoo.loose_example_hmm(0.5, start="B"))
    assert all(w[:1] != ("0",) for w in H.words)


def test_zero_probability_direction_is_recorded():
    # "0" induces the nonzero state [1/2, -1/2], which the all-ones functional annihilates
    T0 = np.array([[0.5, -0.5], [0.5, -0.5]])
    T1 = np.array([[0.5, 0.5], [0.5, 0.5]])
    H = sufficient_history_wordlist(GHMM("01", [1.0, 0.0], {"0": T0, "1": T1}))
    assert ("0",) in H.dropped
    assert ("0",) not in H.words


def test_future_list_prepends(loose_hmm):
    F = sufficient_future_wordlist(loose_hmm)
    for w in F.words[1:]:
        assert w[1:] in F.words


def test_history_list_appends(loose_hmm):
    H = sufficient_history_wordlist(loose_hmm)
    for w in H.words[1:]:
        assert w[:-1] in H.words


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10_000), trash=st.integers(1, 2), k=st.integers(2, 3))
def test_qubit_bounds(seed, trash, k):
    q = zoo.random_qhmm(2, k, trash, seed)
    lists = compute_minimal_wordlists(q)
    report = check_wordlist_bounds(q, lists)
    assert report["ok"]
    assert lists.ell_min <= 4
    assert numerical_rank(lists.cross) == lists.ell_min


def test_bound_violation_raises(loose_hmm):
    fake = MinimalWordlists(tuple(("1",) * i for i in range(6)), ((),) * 6, 6, np.eye(6))
    with pytest.raises(AlgorithmBugError):
        check_wordlist_bounds(loose_hmm, fake)


def test_minimal_is_subset_of_sufficient(tight_qhmm):
    H = sufficient_history_wordlist(tight_qhmm)
    F = sufficient_future_wordlist(tight_qhmm)
    lists = minimal_wordlists(tight_qhmm, H, F)
    assert set(lists.history) <= set(H.words)
    assert set(lists.future) <= set(F.words)
    assert lists.to_dict()["ell_min"] == 4
