"""Alphabets and words.

A word is a tuple of symbol labels; the empty tuple is the empty word.
"""

from itertools import product

from .errors import ModelError

EMPTY_SPELLINGS = ("ε", "", "--empty")


def make_alphabet(symbols):
    """Return ``symbols`` as a tuple of strings after checking it is a valid alphabet."""
    alphabet = tuple(str(s) for s in symbols)
    if not alphabet:
        raise ModelError("alphabet must be nonempty")
    if len(set(alphabet)) != len(alphabet):
        raise ModelError(f"alphabet has repeated symbols: {alphabet}")
    return alphabet


def check_word(word, alphabet):
    word = tuple(word)
    for s in word:
        if s not in alphabet:
            raise ModelError(f"symbol {s!r} is not in the alphabet {list(alphabet)}")
    return word


def parse_word(text, alphabet=None, sep=None):
    """Parse a command-line word.

    Single-character alphabets are spelled by concatenation (``"0110"``); pass
    ``sep`` for multi-character symbols. ``"ε"`` and ``""`` mean the empty word.
    """
    if text in EMPTY_SPELLINGS:
        return ()
    word = tuple(text.split(sep)) if sep is not None else tuple(text)
    if alphabet is not None:
        word = check_word(word, alphabet)
    return word


def format_word(word, sep=""):
    return sep.join(word) if word else "ε"


def words_of_length(alphabet, length):
    """All words of a given length in length-lex order."""
    return [tuple(w) for w in product(alphabet, repeat=length)]
