import pytest
from hypothesis import given, strategies as st

from hypertope.words import (
    UnknownGenerator,
    WordSyntaxError,
    commutator,
    conjugate,
    free_reduce,
    inverse,
    parse_word,
    power,
    render,
)

R = ["r0", "r1", "r2"]
letters = st.sampled_from([1, -1, 2, -2, 3, -3])
words = st.lists(letters, max_size=20).map(tuple)


def test_power():
    assert parse_word("r0^2", R) == (1, 1)
    assert parse_word("r0^-2", R) == (-1, -1)
    assert parse_word("(r0 r1)^0", R) == ()


def test_commutator_expansion():
    assert parse_word("[(r0*r1)^2, r2]", R) == (-2, -1, -2, -1, -3, 1, 2, 1, 2, 3)


def test_conjugation():
    assert parse_word("r0^r1", R) == (-2, 1, 2)
    assert parse_word("r0^(r1 r2)", R) == (-3, -2, 1, 2, 3)


def test_juxtaposition_and_star():
    assert parse_word("r0r1", R) == parse_word("r0 r1", R) == parse_word("r0*r1", R) == (1, 2)
    assert parse_word("1", R) == ()


def test_free_reduce_examples():
    assert free_reduce((1, -1)) == ()
    assert free_reduce((1, 2, -2, 1)) == (1, 1)
    assert free_reduce((1, 2, 3)) == (1, 2, 3)


def test_errors_carry_position():
    with pytest.raises(UnknownGenerator):
        parse_word("r0 x", R)
    with pytest.raises(WordSyntaxError) as exc:
        parse_word("(r0 r1", R)
    assert exc.value.pos == 6
    with pytest.raises(WordSyntaxError):
        parse_word("[r0 r1]", R)


@given(words)
def test_free_reduce_idempotent(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert all(r[i] != -r[i + 1] for i in range(len(r) - 1))


@given(words)
def test_inverse_cancels(w):
    assert free_reduce(w + inverse(w)) == ()


@given(words, words)
def test_commutator_and_conjugate_definitions(x, y):
    assert commutator(x, y) == free_reduce(inverse(x) + inverse(y) + x + y)
    assert conjugate(x, y) == free_reduce(inverse(y) + x + y)


@given(words, st.integers(-4, 4))
def test_power_matches_repetition(w, k):
    base = w if k >= 0 else inverse(w)
    assert power(w, k) == free_reduce(base * abs(k))


@given(words)
def test_render_roundtrip(w):
    w = free_reduce(w)
    assert parse_word(render(w, R), R) == w
