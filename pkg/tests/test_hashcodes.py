"""Hash code search, bounds, and serialization."""

from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from antipodes.hashcodes import (
    HashCode,
    HashCodeError,
    code_from_obj,
    counting_bound,
    dump_code,
    greedy_code,
    is_perfect,
    load_code,
    max_code,
    random_code,
    rate_bounds,
)
from antipodes.rationals import LogRatio, floor_ratio, ratio


def brute_max(b, k, m):
    """Independent exhaustive reference for tiny parameter sets."""

    def split(batch):
        return any(len({w[j] for w in batch}) == len(batch) for j in range(m))

    universe = list(product(range(1, b + 1), repeat=m))
    best = 0
    for size in range(len(universe), 0, -1):
        if size <= best:
            break
        for subset in combinations(universe, size):
            if all(split(batch) for batch in combinations(subset, k)):
                best = size
                break
    return best


def test_counting_bound_values():
    assert counting_bound(3, 3, 2) == ratio(9, 2)
    assert counting_bound(2, 2, 5) == 32
    assert counting_bound(4, 3, 1) == 4
    # length zero: only k-1 words can avoid an unseparated batch
    assert counting_bound(3, 3, 0) == 2


def test_counting_bound_rejects_bad_params():
    with pytest.raises(HashCodeError):
        counting_bound(2, 3, 1)
    with pytest.raises(HashCodeError):
        counting_bound(3, 1, 1)
    with pytest.raises(HashCodeError):
        counting_bound(3, 3, -1)


def test_single_letter_codes_use_whole_alphabet():
    for b, k in ((2, 2), (3, 3), (4, 3)):
        result = max_code(b, k, 1)
        assert result.optimal
        assert len(result.code) == b


def test_order_two_codes_take_every_word():
    for m in (1, 2, 3):
        result = max_code(2, 2, m)
        assert result.optimal
        assert len(result.code) == 2**m


def test_ternary_order_three_length_two():
    result = max_code(3, 3, 2)
    assert result.optimal
    assert len(result.code) == 4
    assert result.code.words == ((1, 1), (1, 2), (2, 3), (3, 3))
    assert is_perfect(result.code) == (True, None)
    # Exhaustive reference over all 512 subsets agrees.
    assert brute_max(3, 3, 2) == 4
    # The counting bound is not reached here: floor(9/2) = 4 is, but the
    # unrounded value is strictly larger.
    assert len(result.code) == floor_ratio(counting_bound(3, 3, 2))


def test_budget_cuts_search_short():
    result = max_code(3, 3, 2, budget=1)
    assert not result.optimal
    assert len(result.code) >= 1
    with pytest.raises(HashCodeError):
        max_code(3, 3, 2, budget=0)


def test_greedy_is_perfect_but_smaller_here():
    code = greedy_code(3, 3, 2)
    assert is_perfect(code) == (True, None)
    assert code.words == ((1, 1), (1, 2), (1, 3))
    assert len(code) < len(max_code(3, 3, 2).code)


def test_greedy_accepts_a_custom_scan_order():
    order = sorted(product(range(1, 4), repeat=2), reverse=True)
    code = greedy_code(3, 3, 2, order=order)
    assert is_perfect(code) == (True, None)
    assert code.words[0] == (3, 3)


def test_exact_values_are_monotone():
    def n(b, k, m):
        result = max_code(b, k, m)
        assert result.optimal
        return len(result.code)

    assert n(2, 2, 1) <= n(3, 2, 1) <= n(4, 2, 1)
    assert n(2, 2, 1) <= n(2, 2, 2) <= n(2, 2, 3)
    assert n(3, 3, 2) <= n(3, 2, 2)


def test_is_perfect_reports_first_bad_batch():
    code = HashCode(3, 3, 2, ((1, 1), (1, 2), (2, 1)))
    ok, batch = is_perfect(code)
    assert not ok
    assert batch == ((1, 1), (1, 2), (2, 1))


def test_code_validation():
    with pytest.raises(HashCodeError):
        HashCode(3, 3, 2, ((1, 1), (1, 1)))
    with pytest.raises(HashCodeError):
        HashCode(3, 3, 2, ((1, 4),))
    with pytest.raises(HashCodeError):
        HashCode(3, 3, 2, ((1,),))
    with pytest.raises(HashCodeError):
        HashCode(3, 3, 2, ((1, True),))


def test_random_code_deterministic_and_perfect():
    a = random_code(3, 3, 12, seed=7)
    b = random_code(3, 3, 12, seed=7)
    assert a == b
    assert is_perfect(a) == (True, None)
    assert len(a) >= 1


def test_random_code_order_two():
    code = random_code(2, 2, 3, seed=5)
    assert is_perfect(code) == (True, None)
    assert len(set(code.words)) == len(code)


def test_random_code_needs_integer_seed():
    with pytest.raises(HashCodeError):
        random_code(2, 2, 3, seed="7")


def test_rate_bounds_binary_meet():
    lower, upper = rate_bounds(2, 2)
    assert lower == upper == LogRatio(1, 2)


def test_rate_bounds_ternary_gap():
    lower, upper = rate_bounds(3, 3)
    assert upper == LogRatio(1, ratio(3, 2))
    assert lower < upper
    assert not lower.is_zero()


def test_roundtrip(tmp_path):
    code = max_code(3, 3, 2).code
    path = tmp_path / "code.json"
    dump_code(code, path)
    assert load_code(path) == code


def test_obj_diagnostics():
    with pytest.raises(HashCodeError, match="words\\[1\\]\\[1\\]"):
        code_from_obj({"b": 3, "k": 3, "m": 2, "words": [[1, 1], [1, "x"]]})
    with pytest.raises(HashCodeError, match="m: missing"):
        code_from_obj({"b": 3, "k": 3, "words": []})
    with pytest.raises(HashCodeError, match="top level"):
        code_from_obj([1, 2])


@st.composite
def _params(draw):
    k = draw(st.integers(2, 3))
    b = draw(st.integers(k, 4))
    m = draw(st.integers(1, 3))
    return b, k, m


@settings(max_examples=40, deadline=None)
@given(_params())
def test_greedy_properties(params):
    b, k, m = params
    code = greedy_code(b, k, m)
    assert is_perfect(code) == (True, None)
    assert len(code) <= floor_ratio(counting_bound(b, k, m))


@settings(max_examples=15, deadline=None)
@given(_params())
def test_search_beats_greedy(params):
    b, k, m = params
    if b**m > 30:  # keep the exhaustive search cheap
        return
    result = max_code(b, k, m)
    assert result.optimal
    assert len(result.code) >= len(greedy_code(b, k, m))


@settings(max_examples=25, deadline=None)
@given(_params(), st.randoms(use_true_random=False))
def test_relabeling_preserves_perfection(params, rng):
    b, k, m = params
    code = greedy_code(b, k, m)
    maps = []
    for _ in range(m):
        perm_syms = list(range(1, b + 1))
        rng.shuffle(perm_syms)
        maps.append({i + 1: perm_syms[i] for i in range(b)})
    relabeled = tuple(
        tuple(maps[j][w[j]] for j in range(m)) for w in code.words
    )
    again = HashCode(b, k, m, relabeled)
    assert is_perfect(again) == (True, None)
