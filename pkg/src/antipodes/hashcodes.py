"""Perfect hash codes over a finite alphabet.

A code of order k is a set of equal-length words over {1..b} such that
any k distinct words share a coordinate where all k symbols are pairwise
different.  Order 2 degenerates to "the words are distinct" and is
allowed for uniformity.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from itertools import combinations, product
from math import factorial, perm

from .rationals import LogRatio, floor_ratio, ratio

__all__ = [
    "HashCode",
    "HashCodeError",
    "SearchResult",
    "code_from_obj",
    "code_to_obj",
    "counting_bound",
    "dump_code",
    "greedy_code",
    "is_perfect",
    "load_code",
    "max_code",
    "random_code",
    "rate_bounds",
]

DEFAULT_BUDGET = 500_000


class HashCodeError(ValueError):
    pass


def _check_params(b, k, m, min_m: int = 1) -> None:
    for label, value in (("b", b), ("k", k), ("m", m)):
        if not isinstance(value, int) or isinstance(value, bool):
            raise HashCodeError(f"{label}: expected an integer")
    if k < 2:
        raise HashCodeError("k: order must be at least 2")
    if b < k:
        raise HashCodeError("b: alphabet must have at least k symbols")
    if m < min_m:
        raise HashCodeError(f"m: length must be at least {min_m}")


@dataclass(frozen=True)
class HashCode:
    """Validated container; the separation promise itself is checked by
    is_perfect, not on construction."""

    b: int
    k: int
    m: int
    words: tuple

    def __post_init__(self):
        _check_params(self.b, self.k, self.m)
        if not isinstance(self.words, tuple):
            raise HashCodeError("words: expected a tuple of words")
        for w_idx, word in enumerate(self.words):
            if not isinstance(word, tuple) or len(word) != self.m:
                raise HashCodeError(f"words[{w_idx}]: expected a length-{self.m} tuple")
            for s_idx, sym in enumerate(word):
                if not isinstance(sym, int) or isinstance(sym, bool):
                    raise HashCodeError(f"words[{w_idx}][{s_idx}]: expected an integer")
                if not 1 <= sym <= self.b:
                    raise HashCodeError(
                        f"words[{w_idx}][{s_idx}]: symbol outside 1..{self.b}"
                    )
        if len(set(self.words)) != len(self.words):
            raise HashCodeError("words: duplicates present")

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)


def _separated(batch, m) -> bool:
    for j in range(m):
        if len({w[j] for w in batch}) == len(batch):
            return True
    return False


def _compatible(kept, word, k, m) -> bool:
    """Every order-k batch through the new word stays separated."""
    if len(kept) < k - 1:
        return True
    for rest in combinations(kept, k - 1):
        if not _separated(rest + (word,), m):
            return False
    return True


def is_perfect(code: HashCode):
    """Return (True, None), or (False, first unseparated batch)."""
    for batch in combinations(code.words, code.k):
        if not _separated(batch, code.m):
            return False, batch
    return True, None


def counting_bound(b: int, k: int, m: int):
    """Upper limit on the size of an order-k code: (k-1) * (b/(k-1))**m.

    Projecting away one coordinate and grouping by the surviving symbol
    loses at most a (k-1)/b factor per step, and length-0 codes hold at
    most k-1 words.
    """
    _check_params(b, k, m, min_m=0)
    return ratio(k - 1) * ratio(b, k - 1) ** m


@dataclass(frozen=True)
class SearchResult:
    code: HashCode
    optimal: bool
    nodes: int


def max_code(b: int, k: int, m: int, budget: int | None = DEFAULT_BUDGET) -> SearchResult:
    """Depth-first search for a largest order-k code.

    Candidates are scanned in lexicographic order.  Per-coordinate symbol
    renaming is factored out: a word may only use symbols at most one above
    the largest seen so far in that coordinate, which keeps exactly one
    member of each renaming class reachable.  The search stops early when
    the incumbent meets the counting bound.  A spent node budget returns
    the incumbent with optimal=False.
    """
    _check_params(b, k, m)
    if budget is not None and budget < 1:
        raise HashCodeError("budget: must be positive when given")
    cap = floor_ratio(counting_bound(b, k, m))
    universe = list(product(range(1, b + 1), repeat=m))
    best: list = []
    nodes = 0
    exhausted = False

    def extend(chosen, start, maxseen):
        nonlocal best, nodes, exhausted
        for idx in range(start, len(universe)):
            if len(chosen) + (len(universe) - idx) <= len(best):
                return
            word = universe[idx]
            if any(word[j] > maxseen[j] + 1 for j in range(m)):
                continue
            nodes += 1
            if budget is not None and nodes > budget:
                exhausted = True
                return
            if not _compatible(chosen, word, k, m):
                continue
            chosen.append(word)
            if len(chosen) > len(best):
                best = list(chosen)
            if len(best) < cap:
                extend(chosen, idx + 1, [max(a, s) for a, s in zip(maxseen, word)])
            chosen.pop()
            if exhausted or len(best) >= cap:
                return

    extend([], 0, [0] * m)
    code = HashCode(b, k, m, tuple(best))
    return SearchResult(code=code, optimal=not exhausted, nodes=nodes)


def greedy_code(b: int, k: int, m: int, order=None) -> HashCode:
    """Single sweep keeping every word that preserves separation.

    Scans in lexicographic order unless an explicit word order is given.
    Fast, deterministic, and usually short of optimal."""
    _check_params(b, k, m)
    if order is None:
        candidates = product(range(1, b + 1), repeat=m)
    else:
        candidates = (tuple(w) for w in order)
    kept: list = []
    seen = set()
    for word in candidates:
        if word in seen:
            continue
        seen.add(word)
        if _compatible(kept, word, k, m):
            kept.append(word)
    return HashCode(b, k, m, tuple(kept))


def _iroot(x: int, r: int) -> int:
    # Largest g with g**r <= x.
    if x < 0:
        raise HashCodeError("iroot of a negative number")
    if x == 0 or r == 1:
        return x
    g = max(1, int(round(x ** (1.0 / r))))
    while g > 0 and g**r > x:
        g -= 1
    while (g + 1) ** r <= x:
        g += 1
    return g


def random_code(b: int, k: int, m: int, seed: int) -> HashCode:
    """Sample-and-delete construction.

    A uniform coordinate separates a fixed batch of k words with chance
    s = b!/((b-k)! b^k), so a batch survives all m coordinates unsplit
    with chance q = (1-s)^m.  Sampling ((k-1)!/q)^(1/(k-1)) words keeps
    the expected number of unsplit batches near size/k; one deletion
    round (dropping the lexicographically largest word of each unsplit
    batch) then leaves a perfect code.
    """
    _check_params(b, k, m)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise HashCodeError("seed: expected an integer")
    s = ratio(perm(b, k), b**k)
    q = (1 - s) ** m
    target = _iroot(floor_ratio(ratio(factorial(k - 1)) / q), k - 1)
    rng = random.Random(seed)
    sampled: list = []
    seen = set()
    for _ in range(target):
        word = tuple(rng.randint(1, b) for _ in range(m))
        if word not in seen:
            seen.add(word)
            sampled.append(word)
    doomed = set()
    if k > 2:  # distinct words always split at order 2
        for batch in combinations(sampled, k):
            if not _separated(batch, m):
                doomed.add(max(batch))
    words = tuple(w for w in sampled if w not in doomed)
    return HashCode(b, k, m, words)


def rate_bounds(b: int, k: int) -> tuple:
    """Exponential growth window for order-k codes over b symbols.

    Sizes grow like base**m; the counting bound caps the base at
    b/(k-1), while the sample-and-delete construction achieves
    (1/(1-s))^(1/(k-1)).  Returned as (lower, upper) logarithms.
    """
    _check_params(b, k, 1)
    s = ratio(perm(b, k), b**k)
    lower = LogRatio(ratio(1, k - 1), 1 / (1 - s))
    upper = LogRatio(1, ratio(b, k - 1))
    return lower, upper


# ---------------------------------------------------------------------------
# serialization


def code_to_obj(code: HashCode) -> dict:
    return {
        "b": code.b,
        "k": code.k,
        "m": code.m,
        "words": [list(w) for w in code.words],
    }


def code_from_obj(obj) -> HashCode:
    if not isinstance(obj, dict):
        raise HashCodeError("top level: expected an object")
    for field in ("b", "k", "m", "words"):
        if field not in obj:
            raise HashCodeError(f"{field}: missing")
    words = obj["words"]
    if not isinstance(words, list):
        raise HashCodeError("words: expected a list")
    rows = []
    for w_idx, row in enumerate(words):
        if not isinstance(row, list):
            raise HashCodeError(f"words[{w_idx}]: expected a list")
        rows.append(tuple(row))
    return HashCode(obj["b"], obj["k"], obj["m"], tuple(rows))


def load_code(path) -> HashCode:
    with open(path) as fh:
        return code_from_obj(json.load(fh))


def dump_code(code: HashCode, path) -> None:
    with open(path, "w") as fh:
        json.dump(code_to_obj(code), fh, indent=2, sort_keys=True)
        fh.write("\n")
