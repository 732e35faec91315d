"""Covering codes: membership, covering verification, exact density, file I/O.

A code is a deduplicated set of words living in one Hamming space. Covering
verification offers three routes: a vectorized layered expansion (default),
a pure-Python per-ball bitmap, and the per-word brute-force scan kept as the
independent oracle for tests.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .hamming import (
    DEFAULT_ENUMERATION_GUARD,
    HammingSpace,
    Word,
    ball_volume,
    enumerate_ball,
    enumerate_space,
    expand_within_radius,
    hamming_distance,
    index_word,
    word_index,
)


@dataclass(frozen=True)
class Code:
    """A set of codewords in one Hamming space (no duplicates by construction)."""

    space: HammingSpace
    words: frozenset

    def __post_init__(self) -> None:
        for w in self.words:
            if not self.space.contains(w):
                raise ValueError(f"{w!r} is not a word of [{self.space.q}]^{self.space.n}")

    @classmethod
    def from_words(cls, space: HammingSpace, words: Iterable[Sequence[int]]) -> "Code":
        return cls(space, frozenset(space.require_word(w) for w in words))

    def __len__(self) -> int:
        return len(self.words)

    def sorted_words(self) -> List[Word]:
        return sorted(self.words)


@dataclass(frozen=True)
class DensityValue:
    """Exact covering density |K| * V_q(n,R) / q^n with a float projection."""

    exact: Fraction

    @property
    def approx(self) -> float:
        return float(self.exact)


def density(code: Code, radius: int) -> DensityValue:
    sp = code.space
    return DensityValue(Fraction(len(code) * ball_volume(sp, radius), sp.size))


def sphere_covering_lower_bound(space: HammingSpace, radius: int) -> int:
    """ceil(q^n / V_q(n,R)): no covering code of this radius can be smaller."""
    v = ball_volume(space, radius)
    return -(-space.size // v)


@dataclass(frozen=True)
class CoverVerdict:
    """Outcome of an exhaustive covering check.

    ``witness`` is the lexicographically smallest uncovered word when
    ``covered`` is False, making failures deterministic.
    """

    covered: bool
    witness: Optional[Word] = None


@dataclass(frozen=True)
class SampleVerdict:
    """Outcome of a randomized spot-check.

    One-sided: a witness definitively disproves covering, while
    ``found_uncovered=False`` only means no counterexample was sampled.
    """

    found_uncovered: bool
    witness: Optional[Word]
    samples: int


def coverage_mask(code: Code, radius: int) -> np.ndarray:
    """Boolean array over word indices marking words within ``radius`` of the code."""
    sp = code.space
    mask = np.zeros(sp.size, dtype=bool)
    if code.words:
        mask[[word_index(sp, w) for w in code.words]] = True
    return expand_within_radius(sp, mask, radius)


def _coverage_bitmap(code: Code, radius: int) -> bytearray:
    """Per-ball bitmap marking (pure Python alternative to coverage_mask)."""
    sp = code.space
    bitmap = bytearray((sp.size + 7) // 8)
    for c in code.words:
        for w in enumerate_ball(sp, c, radius):
            i = word_index(sp, w)
            bitmap[i >> 3] |= 1 << (i & 7)
    return bitmap


def verify_covering(
    code: Code,
    radius: int,
    *,
    guard: int = DEFAULT_ENUMERATION_GUARD,
    method: str = "expand",
) -> CoverVerdict:
    """Exhaustively decide whether every word is within ``radius`` of the code.

    ``method`` selects the verification route: "expand" (vectorized layered
    expansion, default), "ballmark" (pure-Python per-ball bitmap), or "scan"
    (per-word brute force). All three produce the identical verdict.
    """
    sp = code.space
    sp.check_enumerable(guard)
    if method == "scan":
        return verify_covering_scan(code, radius, guard=guard)
    if method == "expand":
        mask = coverage_mask(code, radius)
        holes = np.flatnonzero(~mask)
        if holes.size == 0:
            return CoverVerdict(True)
        return CoverVerdict(False, index_word(sp, int(holes[0])))
    if method == "ballmark":
        bitmap = _coverage_bitmap(code, radius)
        for i in range(sp.size):
            if not (bitmap[i >> 3] >> (i & 7)) & 1:
                return CoverVerdict(False, index_word(sp, i))
        return CoverVerdict(True)
    raise ValueError(f"unknown method {method!r}")


def verify_covering_scan(
    code: Code, radius: int, *, guard: int = DEFAULT_ENUMERATION_GUARD
) -> CoverVerdict:
    """Brute-force oracle: test every word against every codeword.

    Costs q^n * |K| distance computations; kept as the independent baseline
    the faster routes are checked against.
    """
    sp = code.space
    sp.check_enumerable(guard)
    words = code.sorted_words()
    for w in enumerate_space(sp, guard):
        if not any(hamming_distance(w, c) <= radius for c in words):
            return CoverVerdict(False, w)
    return CoverVerdict(True)


def verify_covering_sampled(
    code: Code, radius: int, samples: int, seed: int = 0
) -> SampleVerdict:
    """Spot-check ``samples`` uniform random words against the code.

    Usable on spaces far beyond the enumeration guard. Deterministic for a
    fixed seed.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    sp = code.space
    rng = random.Random(f"sampled-verify:{seed}")
    words = code.sorted_words()
    for k in range(samples):
        w = tuple(rng.randrange(sp.q) for _ in range(sp.n))
        if not any(hamming_distance(w, c) <= radius for c in words):
            return SampleVerdict(True, w, k + 1)
    return SampleVerdict(False, None, samples)


# ---------------------------------------------------------------------------
# Code file format: {"q": int, "n": int, "words": [str, ...]} with words as
# digit strings for q <= 10 and comma-separated integers otherwise. The
# serialized form is canonical: sorted keys, words in lexicographic order.
# ---------------------------------------------------------------------------


def word_to_text(w: Sequence[int], q: int) -> str:
    if q <= 10:
        return "".join(str(s) for s in w)
    return ",".join(str(s) for s in w)


def text_to_word(text: str, space: HammingSpace) -> Word:
    if space.q <= 10:
        syms = [int(ch) for ch in text]
    else:
        syms = [int(part) for part in text.split(",")] if text else []
    return space.require_word(syms)


def code_to_dict(code: Code) -> dict:
    sp = code.space
    return {
        "q": sp.q,
        "n": sp.n,
        "words": [word_to_text(w, sp.q) for w in code.sorted_words()],
    }


def code_from_dict(obj: dict) -> Code:
    space = HammingSpace(obj["q"], obj["n"])
    return Code.from_words(space, (text_to_word(t, space) for t in obj["words"]))


def dumps_code(code: Code) -> str:
    return json.dumps(code_to_dict(code), sort_keys=True, indent=2) + "\n"


def write_code(code: Code, path) -> None:
    Path(path).write_text(dumps_code(code))


def read_code(path) -> Code:
    return code_from_dict(json.loads(Path(path).read_text()))
