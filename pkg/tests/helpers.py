"""Shared loaders and random term builders for the test suite."""

from __future__ import annotations

import random
from functools import lru_cache
from pathlib import Path

from gkcalc.model import load_model, random_model
from gkcalc.presentation import Presentation, parse_presentation
from gkcalc.terms import FormalSum, SignedWord, Word, alphabet, enumerate_words

FIXTURES = Path(__file__).parent / "fixtures"

# One PASS/FAIL line per acceptance criterion, printed in the session summary.
ACCEPTANCE_LINES: list[str] = []


@lru_cache(maxsize=None)
def load(name: str) -> Presentation:
    return parse_presentation((FIXTURES / f"{name}.gk").read_text())


def model_file(pname: str, mname: str):
    return load_model(load(pname), FIXTURES / f"{mname}.json")


@lru_cache(maxsize=None)
def models(name: str, count: int = 5, seed: int = 7, max_dim: int = 3) -> tuple:
    rng = random.Random(seed)
    return tuple(random_model(load(name), rng, max_dim=max_dim) for _ in range(count))


@lru_cache(maxsize=None)
def words_by_type(name: str, max_len: int = 3) -> dict:
    return enumerate_words(load(name), max_len)


def random_word(p: Presentation, rng: random.Random, max_len: int, dom: str | None = None) -> Word:
    """A random typed path; starts at ``dom`` when given."""
    letters = alphabet(p)
    first = [l for l in letters if dom is None or l.dom == dom]
    chain = [rng.choice(first)]
    for _ in range(rng.randint(1, max_len) - 1):
        nxt = [l for l in letters if l.dom == chain[-1].cod]
        if not nxt:
            break
        chain.append(rng.choice(nxt))
    return Word(tuple(chain), chain[0].dom, chain[-1].cod)


def random_sum(p: Presentation, rng: random.Random, dom: str, cod: str, max_terms: int = 3, max_len: int = 3) -> FormalSum:
    pool = words_by_type_cached(p, max_len).get((dom, cod), [])
    terms = []
    if pool:
        for _ in range(rng.randint(0, max_terms)):
            terms.append(SignedWord(rng.choice((1, -1)), rng.choice(pool)))
    return FormalSum(tuple(terms), dom, cod)


_WORD_CACHE: dict = {}


def words_by_type_cached(p: Presentation, max_len: int) -> dict:
    key = (id(p), max_len)
    if key not in _WORD_CACHE:
        _WORD_CACHE[key] = enumerate_words(p, max_len)
    return _WORD_CACHE[key]
