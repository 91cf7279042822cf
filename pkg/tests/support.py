"""Shared test helpers."""

import random


class Exhausted(Exception):
    pass


class ReplayRng:
    """Hands out a fixed list of getrandbits words, then raises Exhausted."""

    def __init__(self, words):
        self.words = list(words)

    def getrandbits(self, k):
        if not self.words:
            raise Exhausted
        w = self.words.pop(0)
        assert 0 <= w < 1 << k, (w, k)
        return w


def chi_square(counts, expected):
    return sum((c - expected) ** 2 / expected for c in counts)


# Upper 0.001 quantiles of the chi-square distribution.
CHI2_999 = {5: 20.515, 7: 24.322, 15: 37.697}


def seeded(seed=0):
    return random.Random(seed)
