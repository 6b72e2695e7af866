"""Seedable randomness: uniform, discrete Gaussian and subset samplers.

This is a research implementation.  The generator is Python's Mersenne
Twister, which is reproducible but not cryptographically secure.
"""

from __future__ import annotations

import bisect
import hashlib
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .group import BASE_BA, GroupElement, GroupParams, power
from .errors import InvalidParams

WORD_BITS = 64
TAIL_CUT = 12  # truncate the Gaussian at ceil(12 sigma)


class RandomSource:
    """Deterministic stream of 64-bit words.  Not safe to share between threads."""

    def __init__(self, seed: int):
        if seed < 0 or seed >= 1 << 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.seed = seed
        self._rng = random.Random(seed)

    @classmethod
    def derive(cls, master_seed: int, counter: int) -> RandomSource:
        """Independent child source for trial ``counter`` of a run seeded with ``master_seed``."""
        digest = hashlib.blake2b(f"{master_seed}:{counter}".encode(), digest_size=8).digest()
        return cls(int.from_bytes(digest, "big"))

    def word(self) -> int:
        return self._rng.getrandbits(WORD_BITS)

    def bits(self, k: int) -> int:
        return self._rng.getrandbits(k) if k > 0 else 0

    def below(self, n: int) -> int:
        """Uniform on ``[0, n)`` for any ``n >= 1``."""
        return self._rng.randrange(n)

    def sample(self, population: range, k: int) -> list[int]:
        return self._rng.sample(population, k)


@dataclass(frozen=True)
class GaussianSpec:
    """Discrete Gaussian D_{Z,sigma} reduced modulo ``rho``.

    ``sigma`` may be any positive real (int, float, Fraction, mpf).
    ``rho`` is the modulus of the target ring; it need not be a power of two.
    """

    sigma: object
    rho: int

    def __post_init__(self):
        if not self.sigma > 0:
            raise InvalidParams(f"sigma must be positive, got {self.sigma!r}")
        if self.rho < 1:
            raise InvalidParams(f"modulus must be >= 1, got {self.rho}")

    @property
    def tail(self) -> int:
        """Truncation bound ``ceil(12 sigma)``."""
        return tail_bound(self.sigma)


def tail_bound(sigma) -> int:
    if isinstance(sigma, (int, Fraction)):
        return math.ceil(TAIL_CUT * Fraction(sigma))
    return int(mpmath.ceil(TAIL_CUT * mpmath.mpf(sigma)))


def uniform_mod(src: RandomSource, rho: int) -> int:
    if rho < 1:
        raise ValueError("modulus must be >= 1")
    if rho & (rho - 1) == 0:
        return src.bits(rho.bit_length() - 1)
    return src.below(rho)


def uniform_cycle_element(src: RandomSource, p: GroupParams, base: str) -> GroupElement:
    return power(p, p.generator(base), uniform_mod(src, p.rho))


@lru_cache(maxsize=64)
def _gaussian_cdf(sigma_key: str) -> tuple[tuple[int, ...], int]:
    """Integer CDF thresholds out of 2^64 for the truncated D_{Z,sigma}."""
    with mpmath.workprec(160):
        sigma = mpmath.mpf(sigma_key)
        T = tail_bound(sigma)
        weights = [mpmath.exp(-mpmath.mpf(v * v) / (2 * sigma * sigma)) for v in range(-T, T + 1)]
        total = mpmath.fsum(weights)
        scale = mpmath.mpf(2) ** WORD_BITS
        cdf, run = [], mpmath.mpf(0)
        for w in weights:
            run += w
            cdf.append(int(mpmath.nint(run / total * scale)))
    cdf[-1] = 1 << WORD_BITS
    return tuple(cdf), T


def _sigma_key(sigma) -> str:
    if isinstance(sigma, Fraction):
        return str(mpmath.mpf(sigma.numerator) / sigma.denominator)
    return repr(float(sigma)) if isinstance(sigma, float) else str(mpmath.mpf(sigma))


def gaussian_integer(src: RandomSource, sigma) -> int:
    """Signed sample from D_{Z,sigma} truncated to ``|x| <= ceil(12 sigma)``, by inverse CDF."""
    cdf, T = _gaussian_cdf(_sigma_key(sigma))
    return bisect.bisect_right(cdf, src.word()) - T


def gaussian_exponent(src: RandomSource, spec: GaussianSpec) -> int:
    return gaussian_integer(src, spec.sigma) % spec.rho


def random_subset(src: RandomSource, m: int) -> list[int]:
    """Ascending 0-based subset of ``range(m)``; each index kept with probability 1/2.

    An empty draw is discarded and redrawn, so the result is uniform over
    the nonempty subsets.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    while True:
        mask = src.bits(m)
        if mask:
            return [i for i in range(m) if mask >> i & 1]


def fixed_size_subset(src: RandomSource, m: int, r: int) -> list[int]:
    """Ascending uniformly random ``r``-subset of ``range(m)``."""
    if not 1 <= r <= m:
        raise ValueError(f"subset size must be in [1, {m}], got {r}")
    return sorted(src.sample(range(m), r))


def ba_gaussian(src: RandomSource, p: GroupParams, sigma) -> GroupElement:
    """Error element ``(ba)^beta`` with Gaussian exponent ``beta``."""
    return power(p, p.generator(BASE_BA), gaussian_integer(src, sigma))
