"""Exact distribution arithmetic over Z_rho for the decryption-failure analysis.

Probability mass functions are stored in binary fixed point: integer
numerators over a common denominator ``2**frac_bits``.  Cyclic convolution
is done exactly on the integers (Kronecker substitution, one big GMP
multiplication) and then rounded back to the requested number of fractional
bits, so the only error source is one round-to-nearest per convolution.
"""

from __future__ import annotations

import csv
import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

import gmpy2
import mpmath

from .errors import ModulusMismatch
from .sampling import GaussianSpec, tail_bound

DEFAULT_FRAC_BITS = 768


@dataclass(frozen=True)
class ExactPmf:
    """pmf over Z_rho: ``P(x) = numerators[x] / 2**frac_bits``."""

    rho: int
    numerators: tuple[int, ...]
    frac_bits: int

    def __post_init__(self):
        if len(self.numerators) != self.rho:
            raise ValueError(f"expected {self.rho} weights, got {len(self.numerators)}")
        if any(n < 0 for n in self.numerators):
            raise ValueError("weights must be nonnegative")

    @classmethod
    def point_mass(cls, rho: int, x: int, frac_bits: int = DEFAULT_FRAC_BITS) -> ExactPmf:
        nums = [0] * rho
        nums[x % rho] = 1 << frac_bits
        return cls(rho, tuple(nums), frac_bits)

    @classmethod
    def uniform(cls, rho: int, frac_bits: int = DEFAULT_FRAC_BITS) -> ExactPmf:
        if (1 << frac_bits) % rho:
            raise ValueError("uniform pmf needs rho to divide 2**frac_bits")
        return cls(rho, (((1 << frac_bits) // rho),) * rho, frac_bits)

    @classmethod
    def from_fractions(cls, weights: Sequence[Fraction], frac_bits: int) -> ExactPmf:
        return cls(len(weights), tuple(_round_fraction(w, frac_bits) for w in weights), frac_bits)

    def fraction(self, x: int) -> Fraction:
        return Fraction(self.numerators[x % self.rho], 1 << self.frac_bits)

    def prob(self, x: int) -> mpmath.mpf:
        with mpmath.workprec(self.frac_bits + 64):
            return mpmath.ldexp(mpmath.mpf(self.numerators[x % self.rho]), -self.frac_bits)

    @property
    def weights(self) -> list[mpmath.mpf]:
        return [self.prob(x) for x in range(self.rho)]

    def mass(self, predicate: Callable[[int], bool]) -> mpmath.mpf:
        """Probability of ``{x : predicate(x)}``, exact up to the stored weights."""
        total = sum(n for x, n in enumerate(self.numerators) if predicate(x))
        with mpmath.workprec(max(self.frac_bits, total.bit_length()) + 64):
            return mpmath.ldexp(mpmath.mpf(total), -self.frac_bits)

    def total(self) -> Fraction:
        return Fraction(sum(self.numerators), 1 << self.frac_bits)

    def mode(self) -> int:
        return max(range(self.rho), key=self.numerators.__getitem__)

    def with_precision(self, frac_bits: int) -> ExactPmf:
        return ExactPmf(self.rho, tuple(_rescale(n, self.frac_bits, frac_bits) for n in self.numerators), frac_bits)


def _round_fraction(w: Fraction, frac_bits: int) -> int:
    num = w.numerator << frac_bits
    q, r = divmod(num, w.denominator)
    return q + (2 * r >= w.denominator)


def _rescale(n: int, from_bits: int, to_bits: int) -> int:
    if to_bits >= from_bits:
        return n << (to_bits - from_bits)
    shift = from_bits - to_bits
    return (n + (1 << (shift - 1))) >> shift


def _mp_sigma(sigma) -> mpmath.mpf:
    if isinstance(sigma, Fraction):
        return mpmath.mpf(sigma.numerator) / sigma.denominator
    if isinstance(sigma, str):
        return mpmath.mpf(sigma)
    return mpmath.mpf(sigma)


def gaussian_pmf(spec: GaussianSpec, frac_bits: int = DEFAULT_FRAC_BITS) -> ExactPmf:
    """Truncated D_{Z,sigma} folded onto Z_rho and normalized."""
    rho = spec.rho
    with mpmath.workprec(frac_bits + 64):
        sigma = _mp_sigma(spec.sigma)
        T = tail_bound(sigma)
        two_s2 = 2 * sigma * sigma
        acc = [mpmath.mpf(0)] * rho
        for v in range(-T, T + 1):
            acc[v % rho] += mpmath.exp(-mpmath.mpf(v * v) / two_s2)
        total = mpmath.fsum(acc)
        scale = mpmath.ldexp(mpmath.mpf(1), frac_bits)
        nums = tuple(int(mpmath.nint(w / total * scale)) for w in acc)
    return ExactPmf(rho, nums, frac_bits)


def binomial_pmf(r: int, rho: int, frac_bits: int = DEFAULT_FRAC_BITS) -> ExactPmf:
    """Binomial(r, 1/2) reduced mod rho."""
    if r < 1:
        raise ValueError("r must be >= 1")
    nums = [0] * rho
    for t in range(r + 1):
        nums[t % rho] += math.comb(r, t)
    return ExactPmf(rho, tuple(_rescale(n, r, frac_bits) for n in nums), frac_bits)


def _pack(nums: Sequence[int], slot_bytes: int) -> gmpy2.mpz:
    data = b"".join(n.to_bytes(slot_bytes, "little") for n in nums)
    return gmpy2.mpz(int.from_bytes(data, "little"))


def _unpack(value: gmpy2.mpz, slot_bytes: int, count: int) -> list[int]:
    data = int(value).to_bytes(slot_bytes * count, "little")
    return [int.from_bytes(data[i * slot_bytes:(i + 1) * slot_bytes], "little") for i in range(count)]


def _cyclic_product(a: Sequence[int], b: Sequence[int] | None, rho: int) -> list[int]:
    """Exact cyclic convolution of nonnegative integer sequences (``b=None`` squares ``a``)."""
    bits_a = max(n.bit_length() for n in a)
    bits_b = bits_a if b is None else max(n.bit_length() for n in b)
    slot_bytes = (bits_a + bits_b + rho.bit_length() + 8) // 8
    pa = _pack(a, slot_bytes)
    prod = pa * pa if b is None else pa * _pack(b, slot_bytes)
    linear = _unpack(prod, slot_bytes, 2 * rho - 1)
    return [linear[i] + (linear[i + rho] if i + rho < len(linear) else 0) for i in range(rho)]


def convolve(pmf1: ExactPmf, pmf2: ExactPmf, frac_bits: int | None = None) -> ExactPmf:
    """Cyclic convolution mod rho (distribution of the sum of independent variables).

    With ``frac_bits=None`` the result is exact (fractional bits add up);
    otherwise it is rounded to ``frac_bits``.
    """
    if pmf1.rho != pmf2.rho:
        raise ModulusMismatch(f"moduli differ: {pmf1.rho} != {pmf2.rho}")
    nums = _cyclic_product(pmf1.numerators, None if pmf2 is pmf1 else pmf2.numerators, pmf1.rho)
    bits = pmf1.frac_bits + pmf2.frac_bits
    out = ExactPmf(pmf1.rho, tuple(nums), bits)
    return out if frac_bits is None else out.with_precision(frac_bits)


def convolve_power(pmf: ExactPmf, r: int, frac_bits: int | None = None) -> ExactPmf:
    """r-fold self-convolution by repeated squaring, rounding after each product."""
    if r < 1:
        raise ValueError("r must be >= 1")
    bits = pmf.frac_bits if frac_bits is None else frac_bits
    result = None
    base = pmf.with_precision(bits)
    while True:
        if r & 1:
            result = base if result is None else convolve(result, base, bits)
        r >>= 1
        if not r:
            return result
        base = convolve(base, base, bits)


def error_term_pmf(r: int, spec: GaussianSpec, frac_bits: int = DEFAULT_FRAC_BITS) -> ExactPmf:
    """Distribution of ``tau + beta_1 + ... + beta_r`` mod rho.

    ``tau`` is Binomial(r, 1/2) (the sender's ``ba`` corrections) and the
    ``beta_i`` are the key's discrete Gaussian error exponents.
    """
    gauss_r = convolve_power(gaussian_pmf(spec, frac_bits), r, frac_bits)
    return convolve(binomial_pmf(r, spec.rho, frac_bits), gauss_r, frac_bits)


def shift_pmf(pmf: ExactPmf, s: int) -> ExactPmf:
    """Distribution of ``X + s``: ``P'(t) = P(t - s)``."""
    rho = pmf.rho
    s %= rho
    nums = pmf.numerators[rho - s:] + pmf.numerators[:rho - s] if s else pmf.numerators
    return ExactPmf(rho, nums, pmf.frac_bits)


def in_zero_region(d: int, rho: int) -> bool:
    """``d`` is at least as close to 0 as to rho/2 in Z_rho (ties go to 0)."""
    return 4 * d <= rho or 4 * d >= 3 * rho


def m2t_decision(d: int, rho: int) -> int:
    return 0 if in_zero_region(d, rho) else 1


def bit_failure_probabilities(
    pmf: ExactPmf,
    decide: Callable[[int, int], int] = m2t_decision,
    shift: int | None = None,
) -> tuple[mpmath.mpf, mpmath.mpf]:
    """``(P[fail | bit 0], P[fail | bit 1])`` for an error term with law ``pmf``.

    A 1 is encoded by adding ``shift`` (default rho/2) to the error term.
    """
    rho = pmf.rho
    if shift is None:
        shift = rho // 2
    fail0 = pmf.mass(lambda d: decide(d, rho) != 0)
    fail1 = pmf.mass(lambda d: decide((d + shift) % rho, rho) != 1)
    return fail0, fail1


def failure_probability(pmf: ExactPmf) -> mpmath.mpf:
    """Decryption failure probability for a uniformly random plaintext bit.

    Average of the bit-0 mass outside the zero region and the bit-1
    (rho/2-shifted) mass inside it.
    """
    fail0, fail1 = bit_failure_probabilities(pmf)
    with mpmath.workprec(pmf.frac_bits + 64):
        return (fail0 + fail1) / 2


@dataclass(frozen=True)
class FailureReportRow:
    r: int
    rho: int
    sigma: mpmath.mpf
    p_fail: mpmath.mpf

    @property
    def log2_rho(self) -> int:
        return self.rho.bit_length() - 1


def quarter_root(rho: int, frac_bits: int = DEFAULT_FRAC_BITS) -> mpmath.mpf:
    with mpmath.workprec(frac_bits + 64):
        return mpmath.root(mpmath.mpf(rho), 4)


def table_report(
    r_list: Iterable[int],
    rho_list: Iterable[int],
    frac_bits: int = DEFAULT_FRAC_BITS,
) -> list[FailureReportRow]:
    """Failure probability for every ``(r, rho)`` pair with ``sigma = rho^(1/4)``."""
    rows = []
    rho_list = list(rho_list)
    for r in r_list:
        for rho in rho_list:
            sigma = quarter_root(rho, frac_bits)
            pmf = error_term_pmf(r, GaussianSpec(sigma, rho), frac_bits)
            rows.append(FailureReportRow(r, rho, sigma, failure_probability(pmf)))
    return rows


def fig_export(rho: int = 256, sigma=4, r: int = 10, frac_bits: int = DEFAULT_FRAC_BITS) -> tuple[ExactPmf, ExactPmf]:
    """Error-term law for bit 0 and its rho/2 shift (bit 1)."""
    p0 = error_term_pmf(r, GaussianSpec(sigma, rho), frac_bits)
    return p0, shift_pmf(p0, rho // 2)


def subset_sum_error_pmf(m: int, spec: GaussianSpec, frac_bits: int = DEFAULT_FRAC_BITS) -> ExactPmf:
    """Law of ``sum_{i in S} e_i`` with each of ``m`` rows kept with probability 1/2.

    Used for the Regev/Sylow baselines, where errors are added over a
    random subset of rows.  The (2^-m) empty-subset redraw is ignored.
    """
    g = gaussian_pmf(spec, frac_bits)
    zero = ExactPmf.point_mass(spec.rho, 0, frac_bits)
    half = ExactPmf(spec.rho, tuple(a + b for a, b in zip(zero.numerators, g.numerators)), frac_bits + 1)
    return convolve_power(half, m, frac_bits)


# --- CSV emission -------------------------------------------------------------

def format_sci(x, digits: int = 6) -> str:
    """Scientific notation with ``digits`` significant digits, any exponent range."""
    if x == 0:
        return f"{0:.{digits - 1}e}"
    return f"{Decimal(mpmath.nstr(mpmath.mpf(x), digits + 24, min_fixed=1, max_fixed=0)):.{digits - 1}e}"


def format_prob(x, digits: int = 70) -> str:
    return mpmath.nstr(x, digits, min_fixed=1, max_fixed=0) if x else "0"


def write_report_csv(fh, rows: Iterable[FailureReportRow]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["r", "log2_rho", "sigma", "p_fail"])
    for row in rows:
        writer.writerow([row.r, row.log2_rho, format_sci(row.sigma), format_sci(row.p_fail)])


def write_fig_csv(fh, p0: ExactPmf, p1: ExactPmf) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["t", "p0", "p1"])
    for t in range(p0.rho):
        writer.writerow([t, format_prob(p0.prob(t)), format_prob(p1.prob(t))])
