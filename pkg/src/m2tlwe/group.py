"""Arithmetic in the modular-maximal cyclic group M_{2^t}.

The group has the presentation

    <a, b | a^(2^(t-1)) = e, b^2 = e, ab = b a^(2^(t-2) + 1)>

and every element is kept in the normal form ``b^alpha a^k`` with
``alpha in {0, 1}`` and ``0 <= k < rho``, ``rho = 2^(t-1)``.  Elements are
plain ``(alpha, k)`` tuples so they hash, compare and unpack cheaply.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

from .errors import InvalidParams, NotInCycle, ParamsTooLarge

BASE_A = "a"
BASE_BA = "ba"

# Beyond this size the dlog lookup table is not built.
_MAX_TABLE_T = 16


@dataclass(frozen=True)
class GroupParams:
    t: int
    rho: int = field(init=False)
    half: int = field(init=False)

    def __post_init__(self):
        if not isinstance(self.t, int) or self.t < 4:
            raise InvalidParams(f"t must be an integer >= 4, got {self.t!r}")
        object.__setattr__(self, "rho", 1 << (self.t - 1))
        object.__setattr__(self, "half", 1 << (self.t - 2))

    @property
    def order(self) -> int:
        return 1 << self.t

    def element(self, alpha: int, k: int) -> GroupElement:
        """Build the normal form ``b^alpha a^k``, reducing both exponents."""
        return GroupElement(alpha % 2, k % self.rho)

    def elements(self) -> list[GroupElement]:
        """All 2^t elements, ``alpha`` major."""
        return [GroupElement(alpha, k) for alpha in (0, 1) for k in range(self.rho)]

    def index(self, w: GroupElement) -> int:
        return w.alpha * self.rho + w.k

    def generator(self, base: str) -> GroupElement:
        if base == BASE_A:
            return GroupElement(0, 1)
        if base == BASE_BA:
            return GroupElement(1, 1)
        raise ValueError(f"unknown cycle base {base!r}")


class GroupElement(NamedTuple):
    alpha: int
    k: int

    def __str__(self) -> str:
        return f"({self.alpha},{self.k})"


_ELEMENT_RE = re.compile(r"^\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)$")


def parse_element(text: str, p: GroupParams | None = None) -> GroupElement:
    """Parse the ``(alpha,k)`` text encoding.

    With ``p`` given the element must already be in normal form.
    """
    m = _ELEMENT_RE.match(text.strip())
    if not m:
        raise ValueError(f"malformed group element {text!r}")
    alpha, k = int(m.group(1)), int(m.group(2))
    if p is not None and (alpha not in (0, 1) or not 0 <= k < p.rho):
        raise ValueError(f"element {text!r} is not in normal form for t={p.t}")
    return GroupElement(alpha, k)


def format_element(w: GroupElement) -> str:
    return f"({w.alpha},{w.k})"


def identity(p: GroupParams) -> GroupElement:
    return GroupElement(0, 0)


def multiply(p: GroupParams, w1: GroupElement, w2: GroupElement) -> GroupElement:
    a1, k1 = w1
    a2, k2 = w2
    if k1 % 2 == 0:
        return GroupElement((a1 + a2) % 2, (k1 + k2) % p.rho)
    if a2 == 0:
        return GroupElement(a1, (k1 + k2) % p.rho)
    return GroupElement((a1 + 1) % 2, (k1 + k2 + p.half) % p.rho)


def f_shift(p: GroupParams, n: int) -> int:
    """The extra a-exponent picked up by ``(b a^odd)^n``: 0, 0, half, half, ..."""
    return (p.half * ((n % p.rho) // 2)) % p.rho


def power(p: GroupParams, w: GroupElement, n: int) -> GroupElement:
    alpha, k = w
    n %= p.rho
    if alpha == 0:
        return GroupElement(0, (k * n) % p.rho)
    if k % 2 == 0:
        return GroupElement(n % 2, (k * n) % p.rho)
    return GroupElement(n % 2, (k * n + f_shift(p, n)) % p.rho)


def inverse(p: GroupParams, w: GroupElement) -> GroupElement:
    alpha, k = w
    if alpha == 0:
        return GroupElement(0, (-k) % p.rho)
    if k % 2 == 0:
        return GroupElement(1, (-k) % p.rho)
    return GroupElement(1, (p.half - k) % p.rho)


@dataclass(frozen=True)
class CycleMembership:
    in_a: bool
    in_ba: bool


def in_cycle(p: GroupParams, w: GroupElement, base: str) -> bool:
    if base == BASE_A:
        return w.alpha == 0
    if base == BASE_BA:
        # (ba)^n = b^(n mod 2) a^(n + f(n)) and f(n) is even, so alpha
        # and the parity of k always agree on this cycle.
        return w.alpha == w.k % 2
    raise ValueError(f"unknown cycle base {base!r}")


def cycle_membership(p: GroupParams, w: GroupElement) -> CycleMembership:
    return CycleMembership(in_a=in_cycle(p, w, BASE_A), in_ba=in_cycle(p, w, BASE_BA))


@lru_cache(maxsize=32)
def _dlog_table(t: int, base: str) -> dict[GroupElement, int]:
    p = GroupParams(t)
    g = p.generator(base)
    table = {}
    cur = identity(p)
    for n in range(p.rho):
        table[cur] = n
        cur = multiply(p, cur, g)
    return table


def cycle_dlog(p: GroupParams, w: GroupElement, base: str = BASE_BA, method: str = "closed") -> int:
    """Return the unique ``n`` in ``Z_rho`` with ``base^n == w``.

    ``method="closed"`` inverts the power formula directly; ``method="table"``
    looks the element up in a table of all powers (``t <= 16`` only).
    Raises :class:`NotInCycle` if ``w`` is not a power of ``base``.
    """
    if method == "table":
        if p.t > _MAX_TABLE_T:
            raise ParamsTooLarge(f"dlog table limited to t <= {_MAX_TABLE_T}")
        try:
            return _dlog_table(p.t, base)[w]
        except KeyError:
            raise NotInCycle(f"{w} is not in <{base}> for t={p.t}") from None
    if method != "closed":
        raise ValueError(f"unknown dlog method {method!r}")
    if not in_cycle(p, w, base):
        raise NotInCycle(f"{w} is not in <{base}> for t={p.t}")
    if base == BASE_A:
        return w.k
    # k = n + f(n) with f(n) in {0, half} and f(n + half) = f(n) for t >= 4,
    # hence n = k - f(k).
    return (w.k - f_shift(p, w.k)) % p.rho


def split_power_defect(p: GroupParams, w1: GroupElement, w2: GroupElement, n: int) -> int:
    """The bit ``alpha`` with ``(w1 w2)^n = a^(alpha * half) w1^n w2^n``."""
    lhs = power(p, multiply(p, w1, w2), n)
    rhs = multiply(p, power(p, w1, n), power(p, w2, n))
    if lhs == rhs:
        return 0
    if lhs == multiply(p, GroupElement(0, p.half), rhs):
        return 1
    raise AssertionError(f"power defect outside the center for {w1}, {w2}, n={n}")


# --- presentation-based oracle ------------------------------------------------

_MAX_ORACLE_T = 6


def _rewrite(word: str, rho: int, half: int) -> str:
    """Reduce a word over {a, b} to ``b^alpha a^k`` using only the relations."""
    swap = "b" + "a" * (half + 1)
    a_rho = "a" * rho
    while True:
        i = word.find("ab")
        if i >= 0:
            word = word[:i] + swap + word[i + 2:]
            continue
        if "bb" in word:
            word = word.replace("bb", "", 1)
            continue
        if a_rho in word:
            word = word.replace(a_rho, "", 1)
            continue
        return word


def _word(w: GroupElement) -> str:
    return "b" * w.alpha + "a" * w.k


def _from_word(word: str, p: GroupParams) -> GroupElement:
    alpha = word.count("b")
    if alpha > 1 or (alpha == 1 and not word.startswith("b")):
        raise AssertionError(f"word {word!r} is not reduced")
    return GroupElement(alpha, word.count("a"))


def build_cayley_oracle(p: GroupParams) -> dict[tuple[GroupElement, GroupElement], GroupElement]:
    """Full multiplication table obtained by rewriting words with the presentation.

    Products are computed from ``a^rho = e``, ``b^2 = e`` and
    ``ab = b a^(half+1)`` alone, never through :func:`multiply`, so the table
    is an independent check on the closed-form arithmetic.
    """
    if p.t > _MAX_ORACLE_T:
        raise ParamsTooLarge(f"Cayley table limited to t <= {_MAX_ORACLE_T}, got t={p.t}")
    elems = p.elements()
    table = {}
    for w1 in elems:
        for w2 in elems:
            reduced = _rewrite(_word(w1) + _word(w2), p.rho, p.half)
            table[w1, w2] = _from_word(reduced, p)
    return table
