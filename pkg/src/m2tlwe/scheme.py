"""One-bit public key encryption from LWE in M_{2^t}.

Key generation
    W is an m x n matrix whose first ``n_c`` columns hold uniform elements of
    the cycle <ba> and whose remaining columns hold uniform elements of <a>.
    With a uniform secret x in Z_rho^n the public vector is
    ``v_i = eps_i * (W^x)_i`` where ``eps_i = (ba)^beta_i`` and beta_i is
    discrete Gaussian.

Encryption
    Pick a random subset S of rows.  Each selected ``v_i`` is corrected by
    ``delta_i in {e, ba}`` so that the first one carries the generator b and
    the rest lie in <a>.  The ciphertext is ``(w, c)`` with ``w_j`` the
    product of column j over S and ``c`` the product of the corrected
    ``v_i``, times ``a^(rho/2)`` when encrypting a 1.

Decryption
    ``h = c * (w^x)^-1`` lies in <ba>; its discrete logarithm is the error
    sum (plus rho/2 for a 1) and is decoded by proximity to 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from .distributions import m2t_decision
from .errors import InvalidParams
from .group import (
    BASE_A,
    BASE_BA,
    GroupElement,
    GroupParams,
    cycle_dlog,
    identity,
    inverse,
    multiply,
)
from .matrix_power import column_fold, rmpf_vec
from .sampling import (
    RandomSource,
    ba_gaussian,
    fixed_size_subset,
    random_subset,
    uniform_cycle_element,
    uniform_mod,
)

BA = GroupElement(1, 1)


@dataclass(frozen=True)
class M2tParams:
    t: int
    m: int
    n: int
    n_c: int
    sigma: float

    def __post_init__(self):
        if self.m < 2 or self.n < 2:
            raise InvalidParams(f"need m >= 2 and n >= 2, got m={self.m}, n={self.n}")
        if not 1 <= self.n_c <= self.n - 1:
            raise InvalidParams(f"n_c must be in [1, {self.n - 1}], got {self.n_c}")
        group = GroupParams(self.t)  # validates t
        if not self.sigma > 0:
            raise InvalidParams(f"sigma must be positive, got {self.sigma}")
        limit = 2 ** ((self.t - 1) / 4)
        if self.sigma > limit * (1 + 1e-12):
            raise InvalidParams(f"sigma must be <= 2^((t-1)/4) = {limit}, got {self.sigma}")
        object.__setattr__(self, "_group", group)

    @property
    def group(self) -> GroupParams:
        return self._group

    @classmethod
    def default(cls, t: int, m: int, n: int, n_c: int) -> M2tParams:
        """Parameters with the largest allowed error width, ``sigma = rho^(1/4)``."""
        return cls(t, m, n, n_c, 2 ** ((t - 1) / 4))


@dataclass(frozen=True)
class SecretKey:
    params: M2tParams
    x: tuple[int, ...]


@dataclass(frozen=True)
class PublicKey:
    params: M2tParams
    W: tuple[tuple[GroupElement, ...], ...]
    v: tuple[GroupElement, ...]


@dataclass(frozen=True)
class Ciphertext:
    w: tuple[GroupElement, ...]
    c: GroupElement


def random_row(src: RandomSource, params: M2tParams) -> tuple[GroupElement, ...]:
    """One row of W: ``n_c`` entries from <ba>, then ``n - n_c`` from <a>."""
    p = params.group
    return tuple(
        uniform_cycle_element(src, p, BASE_BA if j < params.n_c else BASE_A)
        for j in range(params.n)
    )


def keygen(src: RandomSource, params: M2tParams) -> tuple[PublicKey, SecretKey]:
    p = params.group
    x = tuple(uniform_mod(src, p.rho) for _ in range(params.n))
    W = tuple(random_row(src, params) for _ in range(params.m))
    v = tuple(multiply(p, ba_gaussian(src, p, params.sigma), rmpf_vec(p, row, x)) for row in W)
    return PublicKey(params, W, v), SecretKey(params, x)


def correct_row(p: GroupParams, v_i: GroupElement, first: bool) -> GroupElement:
    """Apply the sender's ``delta in {e, ba}``: keep b on the first row, drop it elsewhere."""
    want = 1 if first else 0
    return v_i if v_i.alpha == want else multiply(p, BA, v_i)


def encrypt(src: RandomSource, pk: PublicKey, bit: int, subset_size: int | None = None) -> Ciphertext:
    """Encrypt one bit.

    ``subset_size`` fixes ``|S|`` (uniform among subsets of that size)
    instead of the default independent coin per row; the failure analysis
    is stated for a fixed ``|S|``.
    """
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    params = pk.params
    p = params.group
    if subset_size is None:
        S = random_subset(src, params.m)
    else:
        S = fixed_size_subset(src, params.m, subset_size)
    c = identity(p)
    for pos, i in enumerate(S):
        c = multiply(p, c, correct_row(p, pk.v[i], pos == 0))
    w = column_fold(p, pk.W, S)
    if bit:
        c = multiply(p, GroupElement(0, p.half), c)
    return Ciphertext(tuple(w), c)


def decision(d: int, rho: int) -> int:
    """0 if ``d`` is at least as close to 0 as to rho/2 (mod rho), else 1."""
    return m2t_decision(d, rho)


def error_exponent(sk: SecretKey, ct: Ciphertext) -> int:
    """``dlog_ba(c * (w^x)^-1)``; raises NotInCycle if that element is not in <ba>."""
    p = sk.params.group
    h = multiply(p, ct.c, inverse(p, rmpf_vec(p, ct.w, sk.x)))
    return cycle_dlog(p, h, BASE_BA)


def decrypt(sk: SecretKey, ct: Ciphertext) -> int:
    return decision(error_exponent(sk, ct), sk.params.group.rho)
