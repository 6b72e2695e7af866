"""Reference schemes: Regev's additive LWE encryption over Z_q and its
multiplicative twin in the prime-order subgroup G_q of Z_p^*.

Both use the same parameter shape: ``n`` unknowns, a prime ``q`` in
``[n^2, 2n^2]`` and ``m = ceil((1 + eps)(n + 1) log2 q)`` equations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import gmpy2

from .errors import DlogFailure, InvalidParams, NotInSubgroup, SearchExhausted
from .sampling import RandomSource, gaussian_integer, random_subset, uniform_mod

EPSILON = 0.1


def _is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n))


def lwe_prime(n: int) -> int:
    """Smallest prime in ``[n^2, 2n^2]``."""
    q = int(gmpy2.next_prime(n * n - 1))
    if q > 2 * n * n:
        raise SearchExhausted(f"no prime in [{n * n}, {2 * n * n}]")
    return q


def equation_count(n: int, q: int, eps: float = EPSILON) -> int:
    return math.ceil((1 + eps) * (n + 1) * math.log2(q))


def zq_decision(d: int, q: int) -> int:
    """0 if ``d`` is at least as close to 0 as to floor(q/2) in Z_q, else 1."""
    d %= q
    return 0 if min(d, q - d) <= abs(d - q // 2) else 1


# --- Regev over Z_q -------------------------------------------------------------

@dataclass(frozen=True)
class RegevParams:
    n: int
    q: int
    m: int
    sigma: float

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise InvalidParams("n and m must be positive")
        if not _is_prime(self.q) or not self.n * self.n <= self.q <= 2 * self.n * self.n:
            raise InvalidParams(f"q={self.q} must be a prime in [n^2, 2n^2]")
        if not self.sigma > 0:
            raise InvalidParams("sigma must be positive")

    @classmethod
    def for_dimension(cls, n: int, sigma: float = 2.0, eps: float = EPSILON) -> RegevParams:
        q = lwe_prime(n)
        return cls(n, q, equation_count(n, q, eps), sigma)


@dataclass(frozen=True)
class RegevPublicKey:
    params: RegevParams
    A: tuple[tuple[int, ...], ...]  # m rows in Z_q^n
    b: tuple[int, ...]


@dataclass(frozen=True)
class RegevSecretKey:
    params: RegevParams
    x: tuple[int, ...]


@dataclass(frozen=True)
class RegevCiphertext:
    a: tuple[int, ...]
    c: int


def regev_keygen(src: RandomSource, params: RegevParams) -> tuple[RegevPublicKey, RegevSecretKey]:
    n, q = params.n, params.q
    x = tuple(uniform_mod(src, q) for _ in range(n))
    A = tuple(tuple(uniform_mod(src, q) for _ in range(n)) for _ in range(params.m))
    b = tuple(
        (sum(aij * xj for aij, xj in zip(row, x)) + gaussian_integer(src, params.sigma)) % q
        for row in A
    )
    return RegevPublicKey(params, A, b), RegevSecretKey(params, x)


def regev_encrypt(src: RandomSource, pk: RegevPublicKey, bit: int) -> RegevCiphertext:
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    q = pk.params.q
    S = random_subset(src, pk.params.m)
    a = tuple(sum(pk.A[i][j] for i in S) % q for j in range(pk.params.n))
    c = (sum(pk.b[i] for i in S) + bit * (q // 2)) % q
    return RegevCiphertext(a, c)


def regev_decrypt(sk: RegevSecretKey, ct: RegevCiphertext) -> int:
    q = sk.params.q
    d = (ct.c - sum(aj * xj for aj, xj in zip(ct.a, sk.x))) % q
    return zq_decision(d, q)


def solve_mod_prime(A, b, q: int) -> tuple[int, ...] | None:
    """Solve ``A x = b`` over Z_q by Gaussian elimination.

    Returns None when A does not have full column rank.  Extra equations
    must be consistent; inconsistent systems also return None.
    """
    rows = [list(r) + [bi] for r, bi in zip(A, b)]
    n = len(rows[0]) - 1
    pivot_row = 0
    for col in range(n):
        pr = next((i for i in range(pivot_row, len(rows)) if rows[i][col] % q), None)
        if pr is None:
            return None
        rows[pivot_row], rows[pr] = rows[pr], rows[pivot_row]
        inv = pow(rows[pivot_row][col], -1, q)
        rows[pivot_row] = [(v * inv) % q for v in rows[pivot_row]]
        for i in range(len(rows)):
            if i != pivot_row and rows[i][col] % q:
                f = rows[i][col]
                rows[i] = [(vi - f * vp) % q for vi, vp in zip(rows[i], rows[pivot_row])]
        pivot_row += 1
    if any(r[-1] % q for r in rows[n:]):
        return None
    return tuple(rows[i][-1] for i in range(n))


# --- multiplicative LWE in the Sylow subgroup G_q -------------------------------

@dataclass(frozen=True)
class SylowParams:
    n: int
    q: int
    p: int
    g: int
    m: int
    sigma: float

    def __post_init__(self):
        if not _is_prime(self.q) or not _is_prime(self.p) or (self.p - 1) % self.q:
            raise InvalidParams(f"need primes q | p - 1, got q={self.q}, p={self.p}")
        if self.g % self.p == 1 or pow(self.g, self.q, self.p) != 1:
            raise InvalidParams(f"g={self.g} does not generate the order-{self.q} subgroup")


def sylow_param_gen(src: RandomSource, n: int, sigma: float = 1.5, eps: float = EPSILON,
                    max_k: int = 10_000) -> SylowParams:
    """Smallest prime ``q >= n^2``, smallest prime ``p = 2kq + 1``, random generator of G_q."""
    if n < 2:
        raise InvalidParams("n must be >= 2")
    q = lwe_prime(n)
    for k in range(1, max_k + 1):
        p = 2 * k * q + 1
        if _is_prime(p):
            break
    else:
        raise SearchExhausted(f"no prime p = 2kq + 1 with k <= {max_k}")
    cofactor = (p - 1) // q
    for _ in range(1000):
        g = pow(2 + uniform_mod(src, p - 3), cofactor, p)
        if g != 1:
            return SylowParams(n, q, p, g, equation_count(n, q, eps), sigma)
    raise SearchExhausted("could not find a subgroup generator")


@dataclass(frozen=True)
class SylowPublicKey:
    params: SylowParams
    A: tuple[tuple[int, ...], ...]  # m rows of elements of G_q
    b: tuple[int, ...]


@dataclass(frozen=True)
class SylowSecretKey:
    params: SylowParams
    x: tuple[int, ...]


@dataclass(frozen=True)
class SylowCiphertext:
    a: tuple[int, ...]
    c: int


def _mpf_row(row, x, p: int) -> int:
    acc = 1
    for aij, xj in zip(row, x):
        acc = acc * pow(aij, xj, p) % p
    return acc


def sylow_keygen(src: RandomSource, params: SylowParams) -> tuple[SylowPublicKey, SylowSecretKey]:
    n, q, p, g = params.n, params.q, params.p, params.g
    x = tuple(uniform_mod(src, q) for _ in range(n))
    A = tuple(tuple(pow(g, uniform_mod(src, q), p) for _ in range(n)) for _ in range(params.m))
    b = tuple(
        _mpf_row(row, x, p) * pow(g, gaussian_integer(src, params.sigma) % q, p) % p
        for row in A
    )
    return SylowPublicKey(params, A, b), SylowSecretKey(params, x)


def sylow_encrypt(src: RandomSource, pk: SylowPublicKey, bit: int) -> SylowCiphertext:
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    P = pk.params
    S = random_subset(src, P.m)
    a = []
    for j in range(P.n):
        acc = 1
        for i in S:
            acc = acc * pk.A[i][j] % P.p
        a.append(acc)
    c = 1
    for i in S:
        c = c * pk.b[i] % P.p
    if bit:
        c = c * pow(P.g, P.q // 2, P.p) % P.p
    return SylowCiphertext(tuple(a), c)


def sylow_leftover(sk: SylowSecretKey, ct: SylowCiphertext) -> int:
    """``c * (a^x)^-1 = g^r``."""
    p = sk.params.p
    return ct.c * pow(_mpf_row(ct.a, sk.x, p), -1, p) % p


def sylow_decrypt(sk: SylowSecretKey, ct: SylowCiphertext) -> int:
    P = sk.params
    try:
        r = dlog_bsgs(P.g, sylow_leftover(sk, ct), P.q, P.p)
    except NotInSubgroup as exc:
        raise DlogFailure(str(exc)) from exc
    return zq_decision(r, P.q)


def dlog_bsgs(g: int, h: int, q: int, p: int) -> int:
    """Discrete log of ``h`` to base ``g`` (order ``q``) modulo ``p``, baby-step giant-step."""
    h %= p
    s = math.isqrt(q - 1) + 1
    baby = {}
    cur = 1
    for j in range(s):
        baby.setdefault(cur, j)
        cur = cur * g % p
    giant = pow(g, -s, p)
    gamma = h
    for i in range(s + 1):
        j = baby.get(gamma)
        if j is not None:
            e = (i * s + j) % q
            if pow(g, e, p) == h:
                return e
        gamma = gamma * giant % p
    raise NotInSubgroup(f"{h} is not a power of {g} mod {p}")


@dataclass(frozen=True)
class AdditiveInstance:
    """Additive LWE image ``(A', b')`` over Z_q of a multiplicative instance."""

    q: int
    A: tuple[tuple[int, ...], ...]
    b: tuple[int, ...]


def _dlog(P: SylowParams, h: int) -> int:
    try:
        return dlog_bsgs(P.g, h, P.q, P.p)
    except NotInSubgroup as exc:
        raise DlogFailure(str(exc)) from exc


def sylow_to_additive(pk: SylowPublicKey) -> AdditiveInstance:
    """Take logarithms base g entrywise: ``a_ij = g^A'_ij``, ``b_i = g^b'_i``."""
    P = pk.params
    A = tuple(tuple(_dlog(P, aij) for aij in row) for row in pk.A)
    b = tuple(_dlog(P, bi) for bi in pk.b)
    return AdditiveInstance(P.q, A, b)


def sylow_ciphertext_to_additive(params: SylowParams, ct: SylowCiphertext) -> RegevCiphertext:
    return RegevCiphertext(tuple(_dlog(params, aj) for aj in ct.a), _dlog(params, ct.c))


def additive_secret(sk: SylowSecretKey) -> RegevSecretKey:
    """The same secret viewed as a Regev key over Z_q."""
    P = sk.params
    q = P.q
    # RegevParams requires q in [n^2, 2n^2], which holds by construction.
    return RegevSecretKey(RegevParams(P.n, q, P.m, P.sigma), sk.x)
