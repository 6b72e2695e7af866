import pytest
from scipy.stats import binomtest

from m2tlwe.distributions import bit_failure_probabilities, error_term_pmf
from m2tlwe.errors import InvalidParams, NotInCycle
from m2tlwe.group import BASE_A, BASE_BA, GroupElement as E, GroupParams, in_cycle, multiply, power
from m2tlwe.matrix_power import column_fold, rmpf_vec
from m2tlwe.sampling import GaussianSpec, RandomSource
from m2tlwe.scheme import (
    Ciphertext,
    M2tParams,
    SecretKey,
    correct_row,
    decision,
    decrypt,
    encrypt,
    error_exponent,
    keygen,
)


def test_params_validation():
    M2tParams.default(11, 32, 16, 8)
    for bad in [dict(m=1), dict(n=1), dict(n_c=0), dict(n_c=16), dict(sigma=6.0), dict(sigma=0.0)]:
        kw = dict(t=11, m=32, n=16, n_c=8, sigma=2.0) | bad
        with pytest.raises(InvalidParams):
            M2tParams(**kw)
    with pytest.raises(InvalidParams):
        M2tParams(3, 4, 4, 2, 1.0)


def test_decision_examples():
    rho = 1024
    assert decision(0, rho) == 0
    assert decision(rho // 2, rho) == 1
    assert decision(rho // 4, rho) == 0
    assert decision(3 * rho // 4, rho) == 0
    assert decision(rho // 4 + 1, rho) == 1


def test_degenerate_error_keygen():
    P = M2tParams(9, 12, 6, 3, 1e-3)
    pk, sk = keygen(RandomSource(1), P)
    p = P.group
    assert pk.v == tuple(rmpf_vec(p, row, sk.x) for row in pk.W)


@pytest.mark.parametrize("seed", range(5))
def test_column_invariants(seed):
    P = M2tParams.default(10, 20, 7, 3)
    pk, sk = keygen(RandomSource(seed), P)
    p = P.group
    assert len(pk.W) == 20 and all(len(row) == 7 for row in pk.W) and len(sk.x) == 7
    for row in pk.W:
        assert all(in_cycle(p, w, BASE_BA) for w in row[:3])
        assert all(in_cycle(p, w, BASE_A) for w in row[3:])
    assert all(0 <= x < p.rho for x in sk.x)


def test_determinism():
    P = M2tParams.default(11, 32, 16, 8)
    a = keygen(RandomSource(42), P)
    b = keygen(RandomSource(42), P)
    assert a == b
    assert encrypt(RandomSource(3), a[0], 1) == encrypt(RandomSource(3), b[0], 1)


def test_mask_under_identical_randomness():
    P = M2tParams.default(11, 32, 16, 8)
    pk, _ = keygen(RandomSource(5), P)
    p = P.group
    for seed in range(50):
        c0 = encrypt(RandomSource(seed), pk, 0)
        c1 = encrypt(RandomSource(seed), pk, 1)
        assert c0.w == c1.w
        assert c1.c == multiply(p, E(0, p.half), c0.c) == multiply(p, c0.c, E(0, p.half))


def test_ciphertext_carries_b():
    P = M2tParams.default(8, 10, 4, 2)
    src = RandomSource(6)
    for i in range(10_000):
        if i % 100 == 0:
            pk, _ = keygen(src, P)
        assert encrypt(src, pk, src.bits(1)).c.alpha == 1


def test_correction_rule():
    p = GroupParams(6)
    for w in p.elements():
        assert correct_row(p, w, True).alpha == 1
        assert correct_row(p, w, False).alpha == 0
        assert correct_row(p, w, w.alpha == 1) == w


def test_fold_consistency():
    P = M2tParams.default(9, 8, 5, 2)
    pk, sk = keygen(RandomSource(8), P)
    p = P.group
    S = [1, 4, 6]
    w = column_fold(p, pk.W, S)
    direct = E(0, 0)
    for j in range(P.n):
        col = E(0, 0)
        for i in S:
            col = multiply(p, col, pk.W[i][j])
        direct = multiply(p, direct, power(p, col, sk.x[j]))
    assert rmpf_vec(p, w, sk.x) == direct


def synthetic(sk, d):
    """Ciphertext whose error exponent is exactly ``d``."""
    p = sk.params.group
    w = tuple(E(0, 0) for _ in sk.x)
    return Ciphertext(w, power(p, E(1, 1), d))


def test_synthetic_ciphertexts():
    P = M2tParams(11, 4, 4, 2, 1e-3)
    _, sk = keygen(RandomSource(2), P)
    rho = P.group.rho
    assert decrypt(sk, synthetic(sk, 0)) == 0
    assert decrypt(sk, synthetic(sk, rho // 2)) == 1
    assert decrypt(sk, synthetic(sk, rho // 4)) == 0
    bad = Ciphertext(tuple(E(0, 0) for _ in sk.x), E(1, 2))
    with pytest.raises(NotInCycle):
        decrypt(sk, bad)


def test_roundtrip_moderate():
    P = M2tParams.default(11, 32, 16, 8)
    src = RandomSource(10)
    pk, sk = keygen(src, P)
    for _ in range(500):
        bit = src.bits(1)
        assert decrypt(sk, encrypt(src, pk, bit)) == bit


def test_error_exponent_in_cycle_across_t():
    """h always lands in <ba>: 10^5 trials over t = 4..12, zero NotInCycle."""
    src = RandomSource(11)
    trials = 0
    for t in range(4, 13):
        P = M2tParams.default(t, 6, 4, 2)
        for _ in range(11_112 // 40 + 1):
            pk, sk = keygen(src, P)
            for _ in range(40):
                error_exponent(sk, encrypt(src, pk, src.bits(1)))
                trials += 1
    assert trials >= 100_000


@pytest.mark.parametrize("t, r", [(5, 3), (6, 4), (7, 8)])
def test_failure_rate_matches_exact_model(t, r):
    P = M2tParams.default(t, 16, 4, 2)
    pmf = error_term_pmf(r, GaussianSpec(P.sigma, P.group.rho), 256)
    expected = [float(x) for x in bit_failure_probabilities(pmf)]
    src = RandomSource(100 + t)
    N = 4000
    for bit in (0, 1):
        fails = 0
        for _ in range(N):
            pk, sk = keygen(src, P)
            fails += decrypt(sk, encrypt(src, pk, bit, subset_size=r)) != bit
        assert binomtest(fails, N, expected[bit]).pvalue > 0.001


def test_secret_key_is_value():
    P = M2tParams.default(6, 4, 3, 1)
    assert SecretKey(P, (1, 2, 3)) == SecretKey(P, (1, 2, 3))
