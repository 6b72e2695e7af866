import io
from collections import Counter

import pytest

from m2tlwe.errors import EmptySample, ParamsTooLarge
from m2tlwe.group import BASE_A, BASE_BA, GroupElement as E, GroupParams, in_cycle
from m2tlwe.harness import (
    AdvantageEstimate,
    HarnessRow,
    alpha_adversary,
    attack_game,
    attack_games,
    challenge,
    chi_square_uniformity,
    constant_adversary,
    element_counts,
    exact_product_distribution,
    oracle_enc,
    oracle_rand,
    parity_adversary,
    write_harness_csv,
)
from m2tlwe.sampling import RandomSource
from m2tlwe.scheme import M2tParams, SecretKey, keygen


@pytest.mark.parametrize("t", range(4, 9))
def test_exact_product_distribution_uniform(t):
    p = GroupParams(t)
    counts = exact_product_distribution(p)
    assert len(counts) == p.order
    assert set(counts.values()) == {2 ** (t - 2)}
    assert sum(counts.values()) == 2 ** (2 * t - 2)


def test_exact_product_distribution_limit():
    with pytest.raises(ParamsTooLarge):
        exact_product_distribution(GroupParams(9))


def test_chi_square_examples():
    assert chi_square_uniformity([5] * 16, 16).statistic == 0
    assert chi_square_uniformity([5] * 16, 16).p_value == 1
    r = chi_square_uniformity([100] + [0] * 15, 16)
    assert r.statistic == pytest.approx(1500) and r.dof == 15
    assert r.p_value < 1e-100
    with pytest.raises(EmptySample):
        chi_square_uniformity([0] * 16, 16)
    with pytest.raises(ValueError):
        chi_square_uniformity([1, 2], 3)


def test_chi_square_p_value_matches_scipy():
    from scipy.stats import chisquare
    counts = [12, 9, 7, 15, 10, 11, 8, 8]
    ours = chi_square_uniformity(counts, 8)
    ref = chisquare(counts)
    assert ours.statistic == pytest.approx(ref.statistic)
    assert ours.p_value == pytest.approx(ref.pvalue)


def test_oracle_enc_degenerate():
    P = M2tParams(6, 4, 4, 2, 1e-3)
    sk = SecretKey(P, (0, 0, 0, 0))
    src = RandomSource(1)
    for _ in range(200):
        s = oracle_enc(src, sk)
        assert s.v == E(0, 0) and len(s.w) == 4


def test_oracle_shapes_follow_split():
    P = M2tParams.default(7, 4, 5, 2)
    _, sk = keygen(RandomSource(2), P)
    src = RandomSource(3)
    for s in [oracle_enc(src, sk) for _ in range(50)] + [oracle_rand(src, P) for _ in range(50)]:
        assert all(in_cycle(P.group, w, BASE_BA) for w in s.w[:2])
        assert all(in_cycle(P.group, w, BASE_A) for w in s.w[2:])


def test_oracle_rand_uniform():
    P = M2tParams.default(6, 4, 4, 2)
    src = RandomSource(4)
    vs = [oracle_rand(src, P).v for _ in range(100_000)]
    assert chi_square_uniformity(element_counts(P.group, vs), P.group.order).p_value > 0.001
    alphas = Counter(v.alpha for v in vs)
    assert abs(alphas[1] - 50_000) < 5 * 158
    assert [oracle_rand(RandomSource(9), P) for _ in range(3)] == [oracle_rand(RandomSource(9), P) for _ in range(3)]


@pytest.mark.parametrize("t", [4, 6])
def test_oracle_enc_uniform_typical_key(t):
    P = M2tParams.default(t, 32, 16, 8)
    src = RandomSource(5)
    _, sk = keygen(src, P)
    counts = element_counts(P.group, (oracle_enc(src, sk).v for _ in range(50_000)))
    assert chi_square_uniformity(counts, P.group.order).p_value > 0.001


def test_advantage_estimate():
    est = AdvantageEstimate(1000, 500, 0.0, 0.031)
    assert est.win_rate == 0.5 and est.indistinguishable()
    assert not AdvantageEstimate(10_000, 6000, 0.1, 0.01).indistinguishable()
    assert est.half_width(0.99) > est.half_width(0.95)


def test_challenge_random_world():
    P = M2tParams.default(8, 8, 4, 2)
    pk, _ = keygen(RandomSource(6), P)
    src = RandomSource(7)
    ks = [0] * P.group.rho
    for _ in range(20_000):
        ct = challenge(src, pk, 0, 1)
        assert ct.c.alpha == 1
        ks[ct.c.k] += 1
    assert chi_square_uniformity(ks, P.group.rho).p_value > 0.001


def test_trivial_adversaries():
    P = M2tParams.default(8, 32, 16, 8)
    src = RandomSource(8)
    pk, _ = keygen(src, P)
    games = attack_games(src, pk, {"const": constant_adversary(0), "alpha": alpha_adversary}, 20_000)
    for est in games.values():
        assert 0 <= est.advantage <= 0.5
        assert est.indistinguishable()
    assert games["alpha"].wins == games["const"].wins


def test_games_reproducible():
    P = M2tParams.default(6, 8, 4, 2)
    pk, _ = keygen(RandomSource(9), P)
    a = attack_game(RandomSource(10), pk, parity_adversary, 500)
    b = attack_game(RandomSource(10), pk, parity_adversary, 500)
    assert a == b


def weak_key(P, seed=0):
    """First key whose secret exponents on the <a> columns are all even."""
    while True:
        pk, sk = keygen(RandomSource(seed), P)
        if all(x % 2 == 0 for x in sk.x[P.n_c:]):
            return pk, sk
        seed += 1


def test_weak_key_parity_leak():
    # A key with every <a>-column secret even makes every genuine c have odd k.
    P = M2tParams.default(8, 16, 4, 2)
    pk, sk = weak_key(P)
    est = attack_game(RandomSource(11), pk, parity_adversary, 20_000)
    assert est.advantage == pytest.approx(0.25, abs=0.02)
    counts = element_counts(P.group, (oracle_enc(RandomSource(12), sk).v for _ in range(20_000)))
    assert chi_square_uniformity(counts, P.group.order).p_value < 1e-6


def test_harness_csv():
    buf = io.StringIO()
    write_harness_csv(buf, [HarnessRow("chi2_oracle_enc", 8, 16, 100, 12.5, 0.4),
                            HarnessRow("game_constant", 8, 16, 100, advantage=0.01, ci95=0.098)])
    lines = buf.getvalue().splitlines()
    assert lines[0] == "test,t,n,trials,statistic,p_value,advantage,ci95"
    assert lines[1] == "chi2_oracle_enc,8,16,100,12.5,0.4,,"
    assert lines[2] == "game_constant,8,16,100,,,0.01,0.098"
