"""Statistical security harness: sample oracles, uniformity tests and the
real-or-random ciphertext game with advantage estimation.
"""

from __future__ import annotations

import csv
import math
from collections import Counter
from collections.abc import Callable, Sequence
from dataclasses import dataclass

from scipy.special import gammaincc
from scipy.stats import norm

from .errors import EmptySample, ParamsTooLarge
from .group import BASE_A, BASE_BA, GroupElement, GroupParams, multiply, power
from .matrix_power import column_fold, rmpf_vec
from .sampling import RandomSource, ba_gaussian, random_subset, uniform_mod
from .scheme import Ciphertext, M2tParams, PublicKey, SecretKey, encrypt, keygen, random_row

Adversary = Callable[[Ciphertext], int]


@dataclass(frozen=True)
class OracleSample:
    w: tuple[GroupElement, ...]
    v: GroupElement


def oracle_enc(src: RandomSource, instance: SecretKey) -> OracleSample:
    """Fresh LWE sample ``(w, eps * w^x)`` for the instance's fixed secret."""
    params = instance.params
    p = params.group
    w = random_row(src, params)
    v = multiply(p, ba_gaussian(src, p, params.sigma), rmpf_vec(p, w, instance.x))
    return OracleSample(w, v)


def oracle_rand(src: RandomSource, params: M2tParams) -> OracleSample:
    """Row shaped like an LWE sample paired with a uniform group element."""
    p = params.group
    w = random_row(src, params)
    return OracleSample(w, GroupElement(src.bits(1), uniform_mod(src, p.rho)))


def exact_product_distribution(p: GroupParams) -> Counter:
    """Counts of ``w1 * w2`` over all ``w1 in <ba>``, ``w2 in <a>``."""
    if p.t > 8:
        raise ParamsTooLarge(f"exhaustive product table limited to t <= 8, got t={p.t}")
    ba_cycle = [power(p, p.generator(BASE_BA), n) for n in range(p.rho)]
    a_cycle = [power(p, p.generator(BASE_A), n) for n in range(p.rho)]
    counts = Counter({w: 0 for w in p.elements()})
    for w1 in ba_cycle:
        for w2 in a_cycle:
            counts[multiply(p, w1, w2)] += 1
    return counts


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    p_value: float
    dof: int


def chi_square_uniformity(counts: Sequence[int], domain_size: int) -> ChiSquareResult:
    """Pearson goodness-of-fit against the uniform law on ``domain_size`` cells."""
    if len(counts) != domain_size:
        raise ValueError(f"expected {domain_size} cells, got {len(counts)}")
    total = sum(counts)
    if total <= 0:
        raise EmptySample("no observations")
    expected = total / domain_size
    stat = sum((c - expected) ** 2 for c in counts) / expected
    dof = domain_size - 1
    return ChiSquareResult(stat, float(gammaincc(dof / 2, stat / 2)), dof)


def element_counts(p: GroupParams, values) -> list[int]:
    counts = [0] * p.order
    for v in values:
        counts[p.index(v)] += 1
    return counts


@dataclass(frozen=True)
class AdvantageEstimate:
    trials: int
    wins: int
    advantage: float
    ci95: float

    @property
    def win_rate(self) -> float:
        return self.wins / self.trials

    def half_width(self, level: float = 0.95) -> float:
        z = norm.ppf(0.5 + level / 2)
        return z * math.sqrt(0.25 / self.trials)

    def indistinguishable(self, level: float = 0.99) -> bool:
        """True unless the confidence interval at ``level`` excludes advantage 0."""
        return abs(self.win_rate - 0.5) <= self.half_width(level)


def _estimate(trials: int, wins: int) -> AdvantageEstimate:
    phat = wins / trials
    ci = norm.ppf(0.975) * math.sqrt(max(phat * (1 - phat), 1e-12) / trials)
    return AdvantageEstimate(trials, wins, abs(phat - 0.5), ci)


def challenge(src: RandomSource, pk: PublicKey, mu: int, beta: int) -> Ciphertext:
    """The challenger's ciphertext: a real encryption of ``mu`` or ``(w, b a^k)``."""
    if beta == 0:
        return encrypt(src, pk, mu)
    p = pk.params.group
    w = column_fold(p, pk.W, random_subset(src, pk.params.m))
    return Ciphertext(tuple(w), GroupElement(1, uniform_mod(src, p.rho)))


def attack_games(
    src: RandomSource,
    instance: PublicKey,
    adversaries: dict[str, Adversary],
    trials: int,
) -> dict[str, AdvantageEstimate]:
    """Run the game ``trials`` times, showing every challenge to every adversary.

    Trial ``i`` draws all its randomness from a source derived from one
    master word and ``i``, so any split of the trials across workers yields
    the same transcript.
    """
    master = src.word()
    wins = dict.fromkeys(adversaries, 0)
    for i in range(trials):
        trial = RandomSource.derive(master, i)
        mu = trial.bits(1)
        beta = trial.bits(1)
        ct = challenge(trial, instance, mu, beta)
        for name, adv in adversaries.items():
            wins[name] += adv(ct) == beta
    return {name: _estimate(trials, w) for name, w in wins.items()}


def attack_game(src: RandomSource, instance: PublicKey, adversary: Adversary, trials: int) -> AdvantageEstimate:
    return attack_games(src, instance, {"adversary": adversary}, trials)["adversary"]


# --- built-in adversaries ------------------------------------------------------

def constant_adversary(guess: int = 0) -> Adversary:
    return lambda ct: guess


def alpha_adversary(ct: Ciphertext) -> int:
    """Guess 'random' exactly when c lacks the generator b."""
    return 1 - ct.c.alpha


def parity_adversary(ct: Ciphertext) -> int:
    return ct.c.k % 2


def frequency_adversary(src: RandomSource, pk: PublicKey, samples: int = 20_000) -> Adversary:
    """Learns the a-exponent histogram of genuine ciphertexts by encrypting
    random bits under ``pk``, then guesses 'real' for exponents seen more
    often than uniform.
    """
    rho = pk.params.group.rho
    hist = Counter(encrypt(src, pk, src.bits(1)).c.k for _ in range(samples))
    expected = samples / rho
    favoured = frozenset(k for k in range(rho) if hist[k] > expected)
    return lambda ct: 0 if ct.c.k in favoured else 1


def builtin_adversaries(src: RandomSource, pk: PublicKey, training: int = 20_000) -> dict[str, Adversary]:
    return {
        "constant": constant_adversary(0),
        "alpha_bit": alpha_adversary,
        "k_parity": parity_adversary,
        "k_frequency": frequency_adversary(src, pk, training),
    }


# --- report -------------------------------------------------------------------

@dataclass(frozen=True)
class HarnessRow:
    test: str
    t: int
    n: int
    trials: int
    statistic: float | None = None
    p_value: float | None = None
    advantage: float | None = None
    ci95: float | None = None


def run_distinguisher_suite(src: RandomSource, params: M2tParams, trials: int,
                            training: int = 20_000) -> list[HarnessRow]:
    """Chi-square tests on both oracles plus the attack game for every built-in adversary."""
    p = params.group
    pk, sk = keygen(src, params)
    rows = []
    enc = chi_square_uniformity(element_counts(p, (oracle_enc(src, sk).v for _ in range(trials))), p.order)
    rows.append(HarnessRow("chi2_oracle_enc", params.t, params.n, trials, enc.statistic, enc.p_value))
    rnd = chi_square_uniformity(element_counts(p, (oracle_rand(src, params).v for _ in range(trials))), p.order)
    rows.append(HarnessRow("chi2_oracle_rand", params.t, params.n, trials, rnd.statistic, rnd.p_value))
    games = attack_games(src, pk, builtin_adversaries(src, pk, training), trials)
    for name, est in games.items():
        rows.append(HarnessRow(f"game_{name}", params.t, params.n, trials, advantage=est.advantage, ci95=est.ci95))
    return rows


def _cell(x) -> str:
    return "" if x is None else f"{x:.6g}"


def write_harness_csv(fh, rows: Sequence[HarnessRow]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["test", "t", "n", "trials", "statistic", "p_value", "advantage", "ci95"])
    for r in rows:
        writer.writerow([r.test, r.t, r.n, r.trials, _cell(r.statistic), _cell(r.p_value),
                         _cell(r.advantage), _cell(r.ci95)])
