"""Exhaustive consistency checks of the group arithmetic at small t."""

from __future__ import annotations

from collections.abc import Callable, Iterator

from .group import (
    BASE_BA,
    GroupParams,
    build_cayley_oracle,
    cycle_membership,
    identity,
    inverse,
    multiply,
    power,
    split_power_defect,
)
from .harness import exact_product_distribution


def _oracle_agrees(p: GroupParams) -> bool:
    table = build_cayley_oracle(p)
    return all(multiply(p, w1, w2) == prod for (w1, w2), prod in table.items())


def _powers_agree(p: GroupParams) -> bool:
    e = identity(p)
    for w in p.elements():
        acc = e
        for n in range(p.rho):
            if power(p, w, n) != acc:
                return False
            acc = multiply(p, acc, w)
        if inverse(p, w) != power(p, w, p.rho - 1) or multiply(p, w, inverse(p, w)) != e:
            return False
    return True


def _associative(p: GroupParams) -> bool:
    table = build_cayley_oracle(p)
    elems = p.elements()
    return all(
        table[table[x, y], z] == table[x, table[y, z]]
        for x in elems for y in elems for z in elems
    )


def _power_defect(p: GroupParams) -> bool:
    elems = p.elements()
    for w1 in elems:
        for w2 in elems:
            for n in range(p.rho):
                d = split_power_defect(p, w1, w2, n)
                if d not in (0, 1):
                    return False
                m1, m2 = cycle_membership(p, w1), cycle_membership(p, w2)
                shared = (m1.in_a and m2.in_a) or (m1.in_ba and m2.in_ba)
                if shared and d:
                    return False
    return True


def _uniform_products(p: GroupParams) -> bool:
    counts = exact_product_distribution(p)
    return len(counts) == p.order and set(counts.values()) == {p.rho * p.rho // p.order}


def _central_shift(p: GroupParams) -> bool:
    return power(p, p.generator(BASE_BA), p.half) == (0, p.half)


CHECKS: list[tuple[str, Callable[[GroupParams], bool]]] = [
    ("multiply matches presentation oracle", _oracle_agrees),
    ("power/inverse match repeated multiplication", _powers_agree),
    ("associativity on all triples", _associative),
    ("power defect is central and vanishes on shared cycles", _power_defect),
    ("<ba> x <a> products are uniform", _uniform_products),
    ("(ba)^(rho/2) = a^(rho/2)", _central_shift),
]


def run(ts=(4, 5)) -> Iterator[tuple[str, bool]]:
    for t in ts:
        p = GroupParams(t)
        for name, check in CHECKS:
            yield f"t={t}: {name}", check(p)
