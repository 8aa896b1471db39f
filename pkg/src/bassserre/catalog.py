"""The default quotient-target catalog: every group of order at most 24.

Groups are built from a handful of constructions (cyclic, metacyclic,
semidirect and direct products, small matrix and permutation groups).
Completeness is checked by the test suite: the number of groups per order
matches the known enumeration and no two entries are isomorphic.
"""

from __future__ import annotations

from collections.abc import Callable
from functools import lru_cache

from .finite_groups import (
    FiniteGroup,
    cyclic_group,
    direct_product,
    group_from_permutations,
    is_solvable,
    matrix_group,
    metacyclic_group,
    semidirect_product,
)

# number of isomorphism classes of groups of order n, n = 1..24
GROUP_COUNTS = (1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14, 1, 5, 1, 5, 2, 2, 1, 15)


def _named(g: FiniteGroup, name: str) -> FiniteGroup:
    return FiniteGroup(g.order, g.mult, g.identity, g.inv, g.labels, name)


def _abelian(*factors: int) -> FiniteGroup:
    g = cyclic_group(factors[0])
    for f in factors[1:]:
        g = direct_product(g, cyclic_group(f))
    return _named(g, "x".join(f"C{f}" for f in factors))


def _dihedral(n: int) -> FiniteGroup:
    return metacyclic_group(n, 2, 0, n - 1, name=f"D{n}")


def _dicyclic(n: int) -> FiniteGroup:
    return metacyclic_group(2 * n, 2, n, 2 * n - 1, name=f"Dic{n}")


def _inversion_action(n: FiniteGroup) -> list[tuple[int, ...]]:
    return [tuple(range(n.order)), n.inv]


def _build() -> list[FiniteGroup]:
    s3 = _dihedral(3)
    d4 = _dihedral(4)
    q8 = _dicyclic(2)
    a4 = group_from_permutations(4, ["(0 1 2)", "(0 1)(2 3)"], name="A4")
    dic3 = _dicyclic(3)
    c3 = cyclic_group(3)
    v4 = _abelian(2, 2)

    swap = (0, 2, 1, 3)  # (a, b) -> (b, a) on C2xC2 numbered a*2+b
    c2sq_c4 = semidirect_product(v4, cyclic_group(4),
                                 [(0, 1, 2, 3), swap, (0, 1, 2, 3), swap], name="C2^2:C4")
    c3sq = _abelian(3, 3)
    gen_dih9 = semidirect_product(c3sq, cyclic_group(2), _inversion_action(c3sq),
                                  name="(C3xC3):C2")
    # D4 = <x, y> with elements x^a y^b numbered a*2+b; x acts by inversion, y trivially
    c3_d4 = semidirect_product(c3, d4, [c3.inv if (i // 2) % 2 else (0, 1, 2)
                                        for i in range(8)], name="C3:D4")
    pauli = matrix_group([[[0, 1], [1, 0]], [[1, 0], [0, 4]], [[2, 0], [0, 2]]], 5,
                         name="Pauli")
    sl23 = matrix_group([[[1, 1], [0, 1]], [[0, 2], [1, 0]]], 3, name="SL(2,3)")
    s4 = group_from_permutations(4, ["(0 1)", "(0 1 2 3)"], name="S4")

    groups = [
        _abelian(1), _abelian(2), _abelian(3),
        _abelian(4), v4,
        _abelian(5),
        _abelian(6), s3,
        _abelian(7),
        _abelian(8), _abelian(4, 2), _abelian(2, 2, 2), d4, q8,
        _abelian(9), c3sq,
        _abelian(10), _dihedral(5),
        _abelian(11),
        _abelian(12), _abelian(6, 2), a4, _dihedral(6), dic3,
        _abelian(13),
        _abelian(14), _dihedral(7),
        _abelian(15),
        _abelian(16), _abelian(8, 2), _abelian(4, 4), _abelian(4, 2, 2), _abelian(2, 2, 2, 2),
        _dihedral(8),
        metacyclic_group(8, 2, 0, 3, name="SD16"),
        metacyclic_group(8, 2, 4, 7, name="Q16"),
        metacyclic_group(8, 2, 0, 5, name="M16"),
        metacyclic_group(4, 4, 0, 3, name="C4:C4"),
        c2sq_c4,
        _named(direct_product(cyclic_group(2), d4), "C2xD4"),
        _named(direct_product(cyclic_group(2), q8), "C2xQ8"),
        pauli,
        _abelian(17),
        _abelian(18), _abelian(6, 3), _dihedral(9),
        _named(direct_product(c3, s3), "C3xS3"), gen_dih9,
        _abelian(19),
        _abelian(20), _abelian(10, 2), _dihedral(10), _dicyclic(5),
        metacyclic_group(5, 4, 0, 2, name="F20"),
        _abelian(21), metacyclic_group(7, 3, 0, 2, name="C7:C3"),
        _abelian(22), _dihedral(11),
        _abelian(23),
        _abelian(24), _abelian(12, 2), _abelian(6, 2, 2),
        s4, sl23,
        metacyclic_group(3, 8, 0, 2, name="C3:C8"),
        _dicyclic(6), _dihedral(12),
        _named(direct_product(cyclic_group(4), s3), "C4xS3"),
        _named(direct_product(cyclic_group(2), dic3), "C2xDic3"),
        c3_d4,
        _named(direct_product(cyclic_group(2), a4), "C2xA4"),
        _named(direct_product(v4, s3), "C2xC2xS3"),
        _named(direct_product(c3, d4), "C3xD4"),
        _named(direct_product(c3, q8), "C3xQ8"),
    ]
    groups.sort(key=lambda g: g.order)
    return groups


@lru_cache(maxsize=None)
def all_groups() -> tuple[FiniteGroup, ...]:
    return tuple(_build())


def _is_prime_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def class_predicate(spec: str) -> Callable[[FiniteGroup], bool]:
    """Parse a group-class filter: ``all``, ``solvable``, ``abelian`` or ``p=<prime>``.

    The class is only applied to catalog entries; closure of the class under
    subgroups, quotients and extensions is the caller's responsibility.
    """
    spec = spec.strip()
    if spec == "all":
        return lambda g: True
    if spec == "solvable":
        return is_solvable
    if spec == "abelian":
        return FiniteGroup.is_abelian
    if spec.startswith("p="):
        p = int(spec[2:])
        return lambda g: _is_prime_power(g.order, p)
    raise ValueError(f"unknown group class {spec!r}")


def catalog(max_order: int = 24, group_class: str = "all") -> list[FiniteGroup]:
    if max_order > len(GROUP_COUNTS):
        raise ValueError(f"catalog only covers orders up to {len(GROUP_COUNTS)}")
    keep = class_predicate(group_class)
    return [g for g in all_groups() if g.order <= max_order and keep(g)]
