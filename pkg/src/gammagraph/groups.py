"""Finite abelian groups presented as products of cyclic groups.

A group is ``Z/m1 x ... x Z/md``; elements are tuples of reduced residues.
Both types are immutable and compare structurally.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product
from math import gcd, lcm, prod
from typing import Callable, Iterable, Iterator

from .errors import GroupError


@dataclass(frozen=True)
class GroupSpec:
    moduli: tuple[int, ...]

    def __post_init__(self):
        for m in self.moduli:
            if not isinstance(m, int) or m < 1:
                raise GroupError(f"invalid modulus {m!r}")

    @property
    def order(self) -> int:
        return prod(self.moduli)

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def zero(self) -> "GroupElem":
        return GroupElem(self, (0,) * len(self.moduli))

    def elem(self, value) -> "GroupElem":
        """Build an element from an int (cyclic groups only) or a coordinate sequence."""
        if isinstance(value, GroupElem):
            if value.spec != self:
                raise GroupError("element belongs to a different group")
            return value
        if isinstance(value, int):
            if len(self.moduli) != 1:
                raise GroupError("integer shorthand needs a cyclic group")
            value = (value,)
        coords = tuple(int(c) for c in value)
        if len(coords) != len(self.moduli):
            raise GroupError(f"expected {len(self.moduli)} coordinates, got {len(coords)}")
        return GroupElem(self, tuple(c % m for c, m in zip(coords, self.moduli)))

    def elements(self) -> Iterator["GroupElem"]:
        for coords in product(*(range(m) for m in self.moduli)):
            yield GroupElem(self, coords)

    def involutions(self) -> list["GroupElem"]:
        """Elements of order exactly two."""
        return [g for g in self.elements() if not g.is_zero and (g + g).is_zero]

    def has_involution(self) -> bool:
        return any(m % 2 == 0 for m in self.moduli)

    def is_cyclic(self) -> bool:
        # a product of cyclic groups is cyclic iff the moduli are pairwise coprime
        ms = [m for m in self.moduli if m > 1]
        return all(gcd(a, b) == 1 for i, a in enumerate(ms) for b in ms[i + 1:])

    def to_json(self) -> list[int]:
        return list(self.moduli)

    @classmethod
    def from_json(cls, data) -> "GroupSpec":
        return make_group(data)

    def __str__(self):
        if not self.moduli:
            return "trivial"
        return " x ".join(f"Z/{m}" for m in self.moduli)


@dataclass(frozen=True)
class GroupElem:
    spec: GroupSpec
    coords: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: "GroupElem"):
        if not isinstance(other, GroupElem) or other.spec != self.spec:
            raise GroupError("operands belong to different groups")

    def __add__(self, other: "GroupElem") -> "GroupElem":
        self._check(other)
        return GroupElem(self.spec, tuple((a + b) % m for a, b, m in
                                          zip(self.coords, other.coords, self.spec.moduli)))

    def __neg__(self) -> "GroupElem":
        return GroupElem(self.spec, tuple((-a) % m for a, m in zip(self.coords, self.spec.moduli)))

    def __sub__(self, other: "GroupElem") -> "GroupElem":
        return self + (-other)

    def __mul__(self, n: int) -> "GroupElem":
        return GroupElem(self.spec, tuple((a * n) % m for a, m in zip(self.coords, self.spec.moduli)))

    __rmul__ = __mul__

    def to_json(self) -> list[int]:
        return list(self.coords)

    def __str__(self):
        if len(self.coords) == 1:
            return str(self.coords[0])
        return "(" + ",".join(map(str, self.coords)) + ")"


def make_group(moduli: Iterable[int]) -> GroupSpec:
    return GroupSpec(tuple(moduli))


def add(a: GroupElem, b: GroupElem) -> GroupElem:
    return a + b


def neg(a: GroupElem) -> GroupElem:
    return -a


def zero(spec: GroupSpec) -> GroupElem:
    return spec.zero


def total(spec: GroupSpec, elems: Iterable[GroupElem]) -> GroupElem:
    return reduce(add, elems, spec.zero)


def element_order(a: GroupElem) -> int:
    return reduce(lcm, (m // gcd(c, m) for c, m in zip(a.coords, a.spec.moduli)), 1)


def has_involution(spec: GroupSpec) -> bool:
    return spec.has_involution()


def cyclic_subgroup(a: GroupElem) -> set[GroupElem]:
    return {a * k for k in range(element_order(a))}


def prime_power(n: int) -> tuple[int, int] | None:
    """Return (p, a) with n = p**a, a >= 1, or None."""
    if n < 2:
        return None
    p = next(d for d in range(2, n + 1) if n % d == 0)
    a = 0
    while n % p == 0:
        n //= p
        a += 1
    return (p, a) if n == 1 else None


def quotient_map(spec: GroupSpec, p: int) -> tuple[GroupSpec, Callable[[GroupElem], GroupElem]]:
    """Canonical surjection Z/p^a -> (Z/p^a)/<p>, which is Z/p."""
    if len(spec.moduli) != 1 or prime_power(spec.moduli[0]) is None \
            or prime_power(spec.moduli[0])[0] != p:
        raise GroupError(f"{spec} is not cyclic of order a power of {p}")
    target = make_group([p])

    def project(x: GroupElem) -> GroupElem:
        if x.spec != spec:
            raise GroupError("element belongs to a different group")
        return GroupElem(target, (x.coords[0] % p,))

    return target, project
