"""The lattice of conjugation-stable closed-set descriptors.

A descriptor is a pair (k, f) with k >= -1 and f a finitely-supported map
from scalars to bounds strictly above k.  It encodes the union of the
identity-pencil stratum of bound k with finitely many larger shift strata:

    {P : rk(P, I) <= k}  union over lambda  {P : rk(P - lambda I) <= f(lambda)}.

k = -1 with no exceptional entries encodes the empty set.  Union, intersection
and containment are the pointwise max / min / product-order maps; distinct
finite-shift strata intersect trivially because a matrix has at most one shift
of small corank.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ClosedSetDescriptor:
    field: object
    k: int
    exceptional: tuple  # sorted ((lambda, bound), ...) with bound > k

    @staticmethod
    def make(field, k: int, entries=()) -> "ClosedSetDescriptor":
        if k < -1:
            raise ValueError("k must be at least -1")
        merged: dict = {}
        for lam, bound in entries:
            lam = field.coerce(lam)
            bound = int(bound)
            if lam in merged:
                merged[lam] = max(merged[lam], bound)
            else:
                merged[lam] = bound
        kept = tuple(sorted(
            ((lam, b) for lam, b in merged.items() if b > k),
            key=lambda t: field.sort_key(t[0]),
        ))
        return ClosedSetDescriptor(field, k, kept)

    def bound_at(self, lam) -> int:
        lam = self.field.coerce(lam)
        for l, b in self.exceptional:
            if l == lam:
                return b
        return self.k

    @property
    def is_empty(self) -> bool:
        return self.k == -1 and not self.exceptional


def empty_descriptor(field) -> ClosedSetDescriptor:
    return ClosedSetDescriptor.make(field, -1)


def tuple_rank_stratum(field, k: int) -> ClosedSetDescriptor:
    return ClosedSetDescriptor.make(field, k)


def shift_stratum(field, lam, bound: int) -> ClosedSetDescriptor:
    return ClosedSetDescriptor.make(field, -1, [(lam, bound)])


def descriptor_canonicalize(d: ClosedSetDescriptor) -> ClosedSetDescriptor:
    return ClosedSetDescriptor.make(d.field, d.k, d.exceptional)


def _check_fields(a, b):
    if a.field != b.field:
        raise ValueError("descriptor field mismatch")


def descriptor_union(a: ClosedSetDescriptor, b: ClosedSetDescriptor) -> ClosedSetDescriptor:
    _check_fields(a, b)
    k = max(a.k, b.k)
    lams = {l for l, _ in a.exceptional} | {l for l, _ in b.exceptional}
    entries = [(l, max(a.bound_at(l), b.bound_at(l))) for l in lams]
    return ClosedSetDescriptor.make(a.field, k, entries)


def descriptor_intersect(a: ClosedSetDescriptor, b: ClosedSetDescriptor) -> ClosedSetDescriptor:
    _check_fields(a, b)
    k = min(a.k, b.k)
    lams = {l for l, _ in a.exceptional} | {l for l, _ in b.exceptional}
    entries = [(l, min(a.bound_at(l), b.bound_at(l))) for l in lams]
    return ClosedSetDescriptor.make(a.field, k, entries)


def descriptor_contains(a: ClosedSetDescriptor, b: ClosedSetDescriptor) -> bool:
    _check_fields(a, b)
    if a.k < b.k:
        return False
    return all(a.bound_at(l) >= bound for l, bound in b.exceptional)


def chain_stabilization(chain) -> int:
    """First index from which a verified-descending descriptor chain is constant."""
    chain = list(chain)
    if not chain:
        raise ValueError("empty chain")
    for prev, nxt in zip(chain, chain[1:]):
        if not descriptor_contains(prev, nxt):
            raise ValueError("chain is not descending")
    j = len(chain) - 1
    while j > 0 and chain[j - 1] == chain[j]:
        j -= 1
    return j


def descriptor_to_json(d: ClosedSetDescriptor) -> dict:
    return {
        "k": d.k,
        "exceptional": [
            {"lambda": d.field.format(l), "bound": b} for l, b in d.exceptional
        ],
    }


def descriptor_from_json(field, obj) -> ClosedSetDescriptor:
    entries = [(field.parse(e["lambda"]), int(e["bound"])) for e in obj.get("exceptional", [])]
    return ClosedSetDescriptor.make(field, int(obj["k"]), entries)
