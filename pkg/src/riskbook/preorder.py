"""Finite preorders: reflexive, transitive relations with four-way comparison.

A :class:`Preorder` stores the full reflexive-transitive closure of its
declared edges.  A pair ``(a, b)`` in the relation reads "a is at least as
high as b"; rule priorities and the trajectory risk ordering both use this
orientation, with "higher" meaning more important and riskier respectively.
Instances are immutable and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import DuplicateElement, UnknownElement


class Verdict(Enum):
    """Outcome of comparing two elements of a preorder.

    ``HIGHER`` means the first argument strictly dominates the second,
    ``LOWER`` the reverse, ``EQUAL`` that both directions of the relation
    hold, and ``INCOMPARABLE`` that neither does.
    """

    HIGHER = "higher"
    LOWER = "lower"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"

    @staticmethod
    def from_directions(forward: bool, backward: bool) -> "Verdict":
        """Build a verdict from the two directions of a relation.

        ``forward`` is "first dominates-or-equals second", ``backward`` the
        reverse direction.
        """
        if forward and backward:
            return Verdict.EQUAL
        if forward:
            return Verdict.HIGHER
        if backward:
            return Verdict.LOWER
        return Verdict.INCOMPARABLE


@dataclass(frozen=True)
class Preorder:
    """A closed preorder over a finite, ordered set of identifiers.

    ``relation`` must already be reflexive and transitive; use
    :func:`build_preorder` to close a set of declared edges.  Element order
    is preserved from declaration so that every derived output is
    deterministic.
    """

    elements: tuple[str, ...]
    relation: frozenset[tuple[str, str]]

    def __post_init__(self) -> None:
        declared = set(self.elements)
        if len(declared) != len(self.elements):
            raise DuplicateElement("preorder elements contain duplicates")
        for a, b in self.relation:
            if a not in declared or b not in declared:
                raise UnknownElement(f"relation pair ({a!r}, {b!r}) references an undeclared element")
        for a in self.elements:
            if (a, a) not in self.relation:
                raise ValueError(f"relation is not reflexive: missing ({a!r}, {a!r})")
        above: dict[str, set[str]] = {a: set() for a in self.elements}
        for a, b in self.relation:
            above[a].add(b)
        for a, reach in above.items():
            for b in reach:
                if not above[b] <= reach:
                    raise ValueError(f"relation is not transitive at ({a!r}, {b!r})")

    def _require(self, *ids: str) -> None:
        declared = set(self.elements)
        for x in ids:
            if x not in declared:
                raise UnknownElement(f"unknown element {x!r}")

    def at_least(self, a: str, b: str) -> bool:
        """True when a is at least as high as b."""
        self._require(a, b)
        return (a, b) in self.relation

    def strictly_higher(self, a: str, b: str) -> bool:
        """True when a is at least as high as b but not conversely."""
        return self.compare(a, b) is Verdict.HIGHER

    def compare(self, a: str, b: str) -> Verdict:
        """Four-way comparison of a against b."""
        self._require(a, b)
        return Verdict.from_directions((a, b) in self.relation, (b, a) in self.relation)

    def minimal_elements(self, subset: Sequence[str]) -> list[str]:
        """Members of ``subset`` that are not strictly above any other member.

        This is the bottom layer of the preorder restricted to ``subset``:
        with the "riskier is higher" orientation used for trajectories it is
        exactly the set with no strictly better alternative.  Output keeps
        the order of ``subset`` and is nonempty whenever ``subset`` is.
        """
        self._require(*subset)
        return [
            a
            for a in subset
            if not any(self.compare(a, b) is Verdict.HIGHER for b in subset if b != a)
        ]


def build_preorder(elements: Sequence[str], priority_edges: Iterable[tuple[str, str]]) -> Preorder:
    """Close the declared ``(higher, lower)`` edges into a :class:`Preorder`.

    Equal rank is declared with a pair of opposite edges; omitting both
    directions leaves two elements incomparable.  Raises
    :class:`DuplicateElement` on repeated identifiers and
    :class:`UnknownElement` when an edge endpoint is undeclared.
    """
    elements = tuple(elements)
    index: dict[str, int] = {}
    for i, e in enumerate(elements):
        if e in index:
            raise DuplicateElement(f"element {e!r} declared more than once")
        index[e] = i

    n = len(elements)
    reach = [1 << i for i in range(n)]
    for hi, lo in priority_edges:
        if hi not in index:
            raise UnknownElement(f"edge ({hi!r}, {lo!r}) references undeclared element {hi!r}")
        if lo not in index:
            raise UnknownElement(f"edge ({hi!r}, {lo!r}) references undeclared element {lo!r}")
        reach[index[hi]] |= 1 << index[lo]

    # Warshall closure on bitmasks; element counts are small.
    for k in range(n):
        bit = 1 << k
        for i in range(n):
            if reach[i] & bit:
                reach[i] |= reach[k]

    relation = frozenset(
        (elements[i], elements[j]) for i in range(n) for j in range(n) if reach[i] >> j & 1
    )
    return Preorder(elements, relation)
