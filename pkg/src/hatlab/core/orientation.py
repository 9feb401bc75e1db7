# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

"""Orientations of the n-cube built from Hamming codes.

Vertices are configuration ranks, so player i owns bit n - i. An edge is the pair
(low, high) of ranks differing in one bit and is oriented by naming its head.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Mapping

from hatlab.core.codes import hamming_code
from hatlab.exceptions import DomainError

logger = logging.getLogger(__name__)

Edge = tuple[int, int]

ORIENTATION_ORDERS = (2, 3)


def cube_edges(n: int) -> Iterator[Edge]:
    """All n*2^(n-1) edges of the n-cube, low end first, in (low, high) order."""
    for low in range(2**n):
        for bit in range(n - 1, -1, -1):
            if not low >> bit & 1:
                yield low, low | 1 << bit


@dataclass(frozen=True)
class Orientation:
    """A head for every edge of the n-cube."""

    n: int
    heads: Mapping[Edge, int]

    def __post_init__(self):
        expected = self.n * 2 ** (self.n - 1)
        if len(self.heads) != expected:
            raise DomainError(f"orientation has {len(self.heads)} edges, expected {expected}")
        for edge in cube_edges(self.n):
            if self.heads.get(edge) not in edge:
                raise DomainError(f"edge {edge} has no valid head")

    def head(self, u: int, v: int) -> int:
        """Head of the edge joining ``u`` and ``v``."""
        return self.heads[(min(u, v), max(u, v))]

    @cached_property
    def indegrees(self) -> tuple[int, ...]:
        """Indegree of every vertex, by rank."""
        counts = [0] * 2**self.n
        for head in self.heads.values():
            counts[head] += 1
        return tuple(counts)

    def indegree(self, vertex: int) -> int:
        """Number of edges pointing at ``vertex``."""
        return self.indegrees[vertex]


def _eulerian_circuit(adjacency: dict[int, list[int]], start: int, used: set[Edge]) -> list[int]:
    # Hierholzer; unused edges are taken in increasing neighbour rank
    cursor = {vertex: 0 for vertex in adjacency}
    stack = [start]
    circuit = []
    while stack:
        vertex = stack[-1]
        neighbours = adjacency[vertex]
        while cursor[vertex] < len(neighbours):
            nxt = neighbours[cursor[vertex]]
            if (min(vertex, nxt), max(vertex, nxt)) not in used:
                break
            cursor[vertex] += 1
        if cursor[vertex] < len(neighbours):
            nxt = neighbours[cursor[vertex]]
            used.add((min(vertex, nxt), max(vertex, nxt)))
            stack.append(nxt)
        else:
            circuit.append(stack.pop())
    circuit.reverse()
    return circuit


def berlekamp_orientation(m: int) -> Orientation:
    """Orients the cube of dimension 2^m - 1 around the Hamming code of order ``m``.

    Edges at a codeword point away from it. The remaining edges, on the non-codewords,
    form an eulerian graph; every component is oriented along an eulerian circuit started
    at its least vertex with unused edges.
    """
    if m not in ORIENTATION_ORDERS:
        raise DomainError(f"orientations are supported for m in {ORIENTATION_ORDERS}, got {m}")
    code = hamming_code(m)
    n = code.n
    codewords = code.ranks

    heads: dict[Edge, int] = {}
    adjacency: dict[int, list[int]] = {v: [] for v in range(2**n) if v not in codewords}
    for low, high in cube_edges(n):
        if low in codewords:
            heads[(low, high)] = high
        elif high in codewords:
            heads[(low, high)] = low
        else:
            adjacency[low].append(high)
            adjacency[high].append(low)
    for neighbours in adjacency.values():
        neighbours.sort()
        if len(neighbours) % 2:
            raise DomainError("leftover graph is not eulerian")

    used: set[Edge] = set()
    components = 0
    for start in sorted(adjacency):
        if all((min(start, v), max(start, v)) in used for v in adjacency[start]):
            continue
        circuit = _eulerian_circuit(adjacency, start, used)
        for tail, head in zip(circuit, circuit[1:]):
            heads[(min(tail, head), max(tail, head))] = head
        components += 1

    logger.debug("Oriented %d-cube with %d eulerian components", n, components)
    return Orientation(n=n, heads=heads)
