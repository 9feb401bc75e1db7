# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

import unittest

from parameterized import parameterized

from hatlab.core.codes import hamming_code
from hatlab.core.orientation import Orientation, berlekamp_orientation, cube_edges
from hatlab.exceptions import DomainError


class TestCube(unittest.TestCase):
    @parameterized.expand([(1, 1), (3, 12), (7, 448)])
    def test_edge_count(self, n, edges):
        self.assertEqual(len(list(cube_edges(n))), edges)

    def test_edges_join_neighbours(self):
        for low, high in cube_edges(4):
            self.assertLess(low, high)
            self.assertEqual((low ^ high).bit_count(), 1)


class TestBerlekamp(unittest.TestCase):
    @parameterized.expand([(2,), (3,)])
    def test_indegrees(self, m):
        orientation = berlekamp_orientation(m)
        n = orientation.n
        codewords = hamming_code(m).ranks
        self.assertEqual(sum(orientation.indegrees), n * 2 ** (n - 1))
        for vertex in range(2**n):
            expected = 0 if vertex in codewords else (n + 1) // 2
            self.assertEqual(orientation.indegree(vertex), expected)

    def test_codeword_edges_point_away(self):
        orientation = berlekamp_orientation(3)
        for codeword in hamming_code(3).ranks:
            for bit in range(7):
                self.assertNotEqual(orientation.head(codeword, codeword ^ 1 << bit), codeword)

    def test_six_cycle_of_three_cube(self):
        orientation = berlekamp_orientation(2)
        inner = [edge for edge in cube_edges(3) if 0 not in edge and 7 not in edge]
        self.assertEqual(len(inner), 6)
        for vertex in range(1, 7):
            heads = sum(1 for edge in inner if orientation.head(*edge) == vertex)
            self.assertEqual(heads, 1)

    def test_deterministic(self):
        self.assertEqual(berlekamp_orientation(3), berlekamp_orientation(3))

    @parameterized.expand([(1,), (4,)])
    def test_unsupported(self, m):
        with self.assertRaises(DomainError):
            berlekamp_orientation(m)

    def test_partial_orientation_is_rejected(self):
        with self.assertRaises(DomainError):
            Orientation(n=2, heads={(0, 1): 1})
        with self.assertRaises(DomainError):
            Orientation(n=1, heads={(0, 1): 2})
