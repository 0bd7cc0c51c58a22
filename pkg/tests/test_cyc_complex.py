import json
import random
from fractions import Fraction
from itertools import product

import pytest

from cycres import cyc_complex as cc
from cycres import graph_core
from cycres.errors import InternalError, NotIrreducibleError, ValidationError
from cycres.poly_ring import parse_elem

from conftest import REDUCIBLE, WEIGHTED4, complex_from_matrix, generic4_matrix


# ---------------------------------------------------------------------------
# independent enumeration oracles

def stirling2(n, k):
    if n == 0:
        return 1 if k == 0 else 0
    if k == 0:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def brute_force_basis(n, k):
    """Ordered partitions via surjective block assignments, n pinned last."""
    m = k + 1
    found = set()
    for assign in product(range(m), repeat=n - 1):
        labels = assign + (m - 1,)
        if len(set(labels)) != m:
            continue
        blocks = tuple(
            tuple(v for v in range(1, n + 1) if labels[v - 1] == b)
            for b in range(m)
        )
        found.add(blocks)
    return found


# ---------------------------------------------------------------------------
# srle order and bases

def P(*blocks):
    return tuple(tuple(b) for b in blocks)


def test_srle_compare_examples():
    assert cc.srle_compare(P([1, 2, 3], [4]), P([2, 3], [1, 4]), 4) == -1
    assert cc.srle_compare(P([3], [2], [1], [4]), P([1], [2], [3], [4]), 4) == -1
    p = P([2], [1, 3], [4])
    assert cc.srle_compare(p, p, 4) == 0


def test_enumerate_basis_n4_k1_full_listing():
    got = cc.enumerate_basis(4, 1)
    assert got == [
        P([1, 2, 3], [4]),
        P([2, 3], [1, 4]),
        P([1, 3], [2, 4]),
        P([1, 2], [3, 4]),
        P([3], [1, 2, 4]),
        P([2], [1, 3, 4]),
        P([1], [2, 3, 4]),
    ]


def test_enumerate_basis_n4_k3():
    got = cc.enumerate_basis(4, 3)
    assert len(got) == 6
    assert got[0] == P([3], [2], [1], [4])
    assert got[-1] == P([1], [2], [3], [4])


def test_enumerate_basis_trivial():
    assert cc.enumerate_basis(4, 0) == [P([1, 2, 3, 4])]


def test_enumerate_basis_matches_brute_force_and_stirling():
    for n in range(3, 7):
        for k in range(n):
            basis = cc.enumerate_basis(n, k)
            expected = brute_force_basis(n, k)
            assert len(basis) == len(expected)
            assert set(basis) == expected
            fact = 1
            for i in range(1, k + 1):
                fact *= i
            assert len(basis) == fact * stirling2(n, k + 1)


def test_canonical_partition_rotates():
    assert cc.canonical_partition(((4, 1), (2,), (3,)), 4) == P([2], [3], [1, 4])


# ---------------------------------------------------------------------------
# arrow monomials and boundaries

def test_arrow_monomial_empty_sets():
    L = generic4_matrix()
    assert cc.arrow_monomial((), (1, 2), L) == (0, 0, 0, 0)
    assert cc.arrow_monomial((1, 2), (), L) == (0, 0, 0, 0)


def test_arrow_monomial_k4(k4_complex):
    assert cc.arrow_monomial((1, 2, 3), (4,), k4_complex.L) == (1, 1, 1, 0)


def test_arrow_monomial_generic():
    L = generic4_matrix()
    a = L.a
    got = cc.arrow_monomial((2, 3), (1, 4), L)
    assert got == (0, a[1][0] + a[1][3], a[2][0] + a[2][3], 0)
    with pytest.raises(InternalError):
        cc.arrow_monomial((1, 2), (2, 3), L)


def test_boundary_level2_generic_example(generic4_complex):
    # image of (23,1,4) combines (123,4), (23,14) and (1,234)
    C = generic4_complex
    a = C.L.a
    f = C.diffs[2][0]
    assert C.bases[2][0] == P([2, 3], [1], [4])
    expected = {
        C.index[1][P([1, 2, 3], [4])]: {(0, a[1][0], a[2][0], 0): Fraction(1)},
        C.index[1][P([2, 3], [1, 4])]: {(a[0][3], 0, 0, 0): Fraction(-1)},
        C.index[1][P([1], [2, 3, 4])]: {(0, 0, 0, a[3][1] + a[3][2]): Fraction(-1)},
    }
    assert f == expected


def test_boundary_level3_signs(generic4_complex):
    # image of (3,2,1,4) has signs +,-,+,- on its four partners
    C = generic4_complex
    a = C.L.a
    f = C.diffs[3][0]
    assert C.bases[3][0] == P([3], [2], [1], [4])
    expected = {
        C.index[2][P([2, 3], [1], [4])]: {(0, 0, a[2][1], 0): Fraction(1)},
        C.index[2][P([3], [1, 2], [4])]: {(0, a[1][0], 0, 0): Fraction(-1)},
        C.index[2][P([3], [2], [1, 4])]: {(a[0][3], 0, 0, 0): Fraction(1)},
        C.index[2][P([2], [1], [3, 4])]: {(0, 0, 0, a[3][2]): Fraction(-1)},
    }
    assert f == expected


def test_boundary_singletons_give_column_binomials(generic4_complex):
    C = generic4_complex
    rows = C.L.signed_rows()
    n = C.n
    for i in range(1, n):
        p = cc.canonical_partition(
            ((i,), tuple(v for v in range(1, n + 1) if v != i)), n
        )
        f = C.diffs[1][C.index[1][p]]
        col = [rows[r][i - 1] for r in range(n)]
        plus = tuple(max(x, 0) for x in col)
        minus = tuple(max(-x, 0) for x in col)
        assert f == {0: {plus: Fraction(1), minus: Fraction(-1)}}


# ---------------------------------------------------------------------------
# the assembled complex

def test_build_complex_ranks(k4_complex):
    assert k4_complex.ranks() == (1, 7, 12, 6)


def test_build_complex_ranks_n3_and_n5():
    g3 = graph_core.validate_digraph(3, [(1, 2, 1), (2, 3, 1), (3, 1, 1), (1, 3, 2)])
    C3 = cc.build_complex(graph_core.prepare(graph_core.laplacian(g3)))
    assert C3.ranks() == (1, 3, 2)

    from cycres.resolution_verify import random_icb_digraph

    g5 = random_icb_digraph(5, random.Random(1))
    C5 = cc.build_complex(graph_core.prepare(graph_core.laplacian(g5)))
    assert C5.ranks() == (1, 15, 50, 60, 24)


def test_build_complex_rejects_reducible():
    g = graph_core.digraph_from_matrix(REDUCIBLE)
    with pytest.raises(NotIrreducibleError):
        cc.build_complex(graph_core.laplacian(g))


def test_build_complex_rejects_non_echelon():
    g = graph_core.digraph_from_matrix(WEIGHTED4)
    with pytest.raises(ValidationError):
        cc.build_complex(graph_core.laplacian(g))


def test_shifts_are_homogeneous_degrees(generic4_complex):
    C = generic4_complex
    assert C.shifts[0] == [0]
    for k in range(1, C.n):
        for j, f in enumerate(C.diffs[k]):
            for p, poly in f.items():
                for mono in poly:
                    assert C.ctx.degree(mono) + C.shifts[k - 1][p] == C.shifts[k][j]


def test_euler_characteristic_vanishes(k4_complex, generic4_complex, cycle4_complex):
    for C in (k4_complex, generic4_complex, cycle4_complex):
        assert sum((-1) ** k * r for k, r in enumerate(C.ranks())) == 0


def test_check_d_squared(k4_complex):
    assert cc.check_d_squared(k4_complex)


def test_check_d_squared_random_n5():
    from cycres.resolution_verify import random_icb_digraph

    g = random_icb_digraph(5, random.Random(23))
    C = cc.build_complex(graph_core.prepare(graph_core.laplacian(g)))
    assert cc.check_d_squared(C)
    assert cc.check_leading_terms(C)


def test_corrupted_sign_breaks_d_squared():
    C = complex_from_matrix([[3, -1, -1, -1], [-1, 3, -1, -1],
                             [-1, -1, 3, -1], [-1, -1, -1, 3]])
    idx = next(iter(C.diffs[2][0]))
    mono = next(iter(C.diffs[2][0][idx]))
    C.diffs[2][0][idx][mono] = -C.diffs[2][0][idx][mono]
    assert not cc.check_d_squared(C)


def test_first_differential_image_in_kernel_of_projection(k4_complex):
    # degree-1 images are differences of monomials with equal weighted degree,
    # the defining property of lattice-ideal membership
    C = k4_complex
    for f in C.diffs[1]:
        monos = list(f[0])
        assert len(monos) == 2
        assert C.ctx.degree(monos[0]) == C.ctx.degree(monos[1])
        assert f[0][monos[0]] + f[0][monos[1]] == 0


def test_minimality_check(k4_complex, cycle4_complex):
    assert cc.minimality_check(k4_complex) == (True, None)
    ok, witness = cc.minimality_check(cycle4_complex)
    assert not ok
    k, j, p, coeff = witness
    assert abs(coeff) == 1
    unit = cycle4_complex.ctx.unit()
    assert cycle4_complex.diffs[k][j][p][unit] == coeff


def test_minimality_weighted_complete_graph():
    a = [[0, 2, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]]
    rows = [
        [sum(a[i]) if i == j else -a[i][j] for j in range(4)]
        for i in range(4)
    ]
    C = complex_from_matrix(rows)
    assert cc.minimality_check(C) == (True, None)


def test_leading_terms_match_formula(k4_complex, generic4_complex, cycle4_complex):
    for C in (k4_complex, generic4_complex, cycle4_complex):
        assert cc.check_leading_terms(C)


def test_boundary_xn_marker():
    # all terms except the closing one avoid the last variable; with a
    # positive last row the closing term must contain it
    C = complex_from_matrix([[3, -1, -1, -1], [-1, 3, -1, -1],
                             [-1, -1, 3, -1], [-1, -1, -1, 3]])
    n = C.n
    assert all(C.L.a[n - 1][i] > 0 for i in range(n - 1))
    for k in range(1, n):
        for j, p in enumerate(C.bases[k]):
            f = C.diffs[k][j]
            rotate = cc.canonical_partition(
                p[1:k] + (tuple(sorted(p[0] + p[k])),), n
            )
            ridx = C.index[k - 1][rotate]
            for idx, poly in f.items():
                for mono in poly:
                    if idx == ridx and len(poly) == 1:
                        assert mono[n - 1] > 0
                    elif idx != ridx:
                        assert mono[n - 1] == 0


# ---------------------------------------------------------------------------
# export

def test_export_round_trip(k4_complex):
    C = k4_complex
    doc = json.loads(cc.export_json(C))
    assert doc["n"] == 4
    assert doc["nu"] == [1, 1, 1, 1]
    assert doc["ranks"] == [1, 7, 12, 6]
    assert doc["shifts"][0] == [0]
    for k in range(1, 4):
        cols = doc["diffs"][k - 1]
        assert [c["basis"] for c in cols] == list(range(1, len(C.bases[k]) + 1))
        for j, col in enumerate(cols):
            assert parse_elem(col["poly"], 4) == C.diffs[k][j]


def test_export_is_deterministic(k4_complex):
    assert cc.export_json(k4_complex) == cc.export_json(k4_complex)


# ---------------------------------------------------------------------------
# full differential tables for n = 4, frozen from the generic displayed form

def _expected_elem(C, terms):
    """terms: (sign, {var: [targets]}, partition string) -> Elem."""
    a = C.L.a
    out = {}
    for sign, exps, part in terms:
        mono = [0, 0, 0, 0]
        for v, targets in exps.items():
            mono[v - 1] = sum(a[v - 1][t - 1] for t in targets)
        blocks = tuple(tuple(int(ch) for ch in b) for b in part.split(","))
        out[C.index[len(blocks) - 1][blocks]] = {tuple(mono): Fraction(sign)}
    return out


LEVEL2_TABLE = [
    ("23,1,4", [(1, {2: [1], 3: [1]}, "123,4"), (-1, {1: [4]}, "23,14"),
                (-1, {4: [2, 3]}, "1,234")]),
    ("13,2,4", [(1, {1: [2], 3: [2]}, "123,4"), (-1, {2: [4]}, "13,24"),
                (-1, {4: [1, 3]}, "2,134")]),
    ("12,3,4", [(1, {1: [3], 2: [3]}, "123,4"), (-1, {3: [4]}, "12,34"),
                (-1, {4: [1, 2]}, "3,124")]),
    ("3,12,4", [(1, {3: [1, 2]}, "123,4"), (-1, {1: [4], 2: [4]}, "3,124"),
                (-1, {4: [3]}, "12,34")]),
    ("3,2,14", [(1, {3: [2]}, "23,14"), (-1, {2: [1, 4]}, "3,124"),
                (-1, {1: [3], 4: [3]}, "2,134")]),
    ("3,1,24", [(1, {3: [1]}, "13,24"), (-1, {1: [2, 4]}, "3,124"),
                (-1, {2: [3], 4: [3]}, "1,234")]),
    ("2,13,4", [(1, {2: [1, 3]}, "123,4"), (-1, {1: [4], 3: [4]}, "2,134"),
                (-1, {4: [2]}, "13,24")]),
    ("2,3,14", [(1, {2: [3]}, "23,14"), (-1, {3: [1, 4]}, "2,134"),
                (-1, {1: [2], 4: [2]}, "3,124")]),
    ("2,1,34", [(1, {2: [1]}, "12,34"), (-1, {1: [3, 4]}, "2,134"),
                (-1, {3: [2], 4: [2]}, "1,234")]),
    ("1,23,4", [(1, {1: [2, 3]}, "123,4"), (-1, {2: [4], 3: [4]}, "1,234"),
                (-1, {4: [1]}, "23,14")]),
    ("1,3,24", [(1, {1: [3]}, "13,24"), (-1, {3: [2, 4]}, "1,234"),
                (-1, {2: [1], 4: [1]}, "3,124")]),
    ("1,2,34", [(1, {1: [2]}, "12,34"), (-1, {2: [3, 4]}, "1,234"),
                (-1, {3: [1], 4: [1]}, "2,134")]),
]

LEVEL3_TABLE = [
    ("3,2,1,4", [(1, {3: [2]}, "23,1,4"), (-1, {2: [1]}, "3,12,4"),
                 (1, {1: [4]}, "3,2,14"), (-1, {4: [3]}, "2,1,34")]),
    ("3,1,2,4", [(1, {3: [1]}, "13,2,4"), (-1, {1: [2]}, "3,12,4"),
                 (1, {2: [4]}, "3,1,24"), (-1, {4: [3]}, "1,2,34")]),
    ("2,3,1,4", [(1, {2: [3]}, "23,1,4"), (-1, {3: [1]}, "2,13,4"),
                 (1, {1: [4]}, "2,3,14"), (-1, {4: [2]}, "3,1,24")]),
    ("2,1,3,4", [(1, {2: [1]}, "12,3,4"), (-1, {1: [3]}, "2,13,4"),
                 (1, {3: [4]}, "2,1,34"), (-1, {4: [2]}, "1,3,24")]),
    ("1,3,2,4", [(1, {1: [3]}, "13,2,4"), (-1, {3: [2]}, "1,23,4"),
                 (1, {2: [4]}, "1,3,24"), (-1, {4: [1]}, "3,2,14")]),
    ("1,2,3,4", [(1, {1: [2]}, "12,3,4"), (-1, {2: [3]}, "1,23,4"),
                 (1, {3: [4]}, "1,2,34"), (-1, {4: [1]}, "2,3,14")]),
]


def _check_table(C, k, table):
    assert len(table) == len(C.bases[k])
    for pos, (part, terms) in enumerate(table):
        blocks = tuple(tuple(int(ch) for ch in b) for b in part.split(","))
        assert C.bases[k][pos] == blocks
        assert C.diffs[k][pos] == _expected_elem(C, terms)


def test_level2_differential_matches_published_table(generic4_complex):
    _check_table(generic4_complex, 2, LEVEL2_TABLE)


def test_level3_differential_matches_published_table(generic4_complex):
    _check_table(generic4_complex, 3, LEVEL3_TABLE)


def test_differential_tables_hold_for_k4(k4_complex):
    _check_table(k4_complex, 2, LEVEL2_TABLE)
    _check_table(k4_complex, 3, LEVEL3_TABLE)
