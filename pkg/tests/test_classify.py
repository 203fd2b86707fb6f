"""Classification pipeline: neighbor counts, minimal-vector counts,
intersection numbers, root decomposition, and the case eliminations."""

from fractions import Fraction

import numpy as np
import pytest

from latshell import catalog
from latshell import classify as cl
from latshell.lattice import Lattice, LatticeError
from latshell.shells import ShellSet, enumerate_shell


def shell3(name):
    return enumerate_shell(catalog.build(name), 3)


# -- neighbor profiles -------------------------------------------------


def test_neighbor_profile_frozen_values():
    x1 = shell3("L1621")
    prof = cl.neighbor_profile(x1, [int(v) for v in x1.vectors[0]])
    assert (prof.n0, prof.n1, prof.n2) == (500, 255, 6)
    assert prof.total_with(len(x1))

    x7 = shell3("O7")
    prof = cl.neighbor_profile(x7, [int(v) for v in x7.vectors[0]])
    assert (prof.n0, prof.n1, prof.n2) == (0, 27, 0)
    assert prof.total_with(len(x7))

    x3 = shell3("L1623")
    prof = cl.neighbor_profile(x3, [int(v) for v in x3.vectors[0]])
    assert (prof.n0, prof.n1, prof.n2) == (2060, 975, 42)
    assert prof.total_with(len(x3))


def test_ni_closed_forms_match_counts():
    assert cl.check_ni_formulas(shell3("O7"))
    assert cl.check_ni_formulas(shell3("L1621"))
    assert cl.check_ni_formulas(shell3("Z7"))


def test_ni_formula_values():
    n0, n1, n2 = cl.ni_closed_forms(16, 1024)
    assert (n0, n1, n2) == (500, 255, 6)
    n0, n1, n2 = cl.ni_closed_forms(16, 4096)
    assert (n0, n1, n2) == (2060, 975, 42)
    # dimension 7: the norm-3 shell of the 56-vector lattice
    n0, n1, n2 = cl.ni_closed_forms(7, 56)
    assert (n0, n1, n2) == (0, 27, 0)


def test_ni_requires_a_design():
    # the cube vertices are only a 3-design
    z3 = enumerate_shell(Lattice([[1, 0, 0], [0, 1, 0], [0, 0, 1]]), 3)
    with pytest.raises(LatticeError):
        cl.check_ni_formulas(z3)


# -- minimal-vector profiles -------------------------------------------


def test_minvec_profile_z7():
    x = shell3("Z7")
    prof = cl.minvec_profile(x, [1, 0, 0, 0, 0, 0, 0])
    assert (prof.p0, prof.p1) == (160, 60)
    assert prof.p0 + 2 * prof.p1 == len(x)


def test_minvec_profile_bound_violation():
    x = shell3("Z7")
    with pytest.raises(LatticeError):
        cl.minvec_profile(x, [int(v) for v in x.vectors[0]])


def test_pi_closed_forms():
    assert cl.pi_closed_forms(7, 280) == (1, 160, 60)
    assert cl.pi_closed_forms(16, 1024) == (2, 640, 192)
    assert cl.pi_closed_forms(16, 2048)[2] == 384


def test_check_pi_formulas():
    assert cl.check_pi_formulas(catalog.build("Z7"))
    assert cl.check_pi_formulas(catalog.build("L1621"))
    assert cl.check_pi_formulas(catalog.build("L1622"))
    # minimum 3 instead of (n + 2) / 9, so the premise fails
    assert not cl.check_pi_formulas(catalog.build("O7"))


# -- divisibility ------------------------------------------------------


def test_divisibility_and_s2():
    rep = cl.divisibility_and_s2(catalog.build("L1621"))
    assert rep["shell_size"] == 1024
    assert rep["divisible_by_256"] and rep["at_least_512"]
    assert rep["s2_size"] == 32 and rep["s2_matches"]

    rep = cl.divisibility_and_s2(catalog.build("L1622"))
    assert rep["s2_size"] == 96 and rep["s2_matches"]


def test_divisibility_needs_minimum_two():
    with pytest.raises(LatticeError):
        cl.divisibility_and_s2(catalog.build("Z7"))


# -- intersection numbers ----------------------------------------------


def test_intersection_numbers_frozen_gamma2():
    tab = cl.intersection_numbers(shell3("L1621"), 2)
    assert tab.counts.get((3, 3), 0) == 0  # no z is at product 3 with both
    assert tab.counts[(2, 3)] == 1  # z = y
    assert tab.counts[(3, 2)] == 1  # z = x
    assert tab.counts.get((2, 2), 0) == 0
    assert tab.counts[(1, 2)] == 5
    assert tab.counts[(1, 1)] == 160
    assert tab.counts[(0, 1)] == 90
    assert tab.counts[(0, 0)] == 320


def test_intersection_table_symmetries():
    x = shell3("L1621")
    plus = cl.intersection_numbers(x, 2).counts
    # P(alpha, beta) = P(beta, alpha)
    for (a, b), v in plus.items():
        assert plus.get((b, a)) == v
    # negating the pair's second member: P_{-g}(alpha, -beta) = P_g(alpha, beta)
    minus = cl.intersection_numbers(x, -2).counts
    for (a, b), v in plus.items():
        assert minus.get((a, -b)) == v


def test_p2_closed_forms_check():
    assert cl.check_P2_closed_forms(shell3("L1621"))


def test_p2_closed_form_values():
    forms = cl.p2_closed_forms(4096)
    assert forms[(2, 2)] == 12
    assert forms[(1, 2)] == 29
    forms = cl.p2_closed_forms(1024)
    assert forms[(2, 2)] == 0
    assert forms[(0, 0)] == 320


def test_intersection_numbers_no_pair():
    with pytest.raises(LatticeError):
        cl.intersection_numbers(shell3("Z7"), 7)


def test_intersection_numbers_non_constant():
    # rectangular lattice: the two orbits of norm-9 pairs at product 3
    # bucket differently, so some entries cannot be constant
    lat = Lattice([[1, 0], [0, 2]])
    shell = enumerate_shell(lat, 9)
    assert len(shell) == 6
    tab = cl.intersection_numbers(shell, 3)
    assert cl.NON_CONSTANT in tab.counts.values()


# -- norm-2 shell statistics -------------------------------------------


def test_s2_neighbor_counts_small():
    rep = cl.s2_neighbor_counts(catalog.build("L1621"))
    assert rep["ip1"] == 0 and rep["ip1_matches"]
    assert rep["ip0"] == 30
    assert rep["ip0_printed_formula"] == -2 and not rep["ip0_printed_matches"]
    assert rep["ip0_consistent_matches"]
    assert rep["cross_count_equals_n2"]
    assert rep["double_count_holds"]

    rep = cl.s2_neighbor_counts(catalog.build("L1622"))
    assert rep["ip1"] == 8 and rep["ip1_matches"]
    assert rep["ip0"] == 78
    assert rep["ip0_printed_formula"] == 14 and not rep["ip0_printed_matches"]
    assert rep["ip0_consistent_matches"]
    assert rep["cross_count_equals_n2"]
    assert rep["double_count_holds"]


# -- root decomposition ------------------------------------------------


def test_root_decompose_lattice_shells():
    dec = cl.root_decompose(enumerate_shell(catalog.build("L1621"), 2))
    assert dec.label() == "(A1)^16"
    assert dec.total_rank == 16 and dec.total_roots == 32

    dec = cl.root_decompose(enumerate_shell(catalog.build("L1622"), 2))
    assert dec.label() == "(D4)^4"
    assert dec.total_rank == 16 and dec.total_roots == 96


def test_root_decompose_classics():
    e8 = cl.root_decompose(enumerate_shell(catalog.build("E8"), 2))
    assert e8.label() == "E8" and e8.total_roots == 240
    assert e8.components[0].ip1 == 56

    d6 = cl.root_decompose(enumerate_shell(catalog.build("D6"), 2))
    assert d6.label() == "D6" and d6.total_roots == 60

    a2 = cl.root_decompose(enumerate_shell(catalog.build("A2"), 2))
    assert a2.label() == "A2" and a2.components[0].ip1 == 2

    z2 = Lattice([[2, 0], [0, 2]])
    dec = cl.root_decompose(enumerate_shell(z2, 2))
    assert dec.label() == "(A1)^2"


def test_root_decompose_rejects_non_root_system():
    # plant four of the six hexagonal roots: rank 2 but wrong count
    lat = Lattice([[2, 1], [1, 2]])
    full = enumerate_shell(lat, 2)
    keep = [i for i, row in enumerate(full.vectors) if not (row[0] and row[1])]
    assert len(keep) == 4
    planted = ShellSet(lat, Fraction(2), full.vectors[keep])
    with pytest.raises(LatticeError):
        cl.root_decompose(planted)


def test_root_decompose_wrong_norm():
    with pytest.raises(LatticeError):
        cl.root_decompose(shell3("Z7"))


# -- admissible unions and eliminations --------------------------------


def test_enumerate_admissible_root_systems():
    cases = cl.enumerate_admissible_root_systems(16)
    got = {(d.label(), size) for d, size in cases}
    assert got == {
        ("(A1)^16", 1024),
        ("(A2)^8", 1280),
        ("(A4)^4", 1792),
        ("(D4)^4", 2048),
        ("(A8)^2", 2816),
        ("(D8)^2", 4096),
        ("A16", 4864),
        ("(E8)^2", 8192),
        ("D16", 8192),
    }
    for dec, size in cases:
        assert dec.total_rank == 16
        assert size == 16 * (dec.total_roots + 32)


def test_m1_prime_formulas_brute_force():
    for r in range(1, 9):
        roots = cl.a_roots(r)
        assert len(roots) == r * (r + 1)
        for d in range(r):
            got = cl.m1_prime(roots, cl.a_case_vector(r, d))
            assert got == cl.m1_prime_formula_a(r, d)
    for r in (4, 8, 16):
        roots = cl.d_roots(r)
        assert len(roots) == 2 * r * (r - 1)
        for d in (1, 2):
            got = cl.m1_prime(roots, cl.d_case_vector(r, d))
            assert got == cl.m1_prime_formula_d(r, d)


def test_m1_prime_even_for_even_a_rank():
    # the parity elimination: every value even when the rank is even
    for r in (2, 4, 8, 16):
        for d in range(r):
            assert cl.m1_prime_formula_a(r, d) % 2 == 0


def test_m1_prime_frozen_tables():
    assert [cl.m1_prime_formula_d(4, d) for d in (1, 2)] == [6, 6]
    assert [cl.m1_prime_formula_d(8, d) for d in (1, 2)] == [28, 14]
    assert [cl.m1_prime_formula_d(16, d) for d in (1, 2)] == [120, 30]
    assert cl.e8_m1_prime_replay() == {1: 60, 2: 46}


def test_m1_prime_bound_violation():
    with pytest.raises(LatticeError):
        cl.m1_prime(cl.d_roots(4), [2, 0, 0, 0])


def test_m1_prime_empirical_from_lattice():
    # per-component ip-1 counts of a real shell vector against the real
    # norm-2 shell, compared with the synthetic tables
    lat = catalog.build("L1622")
    s2 = enumerate_shell(lat, 2)
    dec = cl.root_decompose(s2)
    assert dec.label() == "(D4)^4"
    x3 = enumerate_shell(lat, 3)
    g = np.asarray([[int(v) for v in row] for row in lat.gram], dtype=np.int64)
    for x0 in x3.vectors[:5]:
        dots = s2.vectors.astype(np.int64) @ g @ x0.astype(np.int64)
        assert int((dots == 1).sum()) == 18  # three components at 6 each


def test_eliminate_cases():
    steps = {s.label: s for s in cl.eliminate_cases()}
    assert len(steps) == 9
    assert cl.surviving_cases() == ["(A1)^16", "(D4)^4", "(D8)^2"]

    assert steps["(A1)^16"].witness.count(1) == 6
    assert sorted(steps["(D4)^4"].witness) == [0, 6, 6, 6]
    assert sorted(steps["(D8)^2"].witness) == [14, 28]

    for label in ("(A2)^8", "(A4)^4", "(A8)^2", "A16"):
        step = steps[label]
        assert not step.survives
        assert "odd" in step.reason

    assert not steps["D16"].survives
    assert steps["D16"].achievable == [30, 120]
    assert not steps["(E8)^2"].survives
    assert steps["(E8)^2"].achievable == [46, 60]


# -- reports -----------------------------------------------------------


def test_replay_report_shape():
    rep = cl.replay_report()
    assert rep["admissible_cases"] == 9
    assert rep["survivors"] == ["(A1)^16", "(D4)^4", "(D8)^2"]
    sizes = sorted(c["shell_size"] for c in rep["cases"])
    assert sizes == [1024, 1280, 1792, 2048, 2816, 4096, 4864, 8192, 8192]


def test_classification_report_l1621():
    rep = cl.classification_report(catalog.build("L1621"))
    assert rep["shell_size"] == 1024
    assert rep["ni_formulas"] and rep["pi_formulas"]
    assert rep["root_system"]["label"] == "(A1)^16"
    assert rep["admissible_case"] and rep["surviving_case"]


def test_classification_report_o7():
    rep = cl.classification_report(catalog.build("O7"))
    assert rep["shell_size"] == 56
    assert rep["ni_formulas"]
    assert not rep["pi_formulas"]
    assert "root_system" not in rep


def test_norm3_vectors_generate_each_lattice():
    # every catalog lattice in the theorem family is spanned over Z by
    # its norm-3 shell: the HNF of the coordinate rows is the identity
    from latshell.lattice import hnf_basis

    for name in ("O1", "Z7", "O7", "O16", "O22", "O23",
                 "L1621", "L1622", "L1623"):
        lat = catalog.build(name)
        vecs = shell3(name).vectors
        # spread sample: sorted prefixes concentrate in sublattices
        stride = max(1, len(vecs) // 150)
        rows = [[int(v) for v in row] for row in vecs[::stride].tolist()]
        assert hnf_basis(rows) == [
            [1 if i == j else 0 for j in range(lat.dim)]
            for i in range(lat.dim)], name
