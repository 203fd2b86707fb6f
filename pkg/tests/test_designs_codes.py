"""Sign classes, block designs, binary codes, lattice rebuild, and the
Fano-plane subsets of the norm-3 shell in dimension 7."""

import numpy as np
import pytest

from latshell import catalog
from latshell import designs_codes as dc
from latshell.design import strength_with_cap
from latshell.lattice import LatticeError
from latshell.shells import enumerate_shell, theta_prefix


def printed_matrix():
    return dc.IncidenceMatrix.from_strings(dc.BLOCK_DESIGN_16_6_2)


# -- frames ------------------------------------------------------------


def test_detect_frame():
    s2 = enumerate_shell(catalog.build("L1621"), 2)
    frame = dc.detect_frame(s2)
    assert frame.shape == (16, 16)
    g = np.asarray([[int(v) for v in row] for row in catalog.build("L1621").gram])
    dots = frame @ g @ frame.T
    assert (dots == 2 * np.eye(16, dtype=np.int64)).all()


def test_detect_frame_wrong_type():
    s2 = enumerate_shell(catalog.build("L1622"), 2)
    with pytest.raises(LatticeError):
        dc.detect_frame(s2)


def test_orthogonal_frame_matches_detect():
    s2 = enumerate_shell(catalog.build("L1621"), 2)
    assert (dc.orthogonal_frame(s2) == dc.detect_frame(s2)).all()


def test_orthogonal_frame_in_bigger_shell():
    s2 = enumerate_shell(catalog.build("L1623"), 2)
    frame = dc.orthogonal_frame(s2)
    g = np.asarray([[int(v) for v in row] for row in catalog.build("L1623").gram])
    dots = frame @ g @ frame.T
    assert (dots == 2 * np.eye(16, dtype=np.int64)).all()


# -- sign classes ------------------------------------------------------


def test_sign_classes_quoted_counts():
    lat = catalog.build("L1621")
    shell = enumerate_shell(lat, 3)
    frame = dc.detect_frame(enumerate_shell(lat, 2))
    classes = dc.sign_classes(shell, frame)
    assert len(classes) == 16
    assert all(len(c.members) == 64 for c in classes)
    assert all(len(c.support) == 6 for c in classes)
    for a in classes:
        for b in classes:
            if a is not b:
                assert len(set(a.support) & set(b.support)) == 2


def test_sign_classes_bad_frame():
    lat = catalog.build("L1621")
    shell = enumerate_shell(lat, 3)
    frame = dc.detect_frame(enumerate_shell(lat, 2))
    with pytest.raises(LatticeError):
        dc.sign_classes(shell, 2 * frame)


def test_sign_classes_reconstruction_counts():
    for name, want in (("L1622", 32), ("L1623", 64)):
        lat = catalog.build(name)
        frame = dc.orthogonal_frame(enumerate_shell(lat, 2))
        classes = dc.sign_classes(enumerate_shell(lat, 3), frame)
        assert len(classes) == want
        assert all(len(c.support) == 6 for c in classes)


# -- designs -----------------------------------------------------------


def test_incidence_from_classes_is_design():
    lat = catalog.build("L1621")
    frame = dc.detect_frame(enumerate_shell(lat, 2))
    classes = dc.sign_classes(enumerate_shell(lat, 3), frame)
    mat = dc.incidence_from_classes(classes)
    assert dc.verify_design(mat, 2, 16, 6, 2)
    assert dc.design_lambda(mat) == 2


def test_printed_matrix_is_design():
    assert dc.verify_design(printed_matrix(), 2, 16, 6, 2)


def test_verify_design_permutation_invariant():
    mat = printed_matrix()
    rng = np.random.default_rng(11)
    rows = mat.rows[rng.permutation(16)][:, rng.permutation(16)]
    assert dc.verify_design(dc.IncidenceMatrix(rows), 2, 16, 6, 2)


def test_verify_design_rejects_damage():
    rows = printed_matrix().rows.copy()
    rows[0, 0] ^= 1
    assert not dc.verify_design(dc.IncidenceMatrix(rows), 2, 16, 6, 2)


def test_complete_design():
    ones = dc.IncidenceMatrix(np.ones((7, 7), dtype=np.uint8))
    assert dc.verify_design(ones, 2, 7, 7, 7)


def test_incidence_nonuniform_blocks():
    fake = [
        dc.SignClass((0, 1, 2, 3, 4, 5), np.arange(1), np.zeros(16, dtype=np.int64)),
        dc.SignClass((0, 1, 2, 3, 4), np.arange(1), np.zeros(16, dtype=np.int64)),
    ]
    with pytest.raises(LatticeError):
        dc.incidence_from_classes(fake)


def test_reconstruction_lambdas():
    # the class systems of the two larger lattices are 2-designs too,
    # with lambda 4 and 8; found by computation, not quoted
    for name, lam in (("L1622", 4), ("L1623", 8)):
        lat = catalog.build(name)
        frame = dc.orthogonal_frame(enumerate_shell(lat, 2))
        classes = dc.sign_classes(enumerate_shell(lat, 3), frame)
        assert dc.design_lambda(dc.incidence_from_classes(classes)) == lam


# -- codes -------------------------------------------------------------


def test_code_parameters_chain():
    assert dc.code_from_incidence(printed_matrix()).parameters() == (16, 6, 6)
    for name, params in (("L1621", (16, 6, 6)), ("L1622", (16, 7, 4)), ("L1623", (16, 8, 4))):
        rep = dc.design_code_report(catalog.build(name))
        assert tuple(rep["code"]) == params


def test_code_edge_cases():
    zero = dc.IncidenceMatrix(np.zeros((4, 16), dtype=np.uint8))
    assert dc.code_from_incidence(zero).parameters() == (16, 0, None)
    eye = dc.IncidenceMatrix(np.eye(16, dtype=np.uint8))
    assert dc.code_from_incidence(eye).parameters() == (16, 16, 1)


def test_design_code_reports():
    rep = dc.design_code_report(catalog.build("L1621"))
    assert rep["root_system"] == "(A1)^16"
    assert not rep["frame_reconstructed"]
    assert rep["classes"] == 16
    assert rep["design"]["is_2_16_6_2"]

    rep = dc.design_code_report(catalog.build("L1623"))
    assert rep["frame_reconstructed"]
    assert rep["classes"] == 64
    assert rep["design"]["lambda"] == 8


# -- design to lattice -------------------------------------------------


def test_lattice_from_design_round_trip():
    lat = dc.lattice_from_design(printed_matrix())
    want = theta_prefix(catalog.build("L1621"), 6)
    assert theta_prefix(lat, 6) == want
    strength, capped, exact = strength_with_cap(enumerate_shell(lat, 3), 7)
    assert (strength, capped, exact) == (5, False, True)


def test_lattice_from_design_invariances():
    base = dc.lattice_from_design(printed_matrix())
    t0 = theta_prefix(base, 4)

    perm = np.random.default_rng(3).permutation(16)
    permuted = dc.IncidenceMatrix(printed_matrix().rows[perm])
    assert theta_prefix(dc.lattice_from_design(permuted), 4) == t0

    signs = [[1, -1, 1, -1, 1, -1]] * 16
    assert theta_prefix(dc.lattice_from_design(printed_matrix(), signs=signs), 4) == t0


def test_lattice_from_design_rejects_non_design():
    rows = printed_matrix().rows.copy()
    rows[0, 0] ^= 1
    with pytest.raises(LatticeError):
        dc.lattice_from_design(dc.IncidenceMatrix(rows))


def test_lattice_from_own_classes():
    lat = catalog.build("L1621")
    frame = dc.detect_frame(enumerate_shell(lat, 2))
    classes = dc.sign_classes(enumerate_shell(lat, 3), frame)
    rebuilt = dc.lattice_from_design(dc.incidence_from_classes(classes))
    assert theta_prefix(rebuilt, 6) == theta_prefix(lat, 6)


# -- Fano subsets ------------------------------------------------------


def test_fano_plane_count():
    planes = dc.fano_planes()
    assert len(planes) == 30
    for lines in planes:
        assert len(lines) == 7
        pairs = [p for tr in lines for p in ((tr[0], tr[1]), (tr[0], tr[2]), (tr[1], tr[2]))]
        assert len(pairs) == len(set(pairs)) == 21


def test_fano_subsets_isometric():
    subsets = dc.fano_subsets()  # raises if any fingerprint differs
    assert len(subsets) == 30
    for sub in subsets[:3]:
        v = sub.vectors
        assert v.shape == (56, 7)
        assert (np.sum(v * v, axis=1) == 3).all()
        dots = v @ v.T
        off = dots[~np.eye(56, dtype=bool)]
        assert set(np.unique(off).tolist()) == {-3, -1, 1}


def test_fano_max_family():
    rep = dc.fano_report()
    assert rep["count"] == 30
    assert rep["max_family"] == 2
    assert rep["disjoint_pairs"] > 0
    assert rep["witness"] is not None


def test_fano_cyclic_example_pair():
    # two cyclic-shift line systems sharing no line, hence no vector
    a = tuple(sorted(tuple(sorted(((0 + c) % 7, (1 + c) % 7, (3 + c) % 7))) for c in range(7)))
    b = tuple(sorted(tuple(sorted(((0 + c) % 7, (2 + c) % 7, (3 + c) % 7))) for c in range(7)))
    planes = dc.fano_planes()
    assert a in planes and b in planes
    va = dc._line_vectors(a)
    vb = dc._line_vectors(b)
    sa = {tuple(r) for r in va.tolist()}
    sb = {tuple(r) for r in vb.tolist()}
    assert not (sa & sb)
