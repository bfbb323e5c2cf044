import pytest

from h2obstruct.diagram import (checkerboard, faces, goeritz_from_json, goeritz_from_matrix,
                                goeritz_from_pd, goeritz_from_pretzel, is_alternating,
                                is_reduced, make_pd, parse_pd, pretzel_pd)
from h2obstruct.errors import (EvenDeterminant, Indefinite, InconsistentDiagram, InputError,
                               LabelError, NotAKnot, NotAlternating, NotReduced,
                               OutOfRange, PDSyntaxError)
from h2obstruct.exactmat import determinant, is_positive_definite, smith_normal_form
from h2obstruct.quadform import group_of, mq_table

from conftest import FIGURE_EIGHT_PD, TREFOIL_PD

# trefoil with its first crossing switched: a non-alternating unknot diagram
SWITCHED_TREFOIL = "X(4,2,5,1) X(3,6,4,1) X(5,2,6,3)"


def test_parse_trefoil():
    pd = parse_pd(TREFOIL_PD)
    assert pd.n == 3
    assert pd.crossings[0] == (1, 4, 2, 5)
    assert parse_pd(str(pd)) == pd


def test_parse_tolerates_whitespace():
    assert parse_pd("  X(1,4,2,5)\n X( 3, 6,4,1)\tX(5,2,6,3) ") == parse_pd(TREFOIL_PD)


@pytest.mark.parametrize("text, offset", [
    ("X(1,2,3)", 0),
    ("X(1,4,2,5) Y(3,6,4,1)", 11),
    ("X(1,4,2,5)X(3,6,4,1)", 10),
    ("", 0),
    ("X(1,4,2,5) X(3,6,4,1", 11),
])
def test_parse_syntax_errors(text, offset):
    with pytest.raises(PDSyntaxError) as info:
        parse_pd(text)
    assert info.value.offset == offset


@pytest.mark.parametrize("text", [
    "X(1,4,2,5)",
    "X(1,4,2,5) X(3,6,4,1) X(5,2,6,7)",
    "X(1,1,1,1)",
    "X(0,1,1,0)",
])
def test_parse_label_errors(text):
    with pytest.raises(LabelError):
        parse_pd(text)


@pytest.mark.parametrize("text, count", [
    (TREFOIL_PD, 5),
    (FIGURE_EIGHT_PD, 6),
    ("X(1,2,2,1)", 3),
])
def test_face_counts(text, count):
    f = faces(parse_pd(text))
    assert len(f) == count


@pytest.mark.parametrize("params", [(1, 1, 1), (3, 1, 1), (13, 4, 11), (2, 3, 5), (5, 5, 3, 3, 1)])
def test_faces_of_pretzel_diagrams(params):
    pd = pretzel_pd(*params)
    f = faces(pd)
    assert len(f) == pd.n + 2
    # every edge borders exactly two faces counted with multiplicity
    incidences = {}
    for c, quad in enumerate(pd.crossings):
        for j, label in enumerate(quad):
            incidences.setdefault(label, []).extend([f.adjacency[c][j], f.adjacency[c][j - 1]])
    assert all(len(v) == 4 for v in incidences.values())
    colors = checkerboard(f)
    for adj in f.adjacency:
        for j in range(4):
            assert colors[adj[j]] != colors[adj[(j + 1) % 4]]


def test_disconnected_diagram_rejected():
    # two disjoint kinks
    with pytest.raises(InconsistentDiagram):
        faces(make_pd([(1, 2, 2, 1), (3, 4, 4, 3)]))


def test_nonplanar_code_rejected():
    # labels glued so the rotation system has genus > 0
    with pytest.raises(InconsistentDiagram):
        faces(make_pd([(1, 2, 3, 4), (1, 2, 3, 4)]))


@pytest.mark.parametrize("text, expected", [
    (TREFOIL_PD, True),
    (FIGURE_EIGHT_PD, True),
    ("X(1,2,2,1)", True),
    (SWITCHED_TREFOIL, False),
])
def test_is_alternating(text, expected):
    assert is_alternating(parse_pd(text)) is expected


# trefoil # trefoil: edge 6 of the first copy now ends in the second copy and
# edge 12 of the second copy returns to the first
GRANNY = "X(1,4,2,5) X(3,12,4,1) X(5,2,6,3) X(7,10,8,11) X(9,6,10,7) X(11,8,12,9)"


def test_connected_sum_with_switched_crossing_is_not_alternating():
    pd = parse_pd(GRANNY)
    assert len(faces(pd)) == 8
    assert is_alternating(pd)
    assert goeritz_from_pd(pd).determinant == 9
    switched = parse_pd(GRANNY.replace("X(7,10,8,11)", "X(10,8,11,7)"))
    assert len(faces(switched)) == 8
    assert not is_alternating(switched)


@pytest.mark.parametrize("text, expected", [
    (TREFOIL_PD, True),
    ("X(1,2,2,1)", False),
])
def test_is_reduced(text, expected):
    pd = parse_pd(text)
    assert is_reduced(pd, faces(pd)) is expected


def test_pretzel_diagram_is_reduced_and_alternating():
    pd = pretzel_pd(13, 4, 11)
    assert is_alternating(pd)
    assert is_reduced(pd, faces(pd))


def test_goeritz_trefoil_pd():
    g = goeritz_from_pd(parse_pd(TREFOIL_PD))
    assert g.Q.tolist() == [[2, -1], [-1, 2]]
    assert g.determinant == 3 and not g.mirrored
    assert g.provenance[0] == "pd-code"


def test_goeritz_figure_eight_pd():
    g = goeritz_from_pd(parse_pd(FIGURE_EIGHT_PD))
    assert g.determinant == 5
    assert smith_normal_form(g.Q).diagonal == [1, 5]
    assert is_positive_definite(g.Q)


def test_goeritz_pretzel_pd_matches_closed_form():
    g = goeritz_from_pd(pretzel_pd(13, 4, 11))
    assert g.Q.tolist() == [[17, -4], [-4, 15]]
    assert g.determinant == 239


def test_goeritz_pd_rejects_bad_diagrams():
    with pytest.raises(NotAlternating):
        goeritz_from_pd(parse_pd(SWITCHED_TREFOIL))
    with pytest.raises(NotReduced):
        goeritz_from_pd(parse_pd("X(1,2,2,1)"))
    with pytest.raises(OutOfRange):
        goeritz_from_pd(parse_pd(TREFOIL_PD), f0_choice=7)


@pytest.mark.parametrize("params", [(1, 1, 1), (3, 1, 1), (13, 4, 11), (3, 5, 7), (2, 3, 5), (1, 3, 1, 3, 1)])
def test_determinant_independent_of_deleted_face(params):
    pd = pretzel_pd(*params)
    base = goeritz_from_pd(pd)
    m = base.Q.k + 1
    for f0 in range(m):
        g = goeritz_from_pd(pd, f0_choice=f0)
        assert is_positive_definite(g.Q)
        assert g.determinant == base.determinant
        assert smith_normal_form(g.Q).diagonal[-1] == smith_normal_form(base.Q).diagonal[-1]


@pytest.mark.parametrize("params", [(1, 1, 1), (3, 3, 1), (5, 1, 3)])
def test_mirror_diagram_gives_other_class(params):
    g = goeritz_from_pd(pretzel_pd(*params))
    h = goeritz_from_pd(pretzel_pd(*params, mirror=True))
    assert g.determinant == h.determinant
    assert not g.mirrored and not h.mirrored


def test_trefoil_pd_and_pretzel_agree():
    a = goeritz_from_pd(parse_pd(TREFOIL_PD))
    b = goeritz_from_pretzel(1, 1, 1)
    assert smith_normal_form(a.Q).diagonal == smith_normal_form(b.Q).diagonal
    ta = mq_table(a.Q, group_of(a.Q))
    tb = mq_table(b.Q, group_of(b.Q))
    assert sorted(ta.values) == sorted(tb.values)


@pytest.mark.parametrize("pqr, Q", [
    ((13, 4, 11), [[17, -4], [-4, 15]]),
    ((1, 1, 1), [[2, -1], [-1, 2]]),
    ((2, 3, 5), [[5, -3], [-3, 8]]),
])
def test_goeritz_from_pretzel(pqr, Q):
    g = goeritz_from_pretzel(*pqr)
    assert g.Q.tolist() == Q and not g.mirrored
    assert g.determinant == determinant(Q)


@pytest.mark.parametrize("pqr", [(3, 2, 2), (2, 2, 2), (2, 4, 1)])
def test_pretzel_links_rejected(pqr):
    with pytest.raises(NotAKnot):
        goeritz_from_pretzel(*pqr)


def test_pretzel_nonpositive_rejected():
    with pytest.raises(OutOfRange):
        goeritz_from_pretzel(0, 1, 1)


def test_pretzel_pd_link_rejected():
    with pytest.raises(NotAKnot):
        pretzel_pd(2, 2, 1)


def test_goeritz_from_matrix():
    g = goeritz_from_matrix([[17, -4], [-4, 15]])
    assert g.Q.tolist() == [[17, -4], [-4, 15]] and not g.mirrored
    g = goeritz_from_matrix([[-2, 1], [1, -2]])
    assert g.Q.tolist() == [[2, -1], [-1, 2]] and g.mirrored
    with pytest.raises(Indefinite):
        goeritz_from_matrix([[1, 2], [2, 1]])
    with pytest.raises(EvenDeterminant):
        goeritz_from_matrix([[2, 0], [0, 1]])
    u = goeritz_from_matrix([])
    assert u.determinant == 1 and u.provenance == ("unknot",)


def test_goeritz_from_json():
    assert goeritz_from_json({"pretzel": [13, 4, 11]}).determinant == 239
    assert goeritz_from_json({"pd": TREFOIL_PD, "f0": 1}).determinant == 3
    assert goeritz_from_json({"matrix": [[2, -1], [-1, 3]]}).determinant == 5
    assert goeritz_from_json({"unknot": True}).Q.k == 0
    for bad in ({}, {"pd": TREFOIL_PD, "matrix": [[1]]}, {"pretzel": [1, 1]},
                {"matrix": [[1, 2], [3, 4]]}, {"unknot": False}, {"matrix": [[1]], "f0": 0},
                {"pretzel": [1, 1, 1], "color": 1}, []):
        with pytest.raises(InputError):
            goeritz_from_json(bad)
