import copy

import pytest
from hypothesis import given, strategies as st

from locperf import certificate as cert
from locperf.abelian import FgAbelianGroup, Subgroup, membership
from locperf.cli import run

keys = st.text("abcdefghij_-0123456789", min_size=1, max_size=6)
scalars = st.one_of(st.none(), st.booleans(), st.integers(-10**30, 10**30), st.text(max_size=12))
leaves = st.one_of(scalars, st.lists(st.one_of(scalars, st.lists(st.integers(), max_size=3)), max_size=4))
trees = st.recursive(leaves, lambda inner: st.dictionaries(keys, inner, min_size=1, max_size=4),
                     max_leaves=20)


@given(st.dictionaries(keys, trees, max_size=5))
def test_round_trip(body):
    doc = {"schema_version": 1, **body}
    text = cert.dump(doc)
    assert cert.parse(text) == doc
    assert cert.dump(cert.parse(text)) == text


def test_dump_rejects():
    with pytest.raises(cert.DocumentError):
        cert.dump({"a": 1})
    with pytest.raises(cert.DocumentError):
        cert.dump({"schema_version": 1, "a": {}})
    with pytest.raises(cert.DocumentError):
        cert.dump({"schema_version": 1, "a.b": 1})
    with pytest.raises(cert.DocumentError):
        cert.dump({"schema_version": 1, "a": [{"x": 1}]})
    with pytest.raises(cert.DocumentError):
        cert.dump({"schema_version": 1, "a": 1.5})


@pytest.mark.parametrize("text", [
    "schema_version = 2\n",
    "a = 1\n",
    "schema_version = 1\nbroken line\n",
    "schema_version = 1\na = 1\na = 2\n",
    "schema_version = 1\na = 1\na.b = 2\n",
    "schema_version = 1\na = {bad\n",
])
def test_parse_rejects(text):
    with pytest.raises(cert.DocumentError):
        cert.parse(text)


def test_exit_codes():
    assert cert.exit_code({"verdict": "computed"}) == 0
    assert cert.exit_code({"verdict": "hypotheses_failed"}) == 1
    assert cert.exit_code({"verdict": "counterexample_verified", "paper_claim_match": False}) == 2


def test_det():
    assert cert.det([[2, 1], [7, 4]]) == 1
    assert cert.det([[0, 1], [1, 0]]) == -1
    assert cert.det([[1, 2], [2, 4]]) == 0


# tamper detection

def _membership_doc(member: bool):
    g = FgAbelianGroup(1, (2,))
    s = Subgroup(g, (g.element([2, 0]),))
    x = g.element([4, 0]) if member else g.element([2, 1])
    return {"schema_version": 1, "m": cert.membership_record(membership(s, x))}


def test_membership_records_check():
    for member in (True, False):
        assert cert.check_document(_membership_doc(member)) == []


def test_tampered_witness():
    doc = _membership_doc(True)
    doc["m"]["witness"] = [3]
    assert cert.check_document(doc)


def test_tampered_residue_and_projection():
    doc = _membership_doc(False)
    bad = copy.deepcopy(doc)
    bad["m"]["residue"] = [0]
    assert cert.check_document(bad)
    bad = copy.deepcopy(doc)
    bad["m"]["projection"] = [[0, 0]]
    assert cert.check_document(bad)
    bad = copy.deepcopy(doc)
    bad["m"]["generators"] = [[0, 1]]
    assert cert.check_document(bad)


def test_tampered_classgroup():
    doc, _, _ = run(["classgroup", "--d", "-21"])
    assert cert.check_document(doc) == []
    bad = copy.deepcopy(doc)
    bad["result"]["forms"][1] = [2, 2, 12]
    assert cert.check_document(bad)
    bad = copy.deepcopy(doc)
    bad["result"]["table"]["f1"]["element"] = [0, 0]
    assert cert.check_document(bad)


def test_tampered_hom_and_group():
    doc, _, _ = run(["verify-glued", "--pic", "z", "--p", "1"])
    assert cert.check_document(doc) == []
    bad = copy.deepcopy(doc)
    bad["picard"]["pic_u"]["torsion"] = [4, 2]
    assert cert.check_document(bad)
    g = FgAbelianGroup(0, (2,))
    hom = {"kind": "hom", "source": cert.group_record(g), "target": cert.group_record(FgAbelianGroup(1)),
           "matrix": [[1]]}
    assert cert.check_document({"schema_version": 1, "h": hom})


def test_snf_record_tamper(tmp_path):
    f = tmp_path / "m.txt"
    f.write_text("2 2\n2 4\n6 8\n")
    doc, code, _ = run(["snf", str(f)])
    assert code == 0 and cert.check_document(doc) == []
    bad = copy.deepcopy(doc)
    bad["result"]["u"] = [[2, 0], [0, 1]]
    assert cert.check_document(bad)
    bad = copy.deepcopy(doc)
    bad["result"]["d"] = [[4, 0], [0, 2]]
    assert cert.check_document(bad)
