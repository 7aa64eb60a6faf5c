"""Map documents: canonical JSON, exact round trips, validation."""

import json
from fractions import Fraction

import pytest

from quadrep.exact import GaussianRational, Polynomial
from quadrep.maps import InfeasibleError, PolyMap, catalog, hopf_pair
from quadrep.serialize import (
    DocumentError,
    document_to_map,
    dumps_canonical,
    map_to_document,
    read_document,
    write_document,
)


def test_round_trip_hopf():
    f, _ = hopf_pair()
    doc = map_to_document(f)
    back = document_to_map(doc)
    assert back.components == f.components
    assert back.m == f.m and back.r == f.r and back.order == f.order
    assert back.label == f.label


def test_export_import_export_byte_identical(tmp_path):
    pm = catalog("pi_np1:3")
    path1 = tmp_path / "a.json"
    path2 = tmp_path / "b.json"
    write_document(pm, str(path1))
    write_document(read_document(str(path1)), str(path2))
    assert path1.read_bytes() == path2.read_bytes()
    assert path1.read_bytes().endswith(b"\n")


def test_terms_are_canonically_ordered():
    pm = catalog("pi_n:2,2")
    doc = map_to_document(pm)
    for comp in doc["components"]:
        keys = [(sum(t["exponents"]), tuple(t["exponents"])) for t in comp]
        assert keys == sorted(keys, reverse=True)


def test_rational_strings_never_floats():
    f, _ = hopf_pair()
    text = dumps_canonical(map_to_document(f))
    parsed = json.loads(text)
    for comp in parsed["components"]:
        for term in comp:
            assert isinstance(term["re"], str)
            assert isinstance(term["im"], str)
            Fraction(term["re"])  # parseable
            Fraction(term["im"])


def test_gaussian_coefficients_survive():
    p = Polynomial(2, {(1, 0): GaussianRational(Fraction(1, 3), Fraction(-5, 7))})
    pm = PolyMap.explicit([p, Polynomial.zero(2)], "custom", order=None)
    back = document_to_map(map_to_document(pm))
    assert back.components == pm.components


def test_structural_map_refuses_export():
    f2 = catalog("pi_np3:2")
    with pytest.raises(InfeasibleError):
        map_to_document(f2)


def test_certificates_preserved_through_round_trip():
    pm = catalog("pi_np1:3")
    doc = map_to_document(pm)
    assert doc["certificates"][0]["verdict"] == "pass"
    back = document_to_map(doc)
    assert map_to_document(back)["certificates"] == doc["certificates"]


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.update(format_version=99),
        lambda d: d.update(components=d["components"][:-1]),
        lambda d: d["components"][0][0].update(re="not-a-rational"),
        lambda d: d["components"][0][0].update(exponents=[1]),
        lambda d: d["components"][0][0].update(re="0", im="0"),
        lambda d: d["components"][0].append(dict(d["components"][0][0])),
        lambda d: d.pop("components"),
    ],
)
def test_malformed_documents_rejected(mutate):
    f, _ = hopf_pair()
    doc = json.loads(dumps_canonical(map_to_document(f)))
    mutate(doc)
    with pytest.raises(DocumentError):
        document_to_map(doc)


def test_read_document_missing_file():
    with pytest.raises(DocumentError):
        read_document("/nonexistent/path.json")
