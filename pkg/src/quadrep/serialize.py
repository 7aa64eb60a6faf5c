"""Canonical JSON documents for maps.

A map document stores explicit components term by term with rational
coefficients as canonical strings (never floats), so exactness survives the
wire.  Serialization is canonical: terms in graded-lex descending order,
sorted object keys, fixed separators, UTF-8, newline-terminated.  Exporting
an imported document reproduces it byte for byte.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .exact import GaussianRational, Polynomial
from .maps import InfeasibleError, PolyMap

FORMAT_VERSION = 1


class DocumentError(Exception):
    """The document is malformed or violates the format contract."""


def _term_entry(mono, coeff: GaussianRational) -> dict:
    return {
        "exponents": list(mono),
        "re": str(coeff.re),
        "im": str(coeff.im),
    }


def map_to_document(pmap: PolyMap) -> dict:
    """Explicit-component document for a map.

    Maps whose components were never materialized (the deep torsion-chain
    suspensions) cannot be exported: their explicit term lists would need
    billions of entries.
    """
    if pmap.components is None:
        raise InfeasibleError(
            f"map {pmap.label!r} has no materialized components; "
            "its explicit term list is beyond the storage budget"
        )
    if pmap.document_certificates is not None:
        certificates = pmap.document_certificates
    elif pmap.certificate is not None:
        certificates = [pmap.certificate.summary()]
    else:
        certificates = []
    return {
        "format_version": FORMAT_VERSION,
        "domain_dim": pmap.m,
        "codomain_dim": pmap.r,
        "order": pmap.order,
        "label": pmap.label,
        "components": [
            [_term_entry(mono, coeff) for mono, coeff in comp.sorted_terms()]
            for comp in pmap.components
        ],
        "certificates": certificates,
    }


def document_to_map(doc: dict) -> PolyMap:
    try:
        version = doc["format_version"]
        if version != FORMAT_VERSION:
            raise DocumentError(f"unsupported format_version {version}")
        m = int(doc["domain_dim"])
        r = int(doc["codomain_dim"])
        order = doc.get("order")
        if order is not None:
            order = int(order)
        label = str(doc.get("label", ""))
        raw_components = doc["components"]
        if len(raw_components) != r:
            raise DocumentError("component count does not match codomain_dim")
        components = []
        for raw in raw_components:
            terms = {}
            for entry in raw:
                mono = tuple(int(e) for e in entry["exponents"])
                if len(mono) != m or any(e < 0 for e in mono):
                    raise DocumentError(f"bad exponent vector {entry['exponents']}")
                coeff = GaussianRational(Fraction(entry["re"]), Fraction(entry["im"]))
                if coeff.is_zero():
                    raise DocumentError("stored coefficients must be nonzero")
                if mono in terms:
                    raise DocumentError(f"duplicate monomial {mono}")
                terms[mono] = coeff
            components.append(Polynomial(m, terms))
        pmap = PolyMap(m=m, r=r, components=components, label=label, order=order)
        certs = doc.get("certificates", [])
        if not isinstance(certs, list):
            raise DocumentError("certificates must be a list")
        pmap.document_certificates = certs
        return pmap
    except DocumentError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"malformed map document: {exc}") from exc


def dumps_canonical(obj) -> str:
    """Canonical JSON text: sorted keys, compact separators, one newline."""
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":")) + "\n"


def write_document(pmap: PolyMap, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(map_to_document(pmap)))


def read_document(path: str) -> PolyMap:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DocumentError(f"cannot read map document {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise DocumentError("map document must be a JSON object")
    return document_to_map(doc)
