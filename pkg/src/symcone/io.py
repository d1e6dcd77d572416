"""JSON (de)serialisation of polynomial families, matrix tuples, supports and
weight systems. Rationals travel as strings; external indices are 1-based.
"""

import json
import re
from fractions import Fraction

from .errors import PolynomialSyntaxError, SchemaError, SymconeError
from .poly import VariableSpace, format_polynomial, parse_polynomial
from .sing import MatrixTuple, SupportSet
from .torus import WeightSystem

_RATIONAL = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(value, path="$"):
    if isinstance(value, bool):
        raise SchemaError("expected a rational, got a boolean", path)
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise SchemaError(f"expected a rational string, got {type(value).__name__}", path)
    mt = _RATIONAL.match(value)
    if not mt:
        raise SchemaError(f"malformed rational {value!r}", path)
    den = int(mt.group(2)) if mt.group(2) is not None else 1
    if den == 0:
        raise SchemaError(f"zero denominator in {value!r}", path)
    return Fraction(int(mt.group(1)), den)


def format_rational(x):
    return str(Fraction(x))


def _int(doc, key, path, minimum=1):
    if key not in doc:
        raise SchemaError(f"missing field {key!r}", path)
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        raise SchemaError(f"expected an integer >= {minimum}", f"{path}.{key}")
    return v


def _list(doc, key, path):
    if key not in doc:
        raise SchemaError(f"missing field {key!r}", path)
    v = doc[key]
    if not isinstance(v, list):
        raise SchemaError("expected a list", f"{path}.{key}")
    return v


def _object(doc, path="$"):
    if not isinstance(doc, dict):
        raise SchemaError("expected a JSON object", path)
    return doc


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} (line {exc.lineno})") from None


# polynomial families

def family_to_json(space, polys, multidegrees=None):
    doc = {}
    if space.is_matrix:
        doc["n"], doc["m"] = space.n, space.m
    else:
        doc["nvars"] = space.size
    doc["polynomials"] = [format_polynomial(p) for p in polys]
    if multidegrees is not None:
        doc["multidegrees"] = [list(e) for e in multidegrees]
    return doc


def family_from_json(doc):
    """Accepts a family object, or a report whose ``result`` is one."""
    doc = _object(doc)
    path = "$"
    if "result" in doc and "polynomials" not in doc:
        doc = _object(doc["result"], "$.result")
        path = "$.result"
    if "n" in doc or "m" in doc:
        space = VariableSpace.matrices(_int(doc, "n", path), _int(doc, "m", path))
    elif "nvars" in doc:
        space = VariableSpace.generic(_int(doc, "nvars", path))
    else:
        raise SchemaError("need either n and m, or nvars", path)
    polys = []
    for idx, text in enumerate(_list(doc, "polynomials", path)):
        where = f"{path}.polynomials[{idx}]"
        if not isinstance(text, str):
            raise SchemaError("expected a polynomial string", where)
        try:
            polys.append(parse_polynomial(text, space))
        except (PolynomialSyntaxError, SymconeError) as exc:
            raise SchemaError(str(exc), where) from None
    return space, polys


# matrix tuples

def tuple_to_json(X):
    return {
        "n": X.n,
        "m": X.m,
        "matrices": [[[format_rational(x) for x in row] for row in M] for M in X.matrices],
    }


def tuple_from_json(doc):
    doc = _object(doc)
    n, m = _int(doc, "n", "$"), _int(doc, "m", "$")
    mats = _list(doc, "matrices", "$")
    if len(mats) != m:
        raise SchemaError(f"expected {m} matrices, got {len(mats)}", "$.matrices")
    out = []
    for i, M in enumerate(mats):
        p = f"$.matrices[{i}]"
        if not isinstance(M, list) or len(M) != n:
            raise SchemaError(f"expected {n} rows", p)
        rows = []
        for j, row in enumerate(M):
            if not isinstance(row, list) or len(row) != n:
                raise SchemaError(f"expected {n} entries", f"{p}[{j}]")
            rows.append(tuple(parse_rational(x, f"{p}[{j}][{k}]") for k, x in enumerate(row)))
        out.append(tuple(rows))
    return MatrixTuple(n, m, tuple(out))


# supports

def support_to_json(S):
    return {"support": [[a + 1 for a in pos] for pos in S.sorted()]}


def support_from_json(doc, n, m=None):
    """1-based triples (tuple support) or pairs (matrix support when m is None)."""
    doc = _object(doc)
    width = 2 if m is None else 3
    members = set()
    for idx, pos in enumerate(_list(doc, "support", "$")):
        p = f"$.support[{idx}]"
        if (not isinstance(pos, list) or len(pos) != width
                or any(isinstance(a, bool) or not isinstance(a, int) for a in pos)):
            raise SchemaError(f"expected a list of {width} integers", p)
        bounds = (n, n) if m is None else (m, n, n)
        if any(not 1 <= a <= b for a, b in zip(pos, bounds)):
            raise SchemaError(f"position {pos} out of range", p)
        members.add(tuple(a - 1 for a in pos))
    return SupportSet(n, frozenset(members), m)


# weight systems

def weights_to_json(ws):
    return {
        "dim": ws.dim,
        "weights": [list(w) for w in ws.weights],
        "trivial": [[format_rational(x) for x in b] for b in ws.trivial.basis],
    }


def weights_from_json(doc):
    doc = _object(doc)
    dim = _int(doc, "dim", "$")
    weights = []
    for idx, w in enumerate(_list(doc, "weights", "$")):
        p = f"$.weights[{idx}]"
        if not isinstance(w, list) or len(w) != dim:
            raise SchemaError(f"expected {dim} integers", p)
        for k, x in enumerate(w):
            if isinstance(x, bool) or not isinstance(x, int):
                raise SchemaError("weights must be integers", f"{p}[{k}]")
        weights.append(w)
    trivial = []
    for idx, t in enumerate(doc.get("trivial", [])):
        p = f"$.trivial[{idx}]"
        if not isinstance(t, list) or len(t) != dim:
            raise SchemaError(f"expected {dim} entries", p)
        trivial.append([parse_rational(x, f"{p}[{k}]") for k, x in enumerate(t)])
    return WeightSystem.build(weights, trivial, dim)
