"""Normalize raw JSON documents into domain objects."""

from __future__ import annotations

from collections.abc import Mapping
from fractions import Fraction
from typing import Any

from ..empirical.instance import FiniteEmpiricalInstance
from ..family import SubsetBits, WeightedFamily
from ..multiset.family import MultisetFamily, MultisetMember
from ..multiset.law import MultisetDistribution
from ..multiset.multiset import Multiset
from ..selector.expectations import LambdaCollection
from ..utils.errors import InstanceFormatError, PCoverError
from ..utils.rationals import Number, to_fraction


def _require(doc: Mapping[str, Any], key: str, path: str) -> Any:
    if not isinstance(doc, Mapping):
        raise InstanceFormatError("expected an object", path)
    if key not in doc:
        raise InstanceFormatError(f"missing field {key!r}", path)
    return doc[key]


def _int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceFormatError(f"expected an integer, got {value!r}", path)
    return value


def _rational(value: Any, path: str) -> Fraction:
    try:
        return to_fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as err:
        raise InstanceFormatError(f"expected a rational, got {value!r}", path) from err


def _list(value: Any, path: str) -> list[Any]:
    if not isinstance(value, list):
        raise InstanceFormatError(f"expected a list, got {type(value).__name__}", path)
    return value


def _keyed(value: Any, path: str) -> dict[int, Any]:
    """{"elem": value} objects, or lists read as position -> value."""
    if isinstance(value, list):
        return dict(enumerate(value))
    if not isinstance(value, Mapping):
        raise InstanceFormatError("expected an object keyed by element", path)
    out: dict[int, Any] = {}
    for key, item in value.items():
        try:
            out[int(key)] = item
        except ValueError as err:
            raise InstanceFormatError(f"element key {key!r} is not an integer", f"{path}.{key}") from err
    return out


def _domain(path: str, build):
    """Domain validation errors surface as format errors at the object's path."""
    try:
        return build()
    except InstanceFormatError:
        raise
    except PCoverError as err:
        raise InstanceFormatError(str(err), path) from err


# older documents spell the keys "members" and "elements"
FAMILY_KEYS = ("sets", "members")
ELEMENT_KEYS = ("elems", "elements")


def _first_key(doc: Mapping[str, Any], keys: tuple[str, ...], path: str) -> str:
    if not isinstance(doc, Mapping):
        raise InstanceFormatError("expected an object", path)
    for key in keys:
        if key in doc:
            return key
    raise InstanceFormatError(f"missing field {keys[0]!r}", path)


def family_from_document(doc: Mapping[str, Any], p: Number | None = None) -> WeightedFamily:
    """{"n": int, "p"?: rational, "sets": [[elems] | {"elems": [...], "weights"?: {"elem": value}}]}.

    Without "weights" every element of the set weighs 1.
    """
    n = _int(_require(doc, "n", "$"), "$.n")
    raw_p = p if p is not None else doc.get("p")
    if raw_p is None:
        raise InstanceFormatError("no p given in the document or on the command line", "$.p")
    prob = _rational(raw_p, "$.p")
    key = _first_key(doc, FAMILY_KEYS, "$")
    sets: list[list[int]] = []
    weights: list[dict[int, Fraction]] = []
    for idx, raw in enumerate(_list(doc[key], f"$.{key}")):
        path = f"$.{key}[{idx}]"
        if isinstance(raw, Mapping):
            elem_key = _first_key(raw, ELEMENT_KEYS, path)
            elems = [_int(e, f"{path}.{elem_key}") for e in _list(raw[elem_key], f"{path}.{elem_key}")]
            given = raw.get("weights")
            wmap = (
                {i: Fraction(1) for i in elems}
                if given is None
                else {i: _rational(v, f"{path}.weights.{i}") for i, v in _keyed(given, f"{path}.weights").items()}
            )
        else:
            elems = [_int(e, path) for e in _list(raw, path)]
            wmap = {i: Fraction(1) for i in elems}
        sets.append(elems)
        weights.append(wmap)
    return _domain(f"$.{key}", lambda: WeightedFamily.from_sets(n, sets, prob, weights))


def family_to_document(F: WeightedFamily) -> dict[str, Any]:
    return {
        "n": F.ground.n,
        "p": str(F.p),
        "sets": [
            {
                "elems": list(m.subset.elements()),
                "weights": {str(i): str(w) for i, w in sorted(m.weights.items())},
            }
            for m in F.members
        ],
    }


def subset_from_document(value: Any, n: int, path: str = "$.W") -> SubsetBits:
    elems = {_int(e, path) for e in _list(value, path)}
    outside = sorted(e for e in elems if not 0 <= e < n)
    if outside:
        raise InstanceFormatError(f"elements {outside} outside 0..{n - 1}", path)
    return SubsetBits(sum(1 << i for i in elems), n)


def lambda_from_document(doc: Mapping[str, Any]) -> LambdaCollection:
    """{"vectors": [[rational, ...], ...]}."""
    rows = _list(_require(doc, "vectors", "$"), "$.vectors")
    vectors = [
        [_rational(v, f"$.vectors[{k}][{i}]") for i, v in enumerate(_list(row, f"$.vectors[{k}]"))]
        for k, row in enumerate(rows)
    ]
    return _domain("$.vectors", lambda: LambdaCollection.of(vectors))


def lambda_to_document(lam: LambdaCollection) -> dict[str, Any]:
    return {"n": lam.n, "vectors": [[str(v) for v in vec] for vec in lam.vectors]}


def multiset_from_document(value: Any, path: str) -> Multiset:
    counts = {x: _int(c, f"{path}.{x}") for x, c in _keyed(value, path).items()}
    return _domain(path, lambda: Multiset.of(counts))


def multiset_family_from_document(doc: Mapping[str, Any]) -> MultisetFamily:
    """{"k": int, "members": [{"counts": {"elem": count}, "weights"?: {...}} | {"elem": count}]}."""
    k = _int(_require(doc, "k", "$"), "$.k")
    members = []
    for idx, raw in enumerate(_list(_require(doc, "members", "$"), "$.members")):
        path = f"$.members[{idx}]"
        if isinstance(raw, Mapping) and "counts" in raw:
            S = multiset_from_document(raw["counts"], f"{path}.counts")
            given = raw.get("weights")
            weights = (
                {x: Fraction(1) for x in S.support()}
                if given is None
                else {x: _rational(v, f"{path}.weights.{x}") for x, v in _keyed(given, f"{path}.weights").items()}
            )
        else:
            S = multiset_from_document(raw, path)
            weights = {x: Fraction(1) for x in S.support()}
        members.append(_domain(path, lambda S=S, weights=weights: MultisetMember(S, weights)))
    return _domain("$.members", lambda: MultisetFamily(k, tuple(members)))


def multiset_family_to_document(F: MultisetFamily, dist: MultisetDistribution | None = None) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "k": F.k,
        "members": [
            {
                "counts": {str(x): c for x, c in m.multiset.items},
                "weights": {str(x): str(w) for x, w in sorted(m.weights.items())},
            }
            for m in F.members
        ],
    }
    if dist is not None:
        doc["distribution"] = {"mu": [str(m) for m in dist.mu], "N": dist.N, "K": dist.K}
    return doc


def distribution_from_document(doc: Mapping[str, Any], N: int | None = None, K: int | None = None) -> MultisetDistribution:
    """The "distribution" block {"mu": [...] | {...}, "N": int, "K"?: int}; N and K arguments override it."""
    block = _require(doc, "distribution", "$")
    raw_mu = _keyed(_require(block, "mu", "$.distribution"), "$.distribution.mu")
    size = max(raw_mu, default=-1) + 1
    mu = [_rational(raw_mu.get(x, 0), f"$.distribution.mu.{x}") for x in range(size)]
    n_samples = N if N is not None else _int(_require(block, "N", "$.distribution"), "$.distribution.N")
    mult = K if K is not None else _int(block.get("K", 1), "$.distribution.K")
    return _domain("$.distribution", lambda: MultisetDistribution(tuple(mu), n_samples, mult))


def instance_from_document(doc: Mapping[str, Any], N: int | None = None) -> FiniteEmpiricalInstance:
    """{"points": [...], "nu": [...], "functions": [[...], ...], "N": int}."""
    points = _list(_require(doc, "points", "$"), "$.points")
    nu = [_rational(v, f"$.nu[{i}]") for i, v in enumerate(_list(_require(doc, "nu", "$"), "$.nu"))]
    functions = [
        [_rational(v, f"$.functions[{k}][{i}]") for i, v in enumerate(_list(row, f"$.functions[{k}]"))]
        for k, row in enumerate(_list(_require(doc, "functions", "$"), "$.functions"))
    ]
    n_samples = N if N is not None else _int(_require(doc, "N", "$"), "$.N")
    return _domain("$", lambda: FiniteEmpiricalInstance.of(points, nu, functions, n_samples))


def instance_to_document(instance: FiniteEmpiricalInstance) -> dict[str, Any]:
    return instance.to_dict()
