import json
from fractions import Fraction

import pytest

from pcover.data import (
    GENERATOR_KINDS,
    InstanceGenerator,
    JsonFileProvider,
    MemoryProvider,
    distribution_from_document,
    family_from_document,
    family_to_document,
    instance_from_document,
    lambda_from_document,
    multiset_family_from_document,
    subset_from_document,
)
from pcover.data.generators import anchored_weights
from pcover.utils.errors import InstanceFormatError, ParameterError

FAMILY = {"n": 3, "p": "1/4", "sets": [[0, 1], {"elems": [2], "weights": {"2": "1/2"}}]}


def test_family_document():
    F = family_from_document(FAMILY)
    assert F.p == Fraction(1, 4)
    assert [m.subset.mask for m in F.members] == [0b011, 0b100]
    assert F.members[0].weight(1) == 1
    assert F.members[1].weight(2) == Fraction(1, 2)
    assert family_from_document(FAMILY, p="1/2").p == Fraction(1, 2)


def test_family_document_writes_sets_and_elems():
    doc = {"n": 3, "p": "1/8", "sets": [{"elems": [0], "weights": {"0": 1}}, {"elems": [1, 2], "weights": {}}]}
    F = family_from_document(doc)
    assert F.members[1].total() == 0
    written = family_to_document(F)
    assert written == {
        "n": 3,
        "p": "1/8",
        "sets": [{"elems": [0], "weights": {"0": "1"}}, {"elems": [1, 2], "weights": {}}],
    }
    assert family_from_document(json.loads(json.dumps(written))) == F


def test_family_document_accepts_members_and_elements():
    legacy = {"n": 3, "p": "1/4", "members": [[0, 1], {"elements": [2], "weights": {"2": "1/2"}}]}
    assert family_from_document(legacy) == family_from_document(FAMILY)


@pytest.mark.parametrize(
    "doc, location",
    [
        ({"n": 3, "p": "1/4"}, "$"),
        ({"n": 3, "sets": []}, "$.p"),
        ({"n": "3", "p": "1/4", "sets": []}, "$.n"),
        ({"n": 3, "p": "1/4", "sets": [[5]]}, "$.sets"),
        ({"n": 3, "p": "1/4", "sets": [{"weights": {}}]}, "$.sets[0]"),
        ({"n": 3, "p": "1/4", "sets": [{"elems": [0], "weights": {"0": "x"}}]}, "$.sets[0].weights.0"),
        ({"n": 3, "p": "1/4", "members": [{"elements": [0], "weights": {"0": "x"}}]}, "$.members[0].weights.0"),
    ],
)
def test_family_errors_carry_locations(doc, location):
    with pytest.raises(InstanceFormatError) as info:
        family_from_document(doc)
    assert info.value.location == location


def test_subset_and_lambda_documents():
    assert subset_from_document([0, 2], 3).mask == 0b101
    with pytest.raises(InstanceFormatError):
        subset_from_document([3], 3)
    lam = lambda_from_document({"vectors": [["1/2", 1], [0, 2]]})
    assert lam.n == 2
    with pytest.raises(InstanceFormatError) as info:
        lambda_from_document({"vectors": [[1], [1, 2]]})
    assert info.value.location == "$.vectors"


def test_multiset_documents():
    doc = {
        "k": 2,
        "members": [{"0": 2}, {"counts": {"1": 1}, "weights": {"1": "1/4"}}],
        "distribution": {"mu": ["1/3", "2/3"], "N": 3},
    }
    F = multiset_family_from_document(doc)
    assert F.members[0].multiset.as_dict() == {0: 2}
    assert F.members[1].weight(1) == Fraction(1, 4)
    dist = distribution_from_document(doc)
    assert (dist.N, dist.K) == (3, 1)
    assert distribution_from_document(doc, N=5, K=2).M == 10
    with pytest.raises(InstanceFormatError):
        distribution_from_document({"distribution": {"mu": ["1/3"], "N": 1}})


def test_instance_document():
    doc = {"points": ["a", "b"], "nu": ["1/2", "1/2"], "functions": [[0, 1]], "N": 2}
    assert instance_from_document(doc).N == 2
    assert instance_from_document(doc, N=3).N == 3
    with pytest.raises(InstanceFormatError) as info:
        instance_from_document(doc | {"nu": [0, 1]})
    assert info.value.location == "$"


def test_json_file_provider(tmp_path):
    (tmp_path / "family.json").write_text(json.dumps(FAMILY), encoding="utf-8")
    (tmp_path / "broken.json").write_text("{", encoding="utf-8")
    (tmp_path / "list.json").write_text("[]", encoding="utf-8")
    provider = JsonFileProvider(tmp_path)
    assert provider.load("family.json") == FAMILY
    with pytest.raises(InstanceFormatError, match="broken.json:1"):
        provider.load("broken.json")
    with pytest.raises(InstanceFormatError, match="object"):
        provider.load("list.json")
    with pytest.raises(InstanceFormatError, match="cannot read"):
        provider.load("missing.json")


def test_memory_provider():
    provider = MemoryProvider({"f": FAMILY})
    assert provider.load("f") is FAMILY
    with pytest.raises(InstanceFormatError):
        provider.load("g")


@pytest.mark.parametrize("kind", GENERATOR_KINDS)
def test_generators_are_deterministic(kind):
    first = InstanceGenerator(kind, seed=5).generate()
    assert first == InstanceGenerator(kind, seed=5).generate()
    assert first["kind"] == kind


def test_generated_documents_load():
    family = family_from_document(InstanceGenerator("random-family", n=5, members=4, seed=1).generate())
    assert len(family) == 4
    assert all(m.subset for m in family.members)
    singletons = family_from_document(InstanceGenerator("disjoint-singletons", n=3).generate())
    assert [m.subset.mask for m in singletons.members] == [1, 2, 4]
    doc = InstanceGenerator("random-multiset-family", n=3, seed=2).generate()
    assert len(multiset_family_from_document(doc)) == 3
    assert distribution_from_document(doc).mu == (Fraction(1, 3),) * 3
    instance = instance_from_document(InstanceGenerator("random-empirical", n=3, M=2, seed=4).generate())
    assert instance.M == 2
    assert sum(instance.nu) == 1


def test_unknown_generator_kind():
    with pytest.raises(ParameterError):
        InstanceGenerator("nope").generate()


def test_random_family_members_weigh_at_least_one():
    assert anchored_weights([3, 5], [Fraction(1, 100), Fraction(1, 4)]) == {3: Fraction(3, 4), 5: Fraction(1, 4)}
    assert anchored_weights([0, 1], [Fraction(1), Fraction(1, 2)]) == {0: 1, 1: Fraction(1, 2)}
    for seed in range(4):
        F = family_from_document(InstanceGenerator("random-family", n=150, members=3, seed=seed).generate())
        assert all(m.total() >= 1 for m in F.members)
        assert all(len(m.subset) <= 20 for m in F.members)
