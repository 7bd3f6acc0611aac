"""Data access layer."""

from .generators import GENERATOR_KINDS, InstanceGenerator
from .normalization import (
    distribution_from_document,
    family_from_document,
    family_to_document,
    instance_from_document,
    lambda_from_document,
    multiset_family_from_document,
    multiset_family_to_document,
    multiset_from_document,
    subset_from_document,
)
from .providers import DocumentProvider, JsonFileProvider, MemoryProvider

__all__ = [
    "GENERATOR_KINDS",
    "DocumentProvider",
    "InstanceGenerator",
    "JsonFileProvider",
    "MemoryProvider",
    "distribution_from_document",
    "family_from_document",
    "family_to_document",
    "instance_from_document",
    "lambda_from_document",
    "multiset_family_from_document",
    "multiset_family_to_document",
    "multiset_from_document",
    "subset_from_document",
]
