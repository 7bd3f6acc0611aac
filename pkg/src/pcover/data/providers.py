"""Provider protocol for loading input documents."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Protocol

from ..utils.errors import InstanceFormatError

logger = logging.getLogger(__name__)


class DocumentProvider(Protocol):
    """Abstraction for sources of JSON input documents."""

    def load(self, name: str) -> dict[str, Any]:
        """Return the parsed document."""
        raise NotImplementedError


class JsonFileProvider(DocumentProvider):
    """Reads documents from JSON files; relative names resolve against root."""

    def __init__(self, root: str | Path | None = None) -> None:
        self.root = Path(root) if root is not None else None

    def _path(self, name: str) -> Path:
        path = Path(name)
        return self.root / path if self.root is not None and not path.is_absolute() else path

    def load(self, name: str) -> dict[str, Any]:
        path = self._path(name)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as err:
            raise InstanceFormatError(f"cannot read {path}: {err.strerror}", str(path)) from err
        try:
            document = json.loads(text)
        except json.JSONDecodeError as err:
            raise InstanceFormatError(err.msg, f"{path}:{err.lineno}:{err.colno}") from err
        if not isinstance(document, dict):
            raise InstanceFormatError("top-level JSON value must be an object", f"{path}:$")
        logger.info("loaded %s", path)
        return document


class MemoryProvider(DocumentProvider):
    """Serves documents held in memory, e.g. the output of a generator."""

    def __init__(self, documents: dict[str, dict[str, Any]]) -> None:
        self.documents = documents

    def load(self, name: str) -> dict[str, Any]:
        try:
            return self.documents[name]
        except KeyError as err:
            raise InstanceFormatError(f"unknown document {name!r}", name) from err
