"""
Line-delimited JSON helpers.

Readers are fail-fast: the first malformed line raises ParseError with its
1-based line number. Writers go to a temp file in the target directory and
are renamed into place on success.
"""

import json
import os
import tempfile
from collections.abc import Iterator
from pathlib import Path
from typing import Any, TypeVar

from pydantic import BaseModel, ValidationError

from core.exceptions import DataError, ParseError

ModelT = TypeVar("ModelT", bound=BaseModel)


def read_jsonl(path: str | Path) -> Iterator[tuple[int, dict[str, Any]]]:
    """Yield (line_number, object) for every non-blank line."""
    try:
        handle = open(path, encoding="utf-8")
    except OSError as e:
        raise DataError(f"cannot read {path}: {e}") from e

    with handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise ParseError(line_number, f"invalid JSON: {e.msg}") from e
            if not isinstance(obj, dict):
                raise ParseError(line_number, "expected a JSON object")
            yield line_number, obj


def read_models(path: str | Path, model: type[ModelT]) -> Iterator[tuple[int, ModelT]]:
    for line_number, obj in read_jsonl(path):
        try:
            yield line_number, model.model_validate(obj)
        except ValidationError as e:
            first = e.errors()[0]
            where = ".".join(str(p) for p in first["loc"]) or "record"
            raise ParseError(line_number, f"{where}: {first['msg']}") from e


class AtomicWriter:
    """Text file written to a temp sibling and renamed on clean exit."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._handle = None
        self._tmp_name: str | None = None

    def __enter__(self) -> "AtomicWriter":
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, self._tmp_name = tempfile.mkstemp(
            dir=self.path.parent, prefix=f".{self.path.name}.", suffix=".tmp"
        )
        self._handle = os.fdopen(fd, "w", encoding="utf-8")
        return self

    def write(self, text: str) -> None:
        assert self._handle is not None
        self._handle.write(text)

    def write_record(self, obj: Any) -> None:
        if isinstance(obj, BaseModel):
            line = obj.model_dump_json()
        else:
            line = json.dumps(obj, ensure_ascii=False)
        self.write(line + "\n")

    def __exit__(self, exc_type, exc, tb) -> None:
        assert self._handle is not None and self._tmp_name is not None
        self._handle.close()
        if exc_type is None:
            os.replace(self._tmp_name, self.path)
        else:
            os.unlink(self._tmp_name)


def write_json(path: str | Path, obj: Any) -> None:
    with AtomicWriter(path) as writer:
        if isinstance(obj, BaseModel):
            writer.write(obj.model_dump_json(indent=2))
        else:
            writer.write(json.dumps(obj, indent=2, ensure_ascii=False))
        writer.write("\n")
