"""
MOTOR File Codecs

Readers and writers for the corpus file formats:

- Records/queries: JSON Lines, one object per line.
- Embeddings: a little-endian binary container::

      b"MOTOREMB" | uint32 entry count | entries...
      entry = uint16 id length | id (UTF-8) | uint16 role
              [| uint16 finding index, roles 2 and 3 only] | uint32 dim | dim x float32

  A JSON object ``{id: {role name: values}}`` is accepted as a fallback for small
  hand-written fixtures; finding roles map to lists of vectors.
"""
import json
import struct
from pathlib import Path
from typing import Any, Dict, Iterator, List, Mapping, Sequence, Tuple, Union

import numpy as np

from ..errors import ParseError
from .models import (
    EMBEDDING_MAGIC,
    FINDING_ROLES,
    ROLE_BY_NAME,
    ROLE_NAMES,
    EmbeddingKey,
    EmbeddingTable,
)

PathLike = Union[str, Path]

_U16 = struct.Struct("<H")
_U32 = struct.Struct("<I")


def read_embeddings(path: PathLike) -> EmbeddingTable:
    """
    Read an embeddings file, binary container or JSON fallback.

    Raises:
        ParseError: If the file is neither format or is malformed
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except FileNotFoundError:
        raise ParseError(str(path), None, "embeddings file not found") from None
    if data[: len(EMBEDDING_MAGIC)] == EMBEDDING_MAGIC:
        return _decode_binary(data, str(path))
    try:
        payload = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ParseError(str(path), None, f"not a MOTOREMB container and not JSON: {e}") from None
    return _decode_json(payload, str(path))


def _decode_binary(data: bytes, path: str) -> EmbeddingTable:
    offset = len(EMBEDDING_MAGIC)

    def take(fmt: struct.Struct) -> int:
        nonlocal offset
        if offset + fmt.size > len(data):
            raise ParseError(path, None, f"truncated container at byte {offset}")
        (value,) = fmt.unpack_from(data, offset)
        offset += fmt.size
        return int(value)

    count = take(_U32)
    table: EmbeddingTable = {}
    for entry in range(count):
        id_length = take(_U16)
        if offset + id_length > len(data):
            raise ParseError(path, None, f"truncated id in entry {entry}")
        try:
            record_id = data[offset:offset + id_length].decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(path, None, f"entry {entry}: invalid UTF-8 id: {e}") from None
        offset += id_length
        role = take(_U16)
        if role not in ROLE_NAMES:
            raise ParseError(path, None, f"entry {entry}: unknown role tag {role}")
        index = take(_U16) if role in FINDING_ROLES else None
        dim = take(_U32)
        if dim == 0:
            raise ParseError(path, None, f"entry {entry}: zero-dimensional embedding")
        end = offset + 4 * dim
        if end > len(data):
            raise ParseError(path, None, f"entry {entry}: truncated values")
        values = np.frombuffer(data, dtype="<f4", count=dim, offset=offset).astype(np.float32)
        offset = end
        key: EmbeddingKey = (record_id, role, index)
        if key in table:
            raise ParseError(path, None, f"entry {entry}: duplicate embedding {_describe(key)}")
        table[key] = values
    if offset != len(data):
        raise ParseError(path, None, f"{len(data) - offset} trailing bytes after {count} entries")
    return table


def _decode_json(payload: Any, path: str) -> EmbeddingTable:
    if not isinstance(payload, dict):
        raise ParseError(path, None, "JSON embeddings must be an object keyed by id")
    table: EmbeddingTable = {}
    for record_id, roles in payload.items():
        if not isinstance(roles, dict):
            raise ParseError(path, None, f"{record_id!r}: expected an object of roles")
        for name, values in roles.items():
            role = ROLE_BY_NAME.get(name)
            if role is None:
                raise ParseError(path, None, f"{record_id!r}: unknown role {name!r}")
            vectors = values if role in FINDING_ROLES else [values]
            if not isinstance(vectors, list):
                raise ParseError(path, None, f"{record_id!r}.{name}: expected a list")
            for index, vector in enumerate(vectors):
                array = _as_vector(vector, path, f"{record_id!r}.{name}")
                key: EmbeddingKey = (record_id, role, index if role in FINDING_ROLES else None)
                if key in table:
                    raise ParseError(path, None, f"duplicate embedding {_describe(key)}")
                table[key] = array
    return table


def _as_vector(values: Any, path: str, where: str) -> np.ndarray:
    if not isinstance(values, list) or not values:
        raise ParseError(path, None, f"{where}: expected a non-empty list of numbers")
    try:
        return np.asarray(values, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise ParseError(path, None, f"{where}: {e}") from None


def _describe(key: EmbeddingKey) -> str:
    record_id, role, index = key
    suffix = f"[{index}]" if index is not None else ""
    return f"{record_id!r} {ROLE_NAMES[role]}{suffix}"


def encode_embeddings(entries: List[Tuple[EmbeddingKey, np.ndarray]]) -> bytes:
    """Encode embeddings as a MOTOREMB container (values stored as float32)."""
    chunks = [EMBEDDING_MAGIC, _U32.pack(len(entries))]
    for (record_id, role, index), values in entries:
        encoded_id = record_id.encode("utf-8")
        chunks.append(_U16.pack(len(encoded_id)))
        chunks.append(encoded_id)
        chunks.append(_U16.pack(role))
        if role in FINDING_ROLES:
            chunks.append(_U16.pack(index or 0))
        array = np.asarray(values, dtype="<f4")
        chunks.append(_U32.pack(array.shape[0]))
        chunks.append(array.tobytes())
    return b"".join(chunks)


def read_json_lines(path: PathLike) -> Iterator[Tuple[int, Dict[str, Any]]]:
    """
    Yield ``(line number, object)`` for each non-blank line.

    Raises:
        ParseError: If the file is missing, a line is not valid UTF-8 or not a JSON object
    """
    path = Path(path)
    try:
        handle = path.open("rb")
    except FileNotFoundError:
        raise ParseError(str(path), None, "file not found") from None
    with handle:
        for line_number, raw in enumerate(handle, start=1):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as e:
                raise ParseError(str(path), line_number, f"invalid UTF-8 at byte {e.start}: {e.reason}") from None
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as e:
                raise ParseError(str(path), line_number, f"invalid JSON: {e.msg}") from None
            if not isinstance(row, dict):
                raise ParseError(str(path), line_number, "expected a JSON object")
            yield line_number, row


def encode_json_lines(rows: Sequence[Mapping[str, Any]]) -> str:
    return "".join(json.dumps(row, ensure_ascii=False) + "\n" for row in rows)
