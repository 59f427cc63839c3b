"""
MOTOR Corpus Ingest

This module binds JSON Lines rows to their precomputed embeddings, producing a
CorpusStore (records) or a list of QueryContext (queries), and persists both
back to disk.
"""
import json
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union, cast

import numpy as np

from ..base import MotorComponent
from ..core.models import (
    DEFAULT_TEXT_DIM,
    DEFAULT_VISUAL_DIM,
    BoundingBox,
    CandidateRecord,
    EmbeddingVector,
    GroundedCaption,
    GroundedFinding,
    QueryContext,
)
from ..errors import DimensionMismatch, DuplicateId, MissingEmbedding, MotorError, ParseError
from ..io_utils import atomic_write_bytes, atomic_write_text
from .codec import encode_embeddings, encode_json_lines, read_embeddings, read_json_lines
from .corpus import CorpusStore
from .models import (
    EMBEDDINGS_FILENAME,
    QUERIES_FILENAME,
    RECORDS_FILENAME,
    ROLE_FINDING_BOX,
    ROLE_FINDING_TEXT,
    ROLE_IMAGE,
    ROLE_NAMES,
    ROLE_TEXT,
    EmbeddingKey,
    EmbeddingTable,
    FindingRow,
    QueryRow,
    RecordRow,
)

PathLike = Union[str, Path]


class CorpusIngester(MotorComponent):
    """
    Loads and saves corpora and query sets.

    Rows are validated with their line numbers so that every failure points at
    the offending line of the input file.
    """

    _log_tag = "Ingest"

    def ingest_corpus(self, records_path: PathLike, embeddings_path: PathLike) -> CorpusStore:
        """
        Build a CorpusStore from a records file and an embeddings file.

        Args:
            records_path: JSON Lines file with id, report_text and findings
            embeddings_path: MOTOREMB container or JSON fallback

        Returns:
            A store with one record per input row, in file order

        Raises:
            ParseError: If a row is malformed (with its line number)
            MissingEmbedding: If a record lacks an embedding for some role
            DuplicateId: If a record id occurs twice
        """
        rows = self._read_rows(records_path, "report_text")
        table = read_embeddings(embeddings_path)
        records: List[CandidateRecord] = []
        dims: Optional[Tuple[int, int]] = None
        for line, row in rows:
            record = self._bind_record(cast(RecordRow, row), line, table, str(records_path))
            record_dims = (record.image_embedding.dim, record.report_embedding.dim)
            dims = dims or record_dims
            records.append(record)
        self._warn_unused(table, {row["id"] for _, row in rows})
        visual_dim, text_dim = dims or (DEFAULT_VISUAL_DIM, DEFAULT_TEXT_DIM)
        try:
            store = CorpusStore(records, visual_dim=visual_dim, text_dim=text_dim)
        except DimensionMismatch as e:
            line = self._line_of(rows, e)
            raise ParseError(str(embeddings_path), line, str(e)) from None
        self._log_info(f"Ingested {len(store)} records (visual_dim={visual_dim}, text_dim={text_dim})")
        return store

    def load_queries(self, queries_path: PathLike, embeddings_path: PathLike) -> List[QueryContext]:
        """
        Load queries; rows carry question_text instead of report_text.

        Raises:
            ParseError: If a row is malformed
            MissingEmbedding: If a query lacks an embedding for some role
            DuplicateId: If a query id occurs twice
        """
        rows = self._read_rows(queries_path, "question_text")
        table = read_embeddings(embeddings_path)
        queries = [self._bind_query(cast(QueryRow, row), line, table, str(queries_path)) for line, row in rows]
        self._warn_unused(table, {row["id"] for _, row in rows})
        self._log_info(f"Loaded {len(queries)} queries")
        return queries

    def save_corpus(self, store: CorpusStore, out_dir: PathLike) -> Path:
        """Persist a store as ``records.jsonl`` + ``embeddings.bin`` inside ``out_dir``."""
        out = Path(out_dir)
        rows: List[RecordRow] = [
            {"id": r.id, "report_text": r.report_text, "findings": _finding_rows(r.caption)}
            for r in store
        ]
        entries: List[Tuple[EmbeddingKey, np.ndarray]] = []
        for r in store:
            entries.extend(_entries(r.id, r.image_embedding, r.report_embedding, r.caption))
        self._check_float32(entries)
        atomic_write_text(out / RECORDS_FILENAME, encode_json_lines(rows))
        atomic_write_bytes(out / EMBEDDINGS_FILENAME, encode_embeddings(entries))
        self._log_info(f"Saved {len(store)} records to {out}")
        return out

    def save_queries(self, queries: Sequence[QueryContext], out_dir: PathLike) -> Path:
        """Persist queries as ``queries.jsonl`` + ``embeddings.bin`` inside ``out_dir``."""
        out = Path(out_dir)
        rows: List[QueryRow] = []
        entries: List[Tuple[EmbeddingKey, np.ndarray]] = []
        for q in queries:
            row: QueryRow = {
                "id": q.query_id,
                "question_text": q.question_text,
                "findings": _finding_rows(q.caption),
            }
            if q.image_ref:
                row["image_ref"] = q.image_ref
            rows.append(row)
            entries.extend(_entries(q.query_id, q.image_embedding, q.question_embedding, q.caption))
        self._check_float32(entries)
        atomic_write_text(out / QUERIES_FILENAME, encode_json_lines(rows))
        atomic_write_bytes(out / EMBEDDINGS_FILENAME, encode_embeddings(entries))
        self._log_info(f"Saved {len(rows)} queries to {out}")
        return out

    def _read_rows(self, path: PathLike, text_field: str) -> List[Tuple[int, Dict[str, Any]]]:
        rows: List[Tuple[int, Dict[str, Any]]] = []
        seen: Dict[str, int] = {}
        for line, row in read_json_lines(path):
            _check_row(row, line, str(path), text_field)
            if row["id"] in seen:
                self._log_error(f"Duplicate id {row['id']!r} at {path}:{line} (first seen at line {seen[row['id']]})")
                raise DuplicateId(row["id"])
            seen[row["id"]] = line
            rows.append((line, row))
        return rows

    def _bind_record(self, row: RecordRow, line: int, table: EmbeddingTable, path: str) -> CandidateRecord:
        record_id = row["id"]
        try:
            return CandidateRecord(
                id=record_id,
                image_embedding=_lookup(table, record_id, ROLE_IMAGE),
                caption=_bind_caption(row["findings"], record_id, table),
                report_text=row["report_text"],
                report_embedding=_lookup(table, record_id, ROLE_TEXT),
            )
        except MissingEmbedding:
            raise
        except MotorError as e:
            raise ParseError(path, line, str(e)) from None

    def _bind_query(self, row: QueryRow, line: int, table: EmbeddingTable, path: str) -> QueryContext:
        query_id = row["id"]
        try:
            return QueryContext(
                image_embedding=_lookup(table, query_id, ROLE_IMAGE),
                caption=_bind_caption(row["findings"], query_id, table),
                question_text=row["question_text"],
                question_embedding=_lookup(table, query_id, ROLE_TEXT),
                query_id=query_id,
                image_ref=row.get("image_ref") or "",
            )
        except MissingEmbedding:
            raise
        except MotorError as e:
            raise ParseError(path, line, str(e)) from None

    def _warn_unused(self, table: EmbeddingTable, ids: set) -> None:
        unused = {record_id for record_id, _, _ in table if record_id not in ids}
        if unused:
            self._log_warning(f"{len(unused)} embedding id(s) have no matching row and were ignored")

    def _check_float32(self, entries: List[Tuple[EmbeddingKey, np.ndarray]]) -> None:
        lossy = sum(
            1 for _, values in entries
            if not np.array_equal(np.asarray(values, dtype=np.float32).astype(np.float64), values)
        )
        if lossy:
            self._log_note(f"{lossy} embedding(s) are not float32-representable; storage rounds them")

    @staticmethod
    def _line_of(rows: List[Tuple[int, Dict[str, Any]]], error: DimensionMismatch) -> Optional[int]:
        for line, row in rows:
            if f"record {row['id']} " in error.what:
                return line
        return None


def _check_row(row: Dict[str, Any], line: int, path: str, text_field: str) -> None:
    record_id = row.get("id")
    if not isinstance(record_id, str) or not record_id:
        raise ParseError(path, line, "missing or empty string field 'id'")
    if not isinstance(row.get(text_field), str):
        raise ParseError(path, line, f"missing string field {text_field!r}")
    findings = row.get("findings", [])
    if not isinstance(findings, list):
        raise ParseError(path, line, "'findings' must be an array")
    for index, finding in enumerate(findings):
        if not isinstance(finding, dict):
            raise ParseError(path, line, f"finding {index} must be an object")
        if not isinstance(finding.get("description"), str):
            raise ParseError(path, line, f"finding {index} lacks a string 'description'")
        box = finding.get("box")
        if not isinstance(box, list) or len(box) != 4 or not all(
            isinstance(c, (int, float)) and not isinstance(c, bool) for c in box
        ):
            raise ParseError(path, line, f"finding {index} 'box' must be [x_min, y_min, x_max, y_max]")
    row.setdefault("findings", findings)


def _lookup(table: EmbeddingTable, record_id: str, role: int, index: Optional[int] = None) -> EmbeddingVector:
    key = (record_id, role, index)
    if key not in table:
        suffix = f"[{index}]" if index is not None else ""
        raise MissingEmbedding(record_id, f"{ROLE_NAMES[role]}{suffix}")
    return EmbeddingVector(table[key])


def _bind_caption(findings: List[FindingRow], record_id: str, table: EmbeddingTable) -> GroundedCaption:
    return GroundedCaption(tuple(
        GroundedFinding(
            description=finding["description"],
            box=BoundingBox.from_list(finding["box"]),
            text_embedding=_lookup(table, record_id, ROLE_FINDING_TEXT, index),
            box_embedding=_lookup(table, record_id, ROLE_FINDING_BOX, index),
        )
        for index, finding in enumerate(findings)
    ))


def _finding_rows(caption: GroundedCaption) -> List[FindingRow]:
    return [{"description": f.description, "box": f.box.as_list()} for f in caption]


def _entries(
    record_id: str,
    image: EmbeddingVector,
    text: EmbeddingVector,
    caption: GroundedCaption,
) -> List[Tuple[EmbeddingKey, np.ndarray]]:
    entries: List[Tuple[EmbeddingKey, np.ndarray]] = [
        ((record_id, ROLE_IMAGE, None), image.values),
        ((record_id, ROLE_TEXT, None), text.values),
    ]
    for index, finding in enumerate(caption):
        entries.append(((record_id, ROLE_FINDING_TEXT, index), finding.text_embedding.values))
        entries.append(((record_id, ROLE_FINDING_BOX, index), finding.box_embedding.values))
    return entries


def ingest_corpus(records_path: PathLike, embeddings_path: PathLike) -> CorpusStore:
    """Build a CorpusStore from a records file and an embeddings file."""
    return CorpusIngester().ingest_corpus(records_path, embeddings_path)


def load_queries(queries_path: PathLike, embeddings_path: PathLike) -> List[QueryContext]:
    """Load queries from a queries file and an embeddings file."""
    return CorpusIngester().load_queries(queries_path, embeddings_path)


def save_corpus(store: CorpusStore, out_dir: PathLike) -> Path:
    return CorpusIngester().save_corpus(store, out_dir)


def load_corpus(index_dir: PathLike) -> CorpusStore:
    """Load a store persisted by :func:`save_corpus`."""
    index = Path(index_dir)
    return ingest_corpus(index / RECORDS_FILENAME, index / EMBEDDINGS_FILENAME)


def save_queries(queries: Sequence[QueryContext], out_dir: PathLike) -> Path:
    return CorpusIngester().save_queries(queries, out_dir)


def load_query_dir(query_dir: PathLike) -> List[QueryContext]:
    """Load queries persisted by :func:`save_queries`."""
    directory = Path(query_dir)
    return load_queries(directory / QUERIES_FILENAME, directory / EMBEDDINGS_FILENAME)


def save_planted(planted: Mapping[str, Sequence[str]], path: PathLike) -> None:
    """Write the planted-relevance map as JSON ``{query_id: [record_id, ...]}``."""
    payload = {query_id: list(ids) for query_id, ids in planted.items()}
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def load_planted(path: PathLike) -> Dict[str, List[str]]:
    """
    Read a planted-relevance map.

    Raises:
        ParseError: If the file is not an object of string lists
    """
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ParseError(str(path), None, "file not found") from None
    except json.JSONDecodeError as e:
        raise ParseError(str(path), e.lineno, f"invalid JSON: {e.msg}") from None
    if not isinstance(payload, dict) or not all(
        isinstance(ids, list) and all(isinstance(i, str) for i in ids) for ids in payload.values()
    ):
        raise ParseError(str(path), None, "expected an object mapping query ids to lists of record ids")
    return {str(query_id): list(ids) for query_id, ids in payload.items()}
