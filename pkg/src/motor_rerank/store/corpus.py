"""
MOTOR Corpus Store

The in-memory vector database: an ordered, immutable collection of candidate
records with fixed visual and text dimensions.
"""
from typing import Dict, Iterable, Iterator, Tuple

from ..core.models import DEFAULT_TEXT_DIM, DEFAULT_VISUAL_DIM, CandidateRecord
from ..core.validation import check_record_dims
from ..errors import DuplicateId, UnknownRecordId


class CorpusStore:
    """
    Immutable collection of CandidateRecord in insertion order.

    Re-ingesting produces a new store; nothing here mutates after construction,
    so one store may be shared by concurrent readers.
    """

    def __init__(
        self,
        records: Iterable[CandidateRecord] = (),
        visual_dim: int = DEFAULT_VISUAL_DIM,
        text_dim: int = DEFAULT_TEXT_DIM,
    ):
        """
        Build a store, checking id uniqueness and embedding dimensions.

        Args:
            records: Records in insertion order
            visual_dim: Dimension of image and box embeddings
            text_dim: Dimension of report and finding-text embeddings

        Raises:
            DuplicateId: If two records share an id
            DimensionMismatch: If a record's embeddings disagree with the dims
        """
        by_id: Dict[str, CandidateRecord] = {}
        ordered = tuple(records)
        for record in ordered:
            if record.id in by_id:
                raise DuplicateId(record.id)
            check_record_dims(record, visual_dim, text_dim)
            by_id[record.id] = record
        self._records: Tuple[CandidateRecord, ...] = ordered
        self._by_id = by_id
        self._positions = {record.id: i for i, record in enumerate(ordered)}
        self._visual_dim = visual_dim
        self._text_dim = text_dim

    @property
    def records(self) -> Tuple[CandidateRecord, ...]:
        return self._records

    @property
    def visual_dim(self) -> int:
        return self._visual_dim

    @property
    def text_dim(self) -> int:
        return self._text_dim

    @property
    def ids(self) -> Tuple[str, ...]:
        return tuple(record.id for record in self._records)

    def get(self, record_id: str) -> CandidateRecord:
        """
        Look up a record by id.

        Raises:
            UnknownRecordId: If no record has this id
        """
        try:
            return self._by_id[record_id]
        except KeyError:
            raise UnknownRecordId(record_id) from None

    def position(self, record_id: str) -> int:
        """Insertion index of a record."""
        if record_id not in self._positions:
            raise UnknownRecordId(record_id)
        return self._positions[record_id]

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[CandidateRecord]:
        return iter(self._records)

    def __contains__(self, record_id: object) -> bool:
        return record_id in self._by_id

    def __repr__(self) -> str:
        return (
            f"CorpusStore(records={len(self)}, visual_dim={self._visual_dim}, "
            f"text_dim={self._text_dim})"
        )
