"""
MOTOR Store Type Definitions

This module contains the wire-format types for corpus files: JSON Lines rows for
records and queries, and the role tags of the embedding container.
"""
from typing import Dict, List, Optional, Tuple, TypedDict

import numpy as np

EMBEDDING_MAGIC = b"MOTOREMB"

ROLE_IMAGE = 0
ROLE_TEXT = 1  # report text for records, question text for queries
ROLE_FINDING_TEXT = 2
ROLE_FINDING_BOX = 3

ROLE_NAMES: Dict[int, str] = {
    ROLE_IMAGE: "image",
    ROLE_TEXT: "text",
    ROLE_FINDING_TEXT: "finding_text",
    ROLE_FINDING_BOX: "finding_box",
}
ROLE_BY_NAME: Dict[str, int] = {name: role for role, name in ROLE_NAMES.items()}
# JSON fallback aliases for the text role
ROLE_BY_NAME.update({"report": ROLE_TEXT, "question": ROLE_TEXT})

FINDING_ROLES = (ROLE_FINDING_TEXT, ROLE_FINDING_BOX)

# (record id, role, finding index or None)
EmbeddingKey = Tuple[str, int, Optional[int]]
EmbeddingTable = Dict[EmbeddingKey, np.ndarray]

RECORDS_FILENAME = "records.jsonl"
QUERIES_FILENAME = "queries.jsonl"
EMBEDDINGS_FILENAME = "embeddings.bin"


class FindingRow(TypedDict):
    """One grounded finding in a records or queries file."""
    description: str
    box: List[float]  # [x_min, y_min, x_max, y_max]


class RecordRow(TypedDict):
    """One line of a records JSON Lines file."""
    id: str
    report_text: str
    findings: List[FindingRow]


class QueryRow(TypedDict, total=False):
    """One line of a queries JSON Lines file."""
    id: str
    question_text: str
    findings: List[FindingRow]
    image_ref: Optional[str]
