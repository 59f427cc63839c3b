"""
MOTOR Input Validation

Checks that queries and records agree with the dimensions a RerankConfig implies.
Intrinsic invariants (finite embeddings, well-formed boxes, non-empty texts) are
enforced when the types are constructed; validation re-checks them so that it is
total over objects built by any route.
"""
from ..errors import (
    DimensionMismatch,
    EmptyDescription,
    EmptyQuestion,
    EmptyReport,
    MalformedBox,
)
from .models import (
    BoundingBox,
    CandidateRecord,
    EmbeddingVector,
    GroundedCaption,
    QueryContext,
    RerankConfig,
)


def _check_dim(vector: EmbeddingVector, expected: int, what: str) -> None:
    if vector.dim != expected:
        raise DimensionMismatch(expected, vector.dim, what)


def _check_box(box: BoundingBox) -> None:
    if not (0.0 <= box.x_min < box.x_max <= 1.0 and 0.0 <= box.y_min < box.y_max <= 1.0):
        raise MalformedBox(f"malformed box {box.as_list()}")


def _check_caption(caption: GroundedCaption, visual_dim: int, text_dim: int, owner: str) -> None:
    for index, finding in enumerate(caption):
        if not finding.description.strip():
            raise EmptyDescription(f"{owner} finding {index} has an empty description")
        _check_box(finding.box)
        _check_dim(finding.text_embedding, text_dim, f"{owner} finding {index} text embedding")
        _check_dim(finding.box_embedding, visual_dim, f"{owner} finding {index} box embedding")


def validate_query(q: QueryContext, cfg: RerankConfig) -> QueryContext:
    """
    Validate a query against the configured embedding dimensions.

    Args:
        q: The query to validate
        cfg: Configuration providing visual_dim and text_dim

    Returns:
        The same query object, unchanged

    Raises:
        DimensionMismatch: If an embedding length differs from the configured dim
        EmptyQuestion: If the question text is blank
        EmptyDescription: If a finding description is blank
        MalformedBox: If a finding box is malformed
    """
    if not q.question_text.strip():
        raise EmptyQuestion("question_text must be non-empty")
    _check_dim(q.image_embedding, cfg.visual_dim, "query image embedding")
    _check_dim(q.question_embedding, cfg.text_dim, "question embedding")
    _check_caption(q.caption, cfg.visual_dim, cfg.text_dim, "query")
    return q


def validate_record(r: CandidateRecord, cfg: RerankConfig) -> CandidateRecord:
    """Validate a candidate record against the configured embedding dimensions."""
    return check_record_dims(r, cfg.visual_dim, cfg.text_dim)


def check_record_dims(r: CandidateRecord, visual_dim: int, text_dim: int) -> CandidateRecord:
    """Validate a candidate record against explicit visual and text dimensions."""
    if not r.report_text.strip():
        raise EmptyReport(f"record {r.id!r} has an empty report_text")
    _check_dim(r.image_embedding, visual_dim, f"record {r.id} image embedding")
    _check_dim(r.report_embedding, text_dim, f"record {r.id} report embedding")
    _check_caption(r.caption, visual_dim, text_dim, f"record {r.id}")
    return r
