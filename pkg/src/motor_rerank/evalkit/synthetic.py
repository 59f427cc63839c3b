"""
Seeded synthetic corpora with planted relevance.

All randomness comes from one ``numpy.random.Generator`` seeded with
``SyntheticCorpusSpec.seed`` and drawn in a fixed order, so the output depends
only on the corpus parameters. Every embedding is unit-normalized and then
rounded to float32, which keeps a saved and re-loaded corpus bit-identical to
the generated one.
"""
from typing import Dict, List, Tuple

import numpy as np

from ..core.models import (
    BoundingBox,
    CandidateRecord,
    EmbeddingVector,
    GroundedCaption,
    GroundedFinding,
    QueryContext,
)
from ..store.corpus import CorpusStore
from .models import SyntheticCorpusSpec

ABNORMALITIES = (
    "pleural effusion",
    "cardiomegaly",
    "atelectasis",
    "pneumothorax",
    "consolidation",
    "lung opacity",
    "pulmonary edema",
    "nodule",
    "rib fracture",
    "hiatal hernia",
)
LOCATIONS = (
    "left lower lobe",
    "right lower lobe",
    "left upper lobe",
    "right upper lobe",
    "right middle lobe",
    "left hilum",
    "right hilum",
    "retrocardiac region",
)

Planted = Dict[str, List[str]]


class _Draws:
    """Draw helpers over a single generator."""

    def __init__(self, seed: int):
        self.rng = np.random.default_rng(seed)

    @staticmethod
    def _quantize(x: np.ndarray) -> EmbeddingVector:
        norm = np.linalg.norm(x)
        if norm == 0.0:
            x = np.ones_like(x)
            norm = np.linalg.norm(x)
        return EmbeddingVector((x / norm).astype(np.float32).astype(np.float64))

    def unit(self, dim: int) -> EmbeddingVector:
        return self._quantize(self.rng.standard_normal(dim))

    def perturb(self, base: EmbeddingVector, scale: float) -> EmbeddingVector:
        """``base`` plus N(0, scale^2 / dim) noise per coordinate, renormalized."""
        if scale == 0.0:
            return base
        noise = self.rng.standard_normal(base.dim) * (scale / np.sqrt(base.dim))
        return self._quantize(base.values + noise)

    def box(self) -> BoundingBox:
        x0, y0 = (round(float(c), 3) for c in self.rng.uniform(0.0, 0.7, size=2))
        w, h = (round(float(c), 3) for c in self.rng.uniform(0.05, 0.3, size=2))
        return BoundingBox(x0, y0, round(x0 + w, 3), round(y0 + h, 3))

    def description(self) -> str:
        abnormality = ABNORMALITIES[int(self.rng.integers(len(ABNORMALITIES)))]
        location = LOCATIONS[int(self.rng.integers(len(LOCATIONS)))]
        return f"{abnormality} in the {location}"

    def count(self, bounds: Tuple[int, int]) -> int:
        low, high = bounds
        return int(self.rng.integers(low, high + 1))

    def caption(self, spec: SyntheticCorpusSpec) -> GroundedCaption:
        return GroundedCaption(tuple(
            GroundedFinding(
                description=self.description(),
                box=self.box(),
                text_embedding=self.unit(spec.text_dim),
                box_embedding=self.unit(spec.visual_dim),
            )
            for _ in range(self.count(spec.findings_per_record))
        ))


def _report_text(caption: GroundedCaption, serial: int) -> str:
    if len(caption) == 0:
        return f"Study {serial}: no acute cardiopulmonary abnormality."
    findings = "; ".join(f.description for f in caption)
    return f"Study {serial}: {findings}."


def _question_text(caption: GroundedCaption) -> str:
    if len(caption) == 0:
        return "Is there any abnormality in this image?"
    return f"Is there evidence of {caption.findings[0].description}?"


def generate_synthetic_corpus(spec: SyntheticCorpusSpec) -> Tuple[CorpusStore, List[QueryContext], Planted]:
    """
    Build a corpus, its queries and the planted relevance map.

    Planted records copy the query's finding descriptions and boxes, perturb its
    finding embeddings by ``noise_scale`` and its image embedding by
    ``planted_image_noise``, and reuse its question embedding as their report
    embedding. Image decoys perturb the query image ten times less than the
    planted records do but carry unrelated findings and reports.

    Args:
        spec: Corpus shape and seed

    Returns:
        (store, queries, planted) with planted mapping query id to record ids

    Raises:
        InvalidSpec: Raised by SyntheticCorpusSpec on construction
    """
    draws = _Draws(spec.seed)
    queries: List[QueryContext] = []
    # (record fields, owning query id or "", planted)
    drafts: List[Tuple[dict, str, bool]] = []

    for qi in range(spec.n_queries):
        query_id = f"q{qi:03d}"
        caption = draws.caption(spec)
        query = QueryContext(
            image_embedding=draws.unit(spec.visual_dim),
            caption=caption,
            question_text=_question_text(caption),
            question_embedding=draws.unit(spec.text_dim),
            query_id=query_id,
            image_ref=f"synthetic/{query_id}.png",
        )
        queries.append(query)

        for _ in range(spec.n_planted_relevant):
            planted_caption = GroundedCaption(tuple(
                GroundedFinding(
                    description=f.description,
                    box=f.box,
                    text_embedding=draws.perturb(f.text_embedding, spec.noise_scale),
                    box_embedding=draws.perturb(f.box_embedding, spec.noise_scale),
                )
                for f in caption
            ))
            drafts.append(({
                "image_embedding": draws.perturb(query.image_embedding, spec.image_noise),
                "caption": planted_caption,
                "report_embedding": query.question_embedding,
            }, query_id, True))

        for _ in range(spec.image_decoys_per_query):
            drafts.append(({
                "image_embedding": draws.perturb(query.image_embedding, spec.image_noise * 0.1),
                "caption": draws.caption(spec),
                "report_embedding": draws.unit(spec.text_dim),
            }, query_id, False))

    while len(drafts) < spec.n_records:
        drafts.append(({
            "image_embedding": draws.unit(spec.visual_dim),
            "caption": draws.caption(spec),
            "report_embedding": draws.unit(spec.text_dim),
        }, "", False))

    order = draws.rng.permutation(len(drafts))
    records: List[CandidateRecord] = []
    planted: Planted = {q.query_id: [] for q in queries}
    for position, draft_index in enumerate(order):
        fields, owner, is_planted = drafts[int(draft_index)]
        record_id = f"r{position:04d}"
        records.append(CandidateRecord(
            id=record_id,
            report_text=_report_text(fields["caption"], position),
            **fields,
        ))
        if is_planted:
            planted[owner].append(record_id)

    store = CorpusStore(records, visual_dim=spec.visual_dim, text_dim=spec.text_dim)
    return store, queries, planted
