"""
MOTOR Pipeline Type Definitions

This module contains the generation request bundle, its trace and the generation
service descriptor.
"""
import json
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, TypedDict

DEFAULT_GENERATION_TIMEOUT = 60.0


class GenerationEndpoint(TypedDict, total=False):
    """
    Descriptor of the external generation service.

    Only url is required.
    """
    url: str  # POST target accepting {prompt, image_ref}
    timeout: float  # Seconds per attempt (defaults to 60)
    headers: Dict[str, str]  # Extra HTTP headers


class GenerationResponse(TypedDict):
    """Body returned by the generation service."""
    answer: str


class GenerationExchange(TypedDict):
    """One completed round trip with the generation service."""
    url: str
    prompt: str
    image_ref: str
    attempts: int  # 1-based attempt that succeeded
    status_code: int
    answer: str


@dataclass
class RequestTrace:
    """
    What happened while a query was processed.

    ``candidates`` lists one entry per re-ranked candidate in final order;
    ``failed_stage`` is set when a stage raised.
    """

    query_id: str = ""
    initial_ranking: List[str] = field(default_factory=list)
    final_ranking: List[str] = field(default_factory=list)
    candidates: List[Dict[str, Any]] = field(default_factory=list)
    config: Dict[str, Any] = field(default_factory=dict)
    timing: Dict[str, float] = field(default_factory=dict)
    failed_stage: Optional[str] = None
    generation: Optional[Dict[str, Any]] = None

    def to_dict(self, include_timing: bool = False) -> Dict[str, Any]:
        payload = asdict(self)
        if not include_timing:
            payload.pop("timing")
        if payload["generation"] is None:
            payload.pop("generation")
        return payload


@dataclass
class GenerationRequest:
    """The (query, contexts) bundle handed to the generation service."""

    question_text: str
    grounded_caption_rendering: str
    context_reports: List[str]
    query_image_ref: str
    trace: RequestTrace
    answer: Optional[str] = None

    def to_dict(self, include_timing: bool = False) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "question_text": self.question_text,
            "grounded_caption_rendering": self.grounded_caption_rendering,
            "context_reports": list(self.context_reports),
            "query_image_ref": self.query_image_ref,
            "trace": self.trace.to_dict(include_timing=include_timing),
        }
        if self.answer is not None:
            payload["answer"] = self.answer
        return payload

    def to_json(self, include_timing: bool = False) -> str:
        """
        Serialize for offline inspection.

        Wall-clock timing is left out unless asked for, so identical inputs give
        byte-identical output.
        """
        return json.dumps(self.to_dict(include_timing=include_timing), indent=2, ensure_ascii=False) + "\n"
