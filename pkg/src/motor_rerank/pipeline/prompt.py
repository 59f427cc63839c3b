"""
Prompt assembly for the generation service.
"""
from string import Formatter
from typing import List, Sequence

from ..core.models import GroundedCaption
from ..errors import InputError, UnknownPlaceholder
from .models import GenerationRequest

PLACEHOLDERS = ("question", "grounded_caption", "contexts")
NO_CONTEXT = "(no retrieved context)"
NO_FINDINGS = "(no findings)"

DEFAULT_TEMPLATE = (
    "Question: {question}\n"
    "\n"
    "Findings in the query image:\n"
    "{grounded_caption}\n"
    "\n"
    "Reports of similar cases:\n"
    "{contexts}\n"
    "\n"
    "Answer the question using the image, its findings and the reports above.\n"
)


def render_caption(caption: GroundedCaption) -> str:
    """One line per finding: ``<description> [x_min,y_min,x_max,y_max]``."""
    if len(caption) == 0:
        return NO_FINDINGS
    return "\n".join(
        f"{f.description} [{','.join(f'{c:.3f}' for c in f.box.as_list())}]" for f in caption
    )


def render_contexts(reports: Sequence[str]) -> str:
    if not reports:
        return NO_CONTEXT
    return "\n".join(f"{i}. {report}" for i, report in enumerate(reports, start=1))


def template_fields(template: str) -> List[str]:
    """Placeholder names used by a template, in order of appearance."""
    try:
        return [name for _, name, _, _ in Formatter().parse(template) if name is not None]
    except ValueError as e:
        raise InputError(f"malformed prompt template: {e}") from None


def assemble_prompt(req: GenerationRequest, template: str = DEFAULT_TEMPLATE) -> str:
    """
    Fill a template with the request's question, caption and contexts.

    Placeholders the template omits are fine; names outside
    {question}, {grounded_caption}, {contexts} are not.

    Raises:
        UnknownPlaceholder: If the template uses any other placeholder
    """
    for name in template_fields(template):
        if name not in PLACEHOLDERS:
            raise UnknownPlaceholder(name)
    return template.format(
        question=req.question_text,
        grounded_caption=req.grounded_caption_rendering,
        contexts=render_contexts(req.context_reports),
    )
