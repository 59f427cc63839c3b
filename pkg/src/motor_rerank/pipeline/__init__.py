"""
MOTOR Pipeline Module

End-to-end query processing, prompt assembly and the generation service client.
"""

from .generation import GenerationClient, dispatch_generation
from .models import GenerationEndpoint, GenerationRequest, GenerationResponse, RequestTrace
from .pipeline import MotorPipeline, run_query
from .prompt import DEFAULT_TEMPLATE, assemble_prompt, render_caption

__all__ = [
    "DEFAULT_TEMPLATE",
    "GenerationClient",
    "GenerationEndpoint",
    "GenerationExchange",
    "GenerationRequest",
    "GenerationResponse",
    "MotorPipeline",
    "RequestTrace",
    "assemble_prompt",
    "dispatch_generation",
    "render_caption",
    "run_query",
]
