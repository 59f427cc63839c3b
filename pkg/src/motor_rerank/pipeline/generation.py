"""
MOTOR Generation Client

This module provides the client for the external generation service. The service
takes a JSON body {prompt, image_ref} and answers {answer}; the answer is returned
verbatim.
"""
import asyncio
from typing import Any, Dict, Optional, cast

import requests

from ..base import MotorComponent
from ..errors import ServiceError, ServiceUnavailable
from .models import DEFAULT_GENERATION_TIMEOUT, GenerationEndpoint, GenerationExchange, GenerationResponse

MAX_ATTEMPTS = 3
INITIAL_BACKOFF = 0.5


class GenerationClient(MotorComponent):
    """
    Client for a generation service endpoint.

    Connection failures and timeouts are retried with exponential backoff
    (0.5 s, then 1 s); a non-success response is not retried.
    """

    _log_tag = "Generation"

    def __init__(self, endpoint: GenerationEndpoint):
        """
        Initialize the client.

        Args:
            endpoint: Service descriptor; url is required
        """
        self.endpoint = endpoint
        self.url = endpoint["url"]
        self.timeout = endpoint.get("timeout", DEFAULT_GENERATION_TIMEOUT)
        self.session = requests.Session()
        self.session.headers.update({"Content-Type": "application/json"})
        self.session.headers.update(endpoint.get("headers") or {})

    def _make_request(self, payload: Dict[str, Any]) -> requests.Response:
        """
        POST one request to the service.

        Raises:
            requests.ConnectionError: If there's a connection error
            requests.Timeout: If the request times out
            ServiceError: If the service answers with a non-success status
        """
        self._log_info(f"Request: POST {self.url}")
        response = self.session.post(self.url, json=payload, timeout=self.timeout)
        self._log_info(f"Response: {response.status_code} {response.reason}")
        if not 200 <= response.status_code < 300:
            body = response.content.decode("utf-8", errors="replace") if response.content else ""
            self._log_error(f"HTTP error {response.status_code}: {body[:200]}")
            raise ServiceError(response.status_code, body)
        return response

    def _parse_answer(self, response: requests.Response) -> str:
        try:
            body = response.json()
        except ValueError:
            text = response.content.decode("utf-8", errors="replace") if response.content else ""
            self._log_warning(f"Invalid JSON response: {text[:100]}...")
            raise ServiceError(response.status_code, text) from None
        if not isinstance(body, dict) or not isinstance(body.get("answer"), str):
            raise ServiceError(response.status_code, str(body))
        return cast(GenerationResponse, body)["answer"]

    async def exchange(self, prompt: str, image_ref: str) -> GenerationExchange:
        """
        Send a prompt and image reference, returning the whole round trip.

        Args:
            prompt: Assembled prompt text
            image_ref: Opaque reference to the query image

        Returns:
            The exchange: what was sent, how many attempts it took, the status
            code and the answer text verbatim

        Raises:
            ServiceUnavailable: If every attempt fails to reach the service
            ServiceError: If the service answers with a non-success response
        """
        payload = {"prompt": prompt, "image_ref": image_ref}
        last_error: Optional[BaseException] = None
        for attempt in range(1, MAX_ATTEMPTS + 1):
            try:
                response = self._make_request(payload)
            except (requests.ConnectionError, requests.Timeout) as e:
                last_error = e
                self._log_warning(f"Attempt {attempt}/{MAX_ATTEMPTS} failed: {e}")
                if attempt < MAX_ATTEMPTS:
                    await asyncio.sleep(INITIAL_BACKOFF * 2 ** (attempt - 1))
                continue
            except requests.RequestException as e:
                self._log_error(f"Request error: {e}")
                raise ServiceUnavailable(self.url, attempt, e) from e
            return {
                "url": self.url,
                "prompt": prompt,
                "image_ref": image_ref,
                "attempts": attempt,
                "status_code": response.status_code,
                "answer": self._parse_answer(response),
            }
        self._log_error(f"Generation service {self.url} unreachable after {MAX_ATTEMPTS} attempts")
        raise ServiceUnavailable(self.url, MAX_ATTEMPTS, last_error)

    async def dispatch_generation(self, prompt: str, image_ref: str) -> str:
        """Send a prompt and image reference, returning the service's answer verbatim."""
        return (await self.exchange(prompt, image_ref))["answer"]


async def dispatch_generation(prompt: str, image_ref: str, endpoint: GenerationEndpoint) -> str:
    """Send one prompt to ``endpoint`` (see GenerationClient.dispatch_generation)."""
    return await GenerationClient(endpoint).dispatch_generation(prompt, image_ref)
