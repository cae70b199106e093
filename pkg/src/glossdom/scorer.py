"""Scoring backends: the wire client for remote inference and a mock oracle.

Every backend answers three kinds of queries:

* ``score_nli``  -- sentence pairs -> entailment/neutral/contradiction.
* ``score_nsp``  -- sentence pairs -> probability the second follows the first.
* ``fill_mask``  -- masked sequence -> ranked token predictions.

The mock backend is a closed-form pure function of its inputs so that the
whole pipeline is testable without any model server.  Its formula:

* tokenize by lower-casing and splitting on non-alphanumerics, then drop
  stop words (:data:`MOCK_STOPWORDS`); the remainder are the content words;
* ``raw = |content words shared by both texts| / max(1, |second-side content words|)``;
* entailment ``= 0.05 + 0.9 * raw``; the remainder is split 2:1 between
  neutral and contradiction;
* the next-sentence probability is ``raw`` itself;
* mask filling returns the sequence's content words ranked by frequency,
  ties broken alphabetically, scored by relative frequency.
"""

from __future__ import annotations

import os
import re
import threading
import time
from dataclasses import dataclass
from typing import Protocol

import requests

from .errors import BackendError, ProtocolError, TransportError

DEFAULT_TIMEOUT_MS = 30_000
DEFAULT_RETRIES = 3
DEFAULT_BACKOFF_S = 0.25
DEFAULT_MAX_IN_FLIGHT = 4

ENV_BACKEND_URL = "GLOSSDOM_BACKEND_URL"
ENV_BACKEND_TIMEOUT_MS = "GLOSSDOM_BACKEND_TIMEOUT_MS"

#: Symbolic mask placeholder used in rendered sequences.  Backends substitute
#: their model-specific spelling server-side; the mock simply ignores it.
MASK_PLACEHOLDER = "[MASK]"


@dataclass(frozen=True)
class NliScores:
    """Class probabilities of one premise/hypothesis pair."""

    entailment: float
    neutral: float
    contradiction: float


@dataclass(frozen=True)
class NspScore:
    """Probability that the second sentence follows the first."""

    is_next: float


@dataclass(frozen=True)
class MaskPrediction:
    """One ranked token prediction for a masked position."""

    token: str
    score: float
    rank: int


@dataclass(frozen=True)
class BackendDescriptor:
    kind: str
    supported_formulations: frozenset[str]
    model_name: str


class ScoringBackend(Protocol):
    """Structural interface every backend satisfies."""

    descriptor: BackendDescriptor
    normalized: bool | None

    def score_nli(self, batch: list[tuple[str, str]]) -> list[NliScores]: ...

    def score_nsp(self, batch: list[tuple[str, str]]) -> list[NspScore]: ...

    def fill_mask(self, sequence: str, k: int) -> list[MaskPrediction]: ...


def supports(backend: "ScoringBackend", formulation: str) -> bool:
    key = "mlm" if formulation == "mlm-constrained" else formulation
    return key in backend.descriptor.supported_formulations


# ---------------------------------------------------------------------------
# Mock oracle
# ---------------------------------------------------------------------------

#: Closed-class function words plus the prompt scaffold words; frozen contract,
#: tests that recompute the mock formula rely on this exact set.
MOCK_STOPWORDS = frozenset(
    """
    a an the of in on at to for with by from as is are was were be been being
    and or not no nor it its this that these those he she they them his her
    their we us our you your i me my mine which who whom whose what where when
    why how do does did done have has had having will would can could shall
    should may might must than then there here if else but so such both each
    few more most other some any all own same s t
    context topic mask
    """.split()
)

_TOKEN = re.compile(r"[a-z0-9]+")


def mock_content_words(text: str) -> list[str]:
    """Lower-cased alphanumeric tokens of ``text`` minus the stop words."""
    return [tok for tok in _TOKEN.findall(text.lower()) if tok not in MOCK_STOPWORDS]


def mock_overlap(first: str, second: str) -> float:
    """Shared content words over second-side content words, in [0, 1]."""
    hypothesis = set(mock_content_words(second))
    premise = set(mock_content_words(first))
    return len(premise & hypothesis) / max(1, len(hypothesis))


class MockBackend:
    """Deterministic scorer whose argmax tracks lexical topical overlap."""

    def __init__(self):
        self.descriptor = BackendDescriptor(
            kind="mock",
            supported_formulations=frozenset(("mlm", "nsp", "nli")),
            model_name="mock-overlap",
        )
        self.normalized: bool | None = True

    def score_nli(self, batch: list[tuple[str, str]]) -> list[NliScores]:
        if not batch:
            raise ValueError("empty batch")
        out = []
        for premise, hypothesis in batch:
            entailment = 0.05 + 0.9 * mock_overlap(premise, hypothesis)
            remainder = 1.0 - entailment
            out.append(
                NliScores(
                    entailment=entailment,
                    neutral=remainder * 2.0 / 3.0,
                    contradiction=remainder / 3.0,
                )
            )
        return out

    def score_nsp(self, batch: list[tuple[str, str]]) -> list[NspScore]:
        if not batch:
            raise ValueError("empty batch")
        return [NspScore(is_next=mock_overlap(first, second)) for first, second in batch]

    def fill_mask(self, sequence: str, k: int) -> list[MaskPrediction]:
        if k < 1:
            raise ValueError(f"k must be positive, got {k}")
        if sequence.count(MASK_PLACEHOLDER) != 1:
            raise ValueError(
                f"sequence must contain exactly one {MASK_PLACEHOLDER} placeholder"
            )
        words = mock_content_words(sequence)
        if not words:
            return []
        counts: dict[str, int] = {}
        for word in words:
            counts[word] = counts.get(word, 0) + 1
        ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
        total = len(words)
        return [
            MaskPrediction(token=token, score=count / total, rank=rank)
            for rank, (token, count) in enumerate(ranked[:k], start=1)
        ]


# ---------------------------------------------------------------------------
# Remote wire client
# ---------------------------------------------------------------------------


class RemoteBackend:
    """HTTP client for a ``POST /v1/score`` inference endpoint.

    Requests are retried on transport failures and 5xx responses with
    exponential backoff; 4xx responses surface the server's message verbatim.
    A semaphore caps the number of in-flight requests so the client is safe
    to share across threads.
    """

    def __init__(
        self,
        base_url: str | None = None,
        model_name: str = "default",
        supported_formulations: tuple[str, ...] = ("mlm", "nsp", "nli"),
        timeout_ms: int | None = None,
        retries: int = DEFAULT_RETRIES,
        backoff_s: float = DEFAULT_BACKOFF_S,
        max_in_flight: int = DEFAULT_MAX_IN_FLIGHT,
        session: requests.Session | None = None,
    ):
        url = base_url or os.environ.get(ENV_BACKEND_URL)
        if not url:
            raise BackendError(
                f"no backend URL: pass base_url or set {ENV_BACKEND_URL}"
            )
        if timeout_ms is None:
            timeout_ms = int(os.environ.get(ENV_BACKEND_TIMEOUT_MS, DEFAULT_TIMEOUT_MS))
        self.base_url = url.rstrip("/")
        self.timeout_s = timeout_ms / 1000.0
        self.retries = retries
        self.backoff_s = backoff_s
        self.descriptor = BackendDescriptor(
            kind="remote",
            supported_formulations=frozenset(supported_formulations),
            model_name=model_name,
        )
        self.normalized: bool | None = None
        self._session = session or requests.Session()
        self._gate = threading.Semaphore(max_in_flight)

    def score_nli(self, batch: list[tuple[str, str]]) -> list[NliScores]:
        if not batch:
            raise ValueError("empty batch")
        inputs = [{"first": first, "second": second} for first, second in batch]
        results = self._post("nli", inputs)
        scores = []
        for idx, res in enumerate(results):
            try:
                scores.append(
                    NliScores(
                        entailment=float(res["entailment"]),
                        neutral=float(res["neutral"]),
                        contradiction=float(res["contradiction"]),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ProtocolError(
                    f"nli result {idx} malformed: {_excerpt(res)}"
                ) from exc
        return scores

    def score_nsp(self, batch: list[tuple[str, str]]) -> list[NspScore]:
        if not batch:
            raise ValueError("empty batch")
        inputs = [{"first": first, "second": second} for first, second in batch]
        results = self._post("nsp", inputs)
        scores = []
        for idx, res in enumerate(results):
            try:
                scores.append(NspScore(is_next=float(res["is_next"])))
            except (KeyError, TypeError, ValueError) as exc:
                raise ProtocolError(
                    f"nsp result {idx} malformed: {_excerpt(res)}"
                ) from exc
        return scores

    def fill_mask(self, sequence: str, k: int) -> list[MaskPrediction]:
        if k < 1:
            raise ValueError(f"k must be positive, got {k}")
        if sequence.count(MASK_PLACEHOLDER) != 1:
            raise ValueError(
                f"sequence must contain exactly one {MASK_PLACEHOLDER} placeholder"
            )
        results = self._post("mlm", [{"sequence": sequence}], top_k=k)
        if len(results) != 1 or not isinstance(results[0], list):
            raise ProtocolError(f"mlm response malformed: {_excerpt(results)}")
        predictions = []
        for rank, entry in enumerate(results[0], start=1):
            try:
                predictions.append(
                    MaskPrediction(token=str(entry["token"]), score=float(entry["score"]), rank=rank)
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ProtocolError(f"mlm result {rank} malformed: {_excerpt(entry)}") from exc
        return predictions

    def _post(self, task: str, inputs: list[dict], top_k: int | None = None) -> list:
        body = {"task": task, "model": self.descriptor.model_name, "inputs": inputs}
        if top_k is not None:
            body["top_k"] = top_k
        attempts = self.retries + 1
        last_error: Exception | None = None
        for attempt in range(attempts):
            if attempt:
                time.sleep(self.backoff_s * (2 ** (attempt - 1)))
            try:
                with self._gate:
                    response = self._session.post(
                        f"{self.base_url}/v1/score", json=body, timeout=self.timeout_s
                    )
            except (requests.ConnectionError, requests.Timeout) as exc:
                last_error = exc
                continue
            if response.status_code >= 500:
                last_error = BackendError(
                    f"server error {response.status_code}: {_excerpt(response.text)}"
                )
                continue
            if response.status_code >= 400:
                raise BackendError(
                    f"backend rejected request ({response.status_code}): {response.text.strip()}"
                )
            return self._parse(response, expected=len(inputs))
        raise TransportError(
            f"backend {self.base_url} unreachable: {last_error}", attempts=attempts
        )

    def _parse(self, response: requests.Response, expected: int) -> list:
        try:
            payload = response.json()
        except ValueError as exc:
            raise ProtocolError(f"response is not JSON: {_excerpt(response.text)}") from exc
        if not isinstance(payload, dict) or "results" not in payload or "normalized" not in payload:
            raise ProtocolError(
                f"response missing 'results'/'normalized': {_excerpt(payload)}"
            )
        results = payload["results"]
        if not isinstance(results, list) or len(results) != expected:
            raise ProtocolError(
                f"expected {expected} results, got {_excerpt(results)}"
            )
        self.normalized = bool(payload["normalized"])
        return results


def _excerpt(value, limit: int = 200) -> str:
    text = repr(value)
    return text if len(text) <= limit else text[:limit] + "..."
