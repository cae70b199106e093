"""Shared test instruments: scripted/counting/flaky backends and fixture builders."""

from __future__ import annotations

import hashlib
import random

from glossdom.dataset import Corpus, GlossRecord
from glossdom.errors import BackendError
from glossdom.labelspace import LabelSpace
from glossdom.scorer import BackendDescriptor, MaskPrediction, NliScores, NspScore

ALL_FORMULATIONS = frozenset(("mlm", "nsp", "nli"))

# --- Reference reimplementation of the published mock-scorer formula -------


def oracle_tokens(text):
    from glossdom.scorer import MOCK_STOPWORDS

    out, cur = [], []
    for ch in text.lower():
        if ch.isascii() and ch.isalnum():
            cur.append(ch)
        elif cur:
            out.append("".join(cur))
            cur = []
    if cur:
        out.append("".join(cur))
    return [t for t in out if t not in MOCK_STOPWORDS]


def oracle_overlap(first, second):
    hyp = set(oracle_tokens(second))
    return len(set(oracle_tokens(first)) & hyp) / max(1, len(hyp))


def oracle_entailment(first, second):
    return 0.05 + 0.9 * oracle_overlap(first, second)


def oracle_softmax(scores, temperature=1.0):
    import math

    scaled = [s / temperature for s in scores]
    peak = max(scaled)
    exps = [math.exp(s - peak) for s in scaled]
    total = sum(exps)
    return [e / total for e in exps]


class ScriptedBackend:
    """Returns preset positive scores looked up by the second sentence."""

    def __init__(self, scores_by_second: dict[str, float], default: float = 0.0):
        self.descriptor = BackendDescriptor(
            kind="mock", supported_formulations=ALL_FORMULATIONS, model_name="scripted"
        )
        self.normalized = True
        self.scores = scores_by_second
        self.default = default

    def _positive(self, second: str) -> float:
        return self.scores.get(second, self.default)

    def score_nli(self, batch):
        out = []
        for _, second in batch:
            e = self._positive(second)
            out.append(NliScores(entailment=e, neutral=(1 - e) * 2 / 3, contradiction=(1 - e) / 3))
        return out

    def score_nsp(self, batch):
        return [NspScore(is_next=self._positive(second)) for _, second in batch]

    def fill_mask(self, sequence, k):
        raise NotImplementedError("scripted backend has no mlm support in tests")


class CountingBackend:
    """Wraps a backend and counts individual queries passing through."""

    def __init__(self, inner):
        self.inner = inner
        self.descriptor = inner.descriptor
        self.pair_queries = 0
        self.mask_queries = 0

    @property
    def normalized(self):
        return self.inner.normalized

    def score_nli(self, batch):
        self.pair_queries += len(batch)
        return self.inner.score_nli(batch)

    def score_nsp(self, batch):
        self.pair_queries += len(batch)
        return self.inner.score_nsp(batch)

    def fill_mask(self, sequence, k):
        self.mask_queries += 1
        return self.inner.fill_mask(sequence, k)


class OutageBackend:
    """Delegates until a budget of pair-queries is spent, then raises."""

    def __init__(self, inner, fail_after_pairs: int):
        self.inner = inner
        self.descriptor = inner.descriptor
        self.remaining = fail_after_pairs

    @property
    def normalized(self):
        return self.inner.normalized

    def _spend(self, n):
        if self.remaining < n:
            raise BackendError("injected backend outage")
        self.remaining -= n

    def score_nli(self, batch):
        self._spend(len(batch))
        return self.inner.score_nli(batch)

    def score_nsp(self, batch):
        self._spend(len(batch))
        return self.inner.score_nsp(batch)

    def fill_mask(self, sequence, k):
        self._spend(1)
        return self.inner.fill_mask(sequence, k)


class HashRandomBackend:
    """Uniform pseudo-random positive scores, a pure function of the pair text.

    Stands in for the random-classifier baseline: per gloss, every candidate
    gets an i.i.d.-looking uniform score, reproducible across runs.
    """

    def __init__(self, salt: str = ""):
        self.descriptor = BackendDescriptor(
            kind="mock", supported_formulations=ALL_FORMULATIONS, model_name="hash-random"
        )
        self.normalized = True
        self.salt = salt

    def _uniform(self, first: str, second: str) -> float:
        digest = hashlib.sha256(f"{self.salt}|{first}|{second}".encode("utf-8")).digest()
        return int.from_bytes(digest[:8], "big") / 2**64

    def score_nli(self, batch):
        out = []
        for first, second in batch:
            e = self._uniform(first, second)
            out.append(NliScores(entailment=e, neutral=(1 - e) * 2 / 3, contradiction=(1 - e) / 3))
        return out

    def score_nsp(self, batch):
        return [NspScore(is_next=self._uniform(first, second)) for first, second in batch]

    def fill_mask(self, sequence, k):
        raise NotImplementedError


FILLER_WORDS = (
    "small", "large", "person", "object", "place", "device", "group",
    "process", "quality", "event", "typically", "used", "made", "known",
)


def keyword_gloss(rng: random.Random, keywords: list[str], n_fill: int = 4) -> str:
    """A synthetic definition built around the given topical keywords."""
    words = [w.lower() for w in keywords] + [rng.choice(FILLER_WORDS) for _ in range(n_fill)]
    rng.shuffle(words)
    return "a " + " ".join(words)


def keyword_corpus(
    labels: LabelSpace, n: int, seed: int, name: str = "synthetic"
) -> Corpus:
    """Corpus whose glosses lexically signal their gold label's descriptors."""
    rng = random.Random(seed)
    records = []
    for i in range(n):
        label = labels.labels[i % len(labels)]
        picked = [d for d in label.descriptors if rng.random() < 0.8] or [label.descriptors[0]]
        keywords = [w for d in picked for w in d.split()]
        records.append(
            GlossRecord(
                id=f"g{i:04d}",
                gloss=keyword_gloss(rng, keywords),
                gold_label=label.name,
            )
        )
    return Corpus(records=tuple(records), name=name)
