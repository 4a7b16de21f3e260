"""Embedding ranker: cosine similarity between each candidate and its post.

Vectors come from a provider; two are included: a word-vector text file
(embedding = mean of the known word vectors) and a JSON-over-HTTP service.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
import time
import urllib.error
import urllib.request
from typing import Callable, Protocol

import numpy as np

from .base import check_k, top_k

logger = logging.getLogger(__name__)


class EmbeddingError(Exception):
    pass


class EmbeddingProvider(Protocol):
    name: str
    dimension: int

    def embed(self, text: str) -> np.ndarray: ...


def cosine(u, v) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise ValueError("cosine is undefined for a zero vector")
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


def embed_rank(document_text: str, candidates, provider: EmbeddingProvider, k: int):
    """Top-k candidates by cosine(candidate surface, whole document)."""
    check_k(k)
    if not candidates:
        return []
    if hasattr(provider, "embed_many"):
        # one batched request; per-candidate calls below then hit the cache
        try:
            provider.embed_many([document_text] + [c.surface for c in candidates])
        except Exception as exc:
            raise EmbeddingError(f"{provider.name}: batch embedding failed: {exc}") from exc
    try:
        doc_vec = provider.embed(document_text)
    except Exception as exc:
        raise EmbeddingError(f"{provider.name}: failed to embed document: {exc}") from exc
    scores = []
    for c in candidates:
        try:
            vec = provider.embed(c.surface)
        except Exception as exc:
            raise EmbeddingError(f"{provider.name}: failed to embed candidate {c.surface!r}: {exc}") from exc
        scores.append(cosine(vec, doc_vec))
    return top_k(candidates, scores, k)


# -- word-vector file -----------------------------------------------------------

class FileVectorProvider:
    """Averaged word vectors from a word2vec-style text file."""

    def __init__(self, vectors: dict[str, np.ndarray], dimension: int, name: str = "file"):
        self.vectors = vectors
        self.dimension = dimension
        self.name = name
        self.diagnostics: list[str] = []

    def embed(self, text: str) -> np.ndarray:
        from ..textproc.tokenize import tokenize

        known = [self.vectors[t.lower] for t in tokenize(text) if t.lower in self.vectors]
        if not known:
            raise EmbeddingError(f"no known words in {text[:40]!r}")
        return np.mean(known, axis=0)


def file_vector_provider(path) -> FileVectorProvider:
    """Load ``<vocab_size> <dimension>`` then ``<word> <v1> ... <vd>`` lines.

    Lines with the wrong arity or non-numeric values are skipped and noted
    in ``provider.diagnostics``.
    """
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise EmbeddingError(f"{path}: header must be '<vocab_size> <dimension>'")
        try:
            dim = int(header[1])
        except ValueError as exc:
            raise EmbeddingError(f"{path}: bad dimension {header[1]!r}") from exc
        vectors = {}
        diags = []
        for lineno, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").split(" ")
            if not line.strip():
                continue
            if len(parts) != dim + 1:
                diags.append(f"line {lineno}: expected {dim} values, got {len(parts) - 1}")
                continue
            try:
                vec = np.array([float(x) for x in parts[1:]])
            except ValueError:
                diags.append(f"line {lineno}: non-numeric value")
                continue
            if not np.isfinite(vec).all():
                diags.append(f"line {lineno}: non-finite value")
                continue
            vectors[parts[0].lower()] = vec
    for d in diags:
        logger.warning("%s: %s", path, d)
    prov = FileVectorProvider(vectors, dim, name=f"file:{os.path.basename(str(path))}")
    prov.diagnostics = diags
    return prov


# -- HTTP service ---------------------------------------------------------------

Transport = Callable[[str, bytes, dict], tuple[int, bytes]]


def urllib_transport(url: str, body: bytes, headers: dict, timeout: float = 60.0) -> tuple[int, bytes]:
    req = urllib.request.Request(url, data=body, headers=headers, method="POST")
    try:
        with urllib.request.urlopen(req, timeout=timeout) as resp:
            return resp.status, resp.read()
    except urllib.error.HTTPError as exc:
        return exc.code, exc.read()


class HttpVectorProvider:
    """POST {"texts": [...]} -> {"vectors": [[...], ...]}, cached per text hash.

    Transient failures (network errors, 429, 5xx) are retried with
    exponential backoff.  A response whose dimension differs from the first
    one seen is fatal.
    """

    RETRY_STATUS = frozenset({429, 500, 502, 503, 504})

    def __init__(self, endpoint: str, api_key: str | None = None, *, name: str = "http",
                 transport: Transport | None = None, max_retries: int = 3,
                 backoff: float = 0.5, sleep: Callable[[float], None] = time.sleep):
        self.endpoint = endpoint
        self.api_key = api_key
        self.name = name
        self.transport = transport or urllib_transport
        self.max_retries = max_retries
        self.backoff = backoff
        self.sleep = sleep
        self.dimension: int | None = None
        self.requests = 0
        self._cache: dict[str, np.ndarray] = {}
        self._lock = threading.Lock()

    @staticmethod
    def _key(text: str) -> str:
        return hashlib.sha256(text.encode("utf-8")).hexdigest()

    def _post(self, texts: list[str]) -> list:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        body = json.dumps({"texts": texts}).encode("utf-8")
        last = None
        for attempt in range(self.max_retries + 1):
            if attempt:
                self.sleep(self.backoff * 2 ** (attempt - 1))
            self.requests += 1
            try:
                status, payload = self.transport(self.endpoint, body, headers)
            except OSError as exc:
                last = f"network error: {exc}"
                continue
            if status in self.RETRY_STATUS:
                last = f"HTTP {status}"
                continue
            if status != 200:
                raise EmbeddingError(f"{self.endpoint}: HTTP {status}")
            try:
                vectors = json.loads(payload)["vectors"]
            except (ValueError, KeyError, TypeError) as exc:
                raise EmbeddingError(f"{self.endpoint}: malformed response: {exc}") from exc
            if len(vectors) != len(texts):
                raise EmbeddingError(f"{self.endpoint}: {len(vectors)} vectors for {len(texts)} texts")
            return vectors
        raise EmbeddingError(f"{self.endpoint}: giving up after {self.max_retries + 1} attempts ({last})")

    def embed_many(self, texts: list[str]) -> list[np.ndarray]:
        with self._lock:
            missing = list(dict.fromkeys(t for t in texts if self._key(t) not in self._cache))
        if missing:
            for text, raw in zip(missing, self._post(missing)):
                vec = np.asarray(raw, dtype=float)
                if vec.ndim != 1 or not np.isfinite(vec).all():
                    raise EmbeddingError(f"{self.endpoint}: bad vector for {text[:40]!r}")
                with self._lock:
                    if self.dimension is None:
                        self.dimension = vec.shape[0]
                    elif vec.shape[0] != self.dimension:
                        raise EmbeddingError(
                            f"{self.endpoint}: dimension changed from {self.dimension} to {vec.shape[0]}")
                    self._cache.setdefault(self._key(text), vec)
        with self._lock:
            return [self._cache[self._key(t)] for t in texts]

    def embed(self, text: str) -> np.ndarray:
        return self.embed_many([text])[0]


def http_vector_provider(endpoint: str, auth: str | None = None, **kwargs) -> HttpVectorProvider:
    """Provider for an embedding service; the token defaults to ``EMBED_API_KEY``."""
    if auth is None:
        auth = os.environ.get("EMBED_API_KEY")
    return HttpVectorProvider(endpoint, auth, **kwargs)
