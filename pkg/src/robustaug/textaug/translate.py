"""Pluggable translation clients and the back-translation operator.

Wire contract for real services: HTTP POST of JSON
``{"text", "source_lang", "target_lang"}`` returning ``{"text"}``. Stub
clients keep runs offline and deterministic; round trips are cached by
(text, languages, translator identity) in a JSONL file.
"""

from __future__ import annotations

import json
import re
import threading
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Protocol

from ..errors import TransportError
from .lexicon import Lexicon
from .tokens import TokenSeq, detokenize, tokenize


class TranslatorClient(Protocol):
    identity: str

    def translate(self, text: str, source_lang: str, target_lang: str) -> str: ...


class IdentityTranslator:
    """Offline stub: every translation is the text itself."""

    identity = "identity"

    def translate(self, text: str, source_lang: str, target_lang: str) -> str:
        return text


class DictionaryTranslator:
    """Offline stub with word-level substitution tables per direction."""

    def __init__(self, forward: dict[str, str], backward: dict[str, str], pivot: str = "xx"):
        self.forward = {k.lower(): v for k, v in forward.items()}
        self.backward = {k.lower(): v for k, v in backward.items()}
        self.pivot = pivot
        self.identity = f"dictionary:{pivot}"

    def _substitute(self, text: str, table: dict[str, str]) -> str:
        return re.sub(
            r"[A-Za-z']+",
            lambda m: table.get(m.group(0).lower(), m.group(0)),
            text,
        )

    def translate(self, text: str, source_lang: str, target_lang: str) -> str:
        if target_lang == self.pivot:
            return self._substitute(text, self.forward)
        return self._substitute(text, self.backward)


class HttpTranslator:
    """Minimal JSON-over-HTTP client for the translator wire contract."""

    def __init__(self, endpoint: str, timeout: float = 10.0):
        self.endpoint = endpoint
        self.timeout = timeout
        self.identity = f"http:{endpoint}"

    def translate(self, text: str, source_lang: str, target_lang: str) -> str:
        payload = json.dumps(
            {"text": text, "source_lang": source_lang, "target_lang": target_lang}
        ).encode("utf-8")
        request = urllib.request.Request(
            self.endpoint, data=payload, headers={"Content-Type": "application/json"}
        )
        try:
            with urllib.request.urlopen(request, timeout=self.timeout) as response:
                body = json.loads(response.read().decode("utf-8"))
        except (urllib.error.URLError, OSError, json.JSONDecodeError, TimeoutError) as exc:
            raise TransportError(f"translator at {self.endpoint} unreachable: {exc}", text) from exc
        if "text" not in body:
            raise TransportError(f"translator at {self.endpoint} returned no 'text' field", text)
        return body["text"]


class TranslationCache:
    """JSONL-persisted cache keyed by (text, source, target, translator)."""

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path else None
        self._data: dict[tuple[str, str, str, str], str] = {}
        self._lock = threading.Lock()
        if self.path and self.path.exists():
            with open(self.path, "r", encoding="utf-8") as f:
                for line in f:
                    if not line.strip():
                        continue
                    record = json.loads(line)
                    key = (record["text"], record["source"], record["target"], record["translator"])
                    self._data[key] = record["result"]

    def get(self, text, source, target, translator_id):
        with self._lock:
            return self._data.get((text, source, target, translator_id))

    def put(self, text, source, target, translator_id, result) -> None:
        with self._lock:
            key = (text, source, target, translator_id)
            if key in self._data:
                return
            self._data[key] = result
            if self.path:
                record = {
                    "text": text,
                    "source": source,
                    "target": target,
                    "translator": translator_id,
                    "result": result,
                }
                with open(self.path, "a", encoding="utf-8") as f:
                    f.write(json.dumps(record, sort_keys=True) + "\n")

    def __len__(self):
        return len(self._data)


def _translate_cached(translator, cache, text, source, target):
    if cache is not None:
        hit = cache.get(text, source, target, translator.identity)
        if hit is not None:
            return hit
    result = translator.translate(text, source, target)
    if cache is not None:
        cache.put(text, source, target, translator.identity, result)
    return result


def back_translate(
    seq: TokenSeq,
    translator: TranslatorClient,
    pivot_language: str = "de",
    seed: int = 0,
    source_language: str = "en",
    cache: TranslationCache | None = None,
    lexicon: Lexicon | None = None,
) -> TokenSeq:
    """Round-trip the sentence through a pivot language and re-tokenize.

    The result's meta records the translator identity and pivot for
    provenance. Deterministic translators ignore the seed.
    """
    del seed
    text = detokenize(seq)
    pivot_text = _translate_cached(translator, cache, text, source_language, pivot_language)
    back_text = _translate_cached(translator, cache, pivot_text, pivot_language, source_language)
    out = tokenize(back_text, lexicon)
    return TokenSeq(
        out.tokens,
        out.original_text,
        {"translator": translator.identity, "pivot": pivot_language},
    )


def back_translate_many(
    seqs,
    translator: TranslatorClient,
    pivot_language: str = "de",
    max_in_flight: int = 4,
    cache: TranslationCache | None = None,
    lexicon: Lexicon | None = None,
):
    """Back-translate a batch with a bounded number of in-flight requests."""
    with ThreadPoolExecutor(max_workers=max(1, max_in_flight)) as pool:
        futures = [
            pool.submit(back_translate, s, translator, pivot_language, 0, "en", cache, lexicon)
            for s in seqs
        ]
        return [f.result() for f in futures]
