"""Thesaurus: surface word -> same-pos synonym lists.

File format is a 3-column TSV: word, pos, comma-separated synonyms. A word
may carry entries for several pos tags; lookup prefers the matching tag and
falls back to the union.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from ..errors import SchemaError


class Thesaurus:
    def __init__(self, lines):
        self._entries: dict[str, dict[str, tuple[str, ...]]] = {}
        self._parse(lines)
        self.validate()

    @classmethod
    def from_file(cls, path) -> "Thesaurus":
        with open(path, "r", encoding="utf-8") as f:
            return cls(f.readlines())

    def _parse(self, lines) -> None:
        for lineno, raw in enumerate(lines, 1):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 3:
                raise SchemaError(f"thesaurus line {lineno}: expected 3 tab-separated columns")
            word = cols[0].strip().lower()
            pos = cols[1].strip()
            synonyms = tuple(s.strip() for s in cols[2].split(",") if s.strip())
            self._entries.setdefault(word, {})[pos] = synonyms

    def validate(self) -> None:
        for word, by_pos in self._entries.items():
            for pos, synonyms in by_pos.items():
                if word in synonyms:
                    raise SchemaError(f"thesaurus word {word!r} lists itself as a synonym")
                if not synonyms:
                    raise SchemaError(f"thesaurus word {word!r} ({pos}) has an empty synonym list")

    def lookup(self, word: str, pos: str | None = None) -> tuple[str, ...]:
        """Synonyms for a surface word; empty tuple when absent."""
        by_pos = self._entries.get(word.lower())
        if not by_pos:
            return ()
        if pos and pos in by_pos:
            return by_pos[pos]
        merged: list[str] = []
        for synonyms in by_pos.values():
            for s in synonyms:
                if s not in merged:
                    merged.append(s)
        return tuple(merged)

    def words(self) -> tuple[str, ...]:
        return tuple(self._entries)


@lru_cache(maxsize=1)
def default_thesaurus() -> Thesaurus:
    text = resources.files("robustaug").joinpath("data/thesaurus.tsv").read_text("utf-8")
    return Thesaurus(text.splitlines())
