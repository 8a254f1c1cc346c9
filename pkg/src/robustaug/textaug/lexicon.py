"""Lexicon-backed POS identification and English inflection rules.

The lexicon file is a 4-column TSV: surface, comma-separated ranked tags,
lemma, and ``;``-separated ``key=value`` inflection hints. Unknown words
fall back to suffix rules (-s/-es plural nouns, -ed/-ing verbs) and the
fallback is logged once per word.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from importlib import resources

from ..errors import SchemaError

logger = logging.getLogger(__name__)

BE_FORMS = ("be", "am", "is", "are", "was", "were", "been", "being")

_VOWELS = "aeiou"

# nouns whose -f/-fe becomes -ves
_F_TO_VES = {
    "leaf": "leaves",
    "wolf": "wolves",
    "knife": "knives",
    "life": "lives",
    "shelf": "shelves",
    "loaf": "loaves",
    "calf": "calves",
    "half": "halves",
    "scarf": "scarves",
    "thief": "thieves",
}
_VES_TO_F = {v: k for k, v in _F_TO_VES.items()}

# -o nouns that take -es
_O_TO_OES = {"potato", "tomato", "hero", "echo", "torpedo", "veto"}


def regular_plural(word: str) -> str:
    if word in _F_TO_VES:
        return _F_TO_VES[word]
    if word.endswith(("s", "x", "z", "ch", "sh")):
        return word + "es"
    if word.endswith("y") and len(word) > 1 and word[-2] not in _VOWELS:
        return word[:-1] + "ies"
    if word in _O_TO_OES:
        return word + "es"
    return word + "s"


def regular_singular(word: str) -> str:
    if word in _VES_TO_F:
        return _VES_TO_F[word]
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith("es"):
        stem = word[:-2]
        # bare -s stems (horses -> horse) must NOT lose the e, so only
        # strip -es after sibilant clusters that force it
        if stem.endswith(("ss", "x", "z", "ch", "sh")) or stem in _O_TO_OES:
            return stem
    if word.endswith("s") and not word.endswith("ss"):
        return word[:-1]
    return word


def regular_3sg(lemma: str) -> str:
    if lemma.endswith(("s", "x", "z", "ch", "sh", "o")):
        return lemma + "es"
    if lemma.endswith("y") and len(lemma) > 1 and lemma[-2] not in _VOWELS:
        return lemma[:-1] + "ies"
    return lemma + "s"


def regular_past(lemma: str) -> str:
    if lemma.endswith("e"):
        return lemma + "d"
    if lemma.endswith("y") and len(lemma) > 1 and lemma[-2] not in _VOWELS:
        return lemma[:-1] + "ied"
    return lemma + "ed"


def regular_gerund(lemma: str) -> str:
    if lemma.endswith("ie"):
        return lemma[:-2] + "ying"
    if lemma.endswith("e") and not lemma.endswith(("ee", "oe", "ye")):
        return lemma[:-1] + "ing"
    return lemma + "ing"


class Lexicon:
    """In-memory lexicon: ranked tags, lemmas, and inflection tables."""

    def __init__(self, lines):
        self.tags: dict[str, tuple[str, ...]] = {}
        self.lemmas: dict[str, str] = {}
        self.plural_of: dict[str, str] = {}
        self.verb_rows: dict[str, dict[str, str]] = {}
        self.invariant_verbs: set[str] = set()
        self._plural_forms: set[str] = set()
        self._fallback_logged: set[str] = set()
        self._parse(lines)
        self.validate()

    @classmethod
    def from_file(cls, path) -> "Lexicon":
        with open(path, "r", encoding="utf-8") as f:
            return cls(f.readlines())

    def _parse(self, lines) -> None:
        for lineno, raw in enumerate(lines, 1):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) < 3:
                raise SchemaError(f"lexicon line {lineno}: expected 4 tab-separated columns")
            surface = cols[0].strip().lower()
            tags = tuple(t.strip() for t in cols[1].split(",") if t.strip())
            lemma = cols[2].strip().lower()
            hints = {}
            if len(cols) > 3 and cols[3].strip():
                for pair in cols[3].split(";"):
                    if "=" in pair:
                        key, value = pair.split("=", 1)
                        hints[key.strip()] = value.strip()
            self.tags[surface] = tags
            self.lemmas[surface] = lemma
            if hints.get("num") == "pl":
                self._plural_forms.add(surface)
            if "pl" in hints:
                self.plural_of[surface] = hints["pl"]
            if "verb" in tags:
                row = self.verb_rows.setdefault(lemma, {})
                for key in ("s3", "past", "part", "ger"):
                    if key in hints:
                        row[key] = hints[key]
                if hints.get("inv") == "1":
                    self.invariant_verbs.add(lemma)

    def validate(self) -> None:
        # regular nouns must round-trip through pluralize/singularize
        for word, tags in self.tags.items():
            if "noun" not in tags or word in self._plural_forms:
                continue
            if self.lemmas[word] != word:
                continue
            if word in self.plural_of:
                continue  # irregular, handled by the explicit pair
            if self.singularize(self.pluralize(word)) != word:
                raise SchemaError(f"lexicon noun {word!r} breaks pluralize/singularize round trip")
        # verb rows: past/participle must differ from the lemma unless flagged
        for lemma, row in self.verb_rows.items():
            if lemma == "be":
                continue
            forms = self.conjugations(lemma)
            for key in ("past", "part"):
                if forms[key] == lemma and lemma not in self.invariant_verbs:
                    raise SchemaError(
                        f"verb {lemma!r} has {key} equal to its lemma but is not flagged invariant"
                    )

    # --- tagging ---------------------------------------------------------

    def analyze(self, surface: str) -> tuple[str, str]:
        """Return (pos, lemma) for a surface word; first-ranked tag wins."""
        word = surface.lower()
        if word in self.tags:
            return self.tags[word][0], self.lemmas[word]
        pos_lemma = self._suffix_analyze(word)
        if pos_lemma is not None:
            return pos_lemma
        if word not in self._fallback_logged:
            self._fallback_logged.add(word)
            logger.debug("lexicon fallback: %r tagged as noun", word)
        return "noun", word

    def _lookup_verb_stem(self, *candidates):
        for stem in candidates:
            if stem and stem in self.tags and "verb" in self.tags[stem]:
                return self.lemmas[stem]
        return None

    def _suffix_analyze(self, word: str):
        if word.endswith("ing") and len(word) > 4:
            base = word[:-3]
            undoubled = base[:-1] if len(base) > 2 and base[-1] == base[-2] else None
            lemma = self._lookup_verb_stem(base, base + "e", undoubled)
            if lemma:
                return "verb", lemma
        if word.endswith("ed") and len(word) > 3:
            base = word[:-2]
            undoubled = base[:-1] if len(base) > 2 and base[-1] == base[-2] else None
            ied = word[:-3] + "y" if word.endswith("ied") else None
            lemma = self._lookup_verb_stem(base, word[:-1], undoubled, ied)
            if lemma:
                return "verb", lemma
        if word.endswith("s") and not word.endswith("ss") and len(word) > 2:
            stem = self.singularize(word)
            if stem != word and stem in self.tags:
                for tag in self.tags[stem]:
                    if tag == "noun":
                        return "noun", self.lemmas[stem]
                    if tag == "verb":
                        return "verb", self.lemmas[stem]
            if stem != word:
                return "noun", stem  # unknown plural-looking word
        return None

    # --- nouns -----------------------------------------------------------

    def is_plural(self, surface: str, lemma: str) -> bool:
        word = surface.lower()
        if word in self._plural_forms:
            return True
        return word != lemma.lower()

    def pluralize(self, noun: str) -> str:
        word = noun.lower()
        if word in self.plural_of:
            return self.plural_of[word]
        if word not in self.tags and word not in self._fallback_logged:
            self._fallback_logged.add(word)
            logger.debug("pluralize fallback to regular rules for %r", word)
        return regular_plural(word)

    def singularize(self, noun: str) -> str:
        word = noun.lower()
        if word in self._plural_forms:
            return self.lemmas[word]
        # prefer a stripped candidate the lexicon already knows as a noun
        candidates = []
        if word.endswith("ies") and len(word) > 4:
            candidates.append(word[:-3] + "y")
        if word in _VES_TO_F:
            candidates.append(_VES_TO_F[word])
        if word.endswith("es"):
            candidates.append(word[:-2])
        if word.endswith("s") and not word.endswith("ss"):
            candidates.append(word[:-1])
        for candidate in candidates:
            if candidate in self.tags and "noun" in self.tags[candidate]:
                return candidate
        return regular_singular(word)

    # --- verbs -----------------------------------------------------------

    def conjugations(self, lemma: str) -> dict[str, str]:
        """All conjugated forms of a verb lemma (regular rules + overrides)."""
        lemma = lemma.lower()
        if lemma == "be":
            return {"base": "be", "s3": "is", "past": "was", "part": "been", "ger": "being"}
        row = self.verb_rows.get(lemma)
        if row is None and lemma not in self._fallback_logged:
            self._fallback_logged.add(lemma)
            logger.debug("conjugation fallback to regular rules for %r", lemma)
        row = row or {}
        return {
            "base": lemma,
            "s3": row.get("s3", regular_3sg(lemma)),
            "past": row.get("past", regular_past(lemma)),
            "part": row.get("part", regular_past(lemma)),
            "ger": row.get("ger", regular_gerund(lemma)),
        }

    def verb_forms(self, lemma: str) -> tuple[str, ...]:
        """Distinct conjugate forms in a fixed order (the sampling domain)."""
        if lemma.lower() == "be":
            return BE_FORMS
        conj = self.conjugations(lemma)
        ordered = [conj["base"], conj["s3"], conj["past"], conj["part"], conj["ger"]]
        seen: list[str] = []
        for form in ordered:
            if form not in seen:
                seen.append(form)
        return tuple(seen)


@lru_cache(maxsize=1)
def default_lexicon() -> Lexicon:
    text = resources.files("robustaug").joinpath("data/lexicon.tsv").read_text("utf-8")
    return Lexicon(text.splitlines())
