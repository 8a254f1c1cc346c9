"""Token sequence model, tokenizer, and detokenizer."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import EmptySentenceError

POS_TAGS = ("noun", "verb", "be_verb", "article", "adjective", "other")

_TOKEN_RE = re.compile(r"[A-Za-z0-9]+(?:['’-][A-Za-z0-9]+)*|[^\sA-Za-z0-9]")
_WORD_RE = re.compile(r"[A-Za-z0-9]")


@dataclass(frozen=True)
class Token:
    surface: str
    pos: str
    lemma: str

    def is_word(self) -> bool:
        return bool(_WORD_RE.search(self.surface))


@dataclass(frozen=True)
class TokenSeq:
    tokens: tuple[Token, ...]
    original_text: str
    meta: dict = field(default_factory=dict, compare=False)

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]


def tokenize(text: str, lexicon=None) -> TokenSeq:
    """Split ``text`` into word/punctuation tokens and tag each one.

    Tags come from the lexicon (frequency-ranked) with suffix-rule fallback;
    punctuation tokens are tagged ``other``.
    """
    from .lexicon import default_lexicon

    if text is None or not text.strip():
        raise EmptySentenceError("cannot tokenize an empty sentence")
    lexicon = lexicon or default_lexicon()
    tokens = []
    for surface in _TOKEN_RE.findall(text):
        if _WORD_RE.search(surface):
            pos, lemma = lexicon.analyze(surface)
        else:
            pos, lemma = "other", surface
        tokens.append(Token(surface, pos, lemma))
    return TokenSeq(tuple(tokens), text)


def detokenize(seq: TokenSeq) -> str:
    """Join tokens with single spaces, attach punctuation, and restore
    sentence-initial capitalization."""
    parts: list[str] = []
    first_word_fixed = False
    for token in seq.tokens:
        surface = token.surface
        if not first_word_fixed and surface[:1].isalpha():
            if surface[0].islower():
                surface = surface[0].upper() + surface[1:]
            first_word_fixed = True
        if parts and not token.is_word():
            parts[-1] += surface
        else:
            parts.append(surface)
    return " ".join(parts)


def rebuild(tokens: list[Token], meta: dict | None = None) -> TokenSeq:
    """Make a TokenSeq whose text is the rendering of ``tokens``.

    The first alphabetic token is re-capitalized in the token list too, so
    surfaces and rendered text stay consistent after deletions/replacements.
    """
    fixed = list(tokens)
    for i, token in enumerate(fixed):
        if token.surface[:1].isalpha():
            if token.surface[0].islower():
                fixed[i] = Token(
                    token.surface[0].upper() + token.surface[1:], token.pos, token.lemma
                )
            break
    seq = TokenSeq(tuple(fixed), "")
    text = detokenize(seq)
    return TokenSeq(tuple(fixed), text, meta or {})
