"""Semantic-preserving text augmentation over annotated token sequences."""

from __future__ import annotations

from ..errors import InvalidSpecError
from .lexicon import BE_FORMS, Lexicon, default_lexicon
from .ops import (
    TEXT_AUG_KINDS,
    article_removal,
    be_verb_error,
    indefinite_article,
    singular_plural_error,
    synonym_replacement,
    verb_tense_error,
)
from .thesaurus import Thesaurus, default_thesaurus
from .tokens import Token, TokenSeq, detokenize, tokenize
from .translate import (
    DictionaryTranslator,
    HttpTranslator,
    IdentityTranslator,
    TranslationCache,
    TranslatorClient,
    back_translate,
    back_translate_many,
)


def augment_text(
    text_or_seq,
    kind: str,
    seed: int = 0,
    *,
    lexicon: Lexicon | None = None,
    thesaurus: Thesaurus | None = None,
    translator: TranslatorClient | None = None,
    pivot_language: str = "de",
    rate: float = 0.3,
    cache: TranslationCache | None = None,
) -> TokenSeq:
    """Apply one augmentation kind to a sentence or TokenSeq."""
    if kind not in TEXT_AUG_KINDS:
        raise InvalidSpecError(
            f"unknown text augmentation kind {kind!r}; valid kinds: {', '.join(TEXT_AUG_KINDS)}"
        )
    seq = text_or_seq if isinstance(text_or_seq, TokenSeq) else tokenize(text_or_seq, lexicon)
    if kind == "synonym_replacement":
        return synonym_replacement(seq, thesaurus, rate, seed)
    if kind == "article_removal":
        return article_removal(seq)
    if kind == "back_translation":
        return back_translate(seq, translator or IdentityTranslator(), pivot_language, seed, cache=cache, lexicon=lexicon)
    if kind == "be_verb_error":
        return be_verb_error(seq, seed)
    if kind == "verb_tense_error":
        return verb_tense_error(seq, seed, lexicon)
    return singular_plural_error(seq, seed, lexicon)


__all__ = [
    "BE_FORMS",
    "TEXT_AUG_KINDS",
    "DictionaryTranslator",
    "HttpTranslator",
    "IdentityTranslator",
    "Lexicon",
    "Thesaurus",
    "Token",
    "TokenSeq",
    "TranslationCache",
    "TranslatorClient",
    "article_removal",
    "augment_text",
    "back_translate",
    "back_translate_many",
    "be_verb_error",
    "default_lexicon",
    "default_thesaurus",
    "detokenize",
    "indefinite_article",
    "singular_plural_error",
    "synonym_replacement",
    "tokenize",
    "verb_tense_error",
]
