"""The six semantic-preserving text augmentation operators.

Each operator is pure given (sequence, seed, lexicon/thesaurus snapshot):
it touches only tokens of its target class and returns a new TokenSeq whose
text is the re-rendered sentence.
"""

from __future__ import annotations

from ..seeds import rng_from_seed
from .lexicon import BE_FORMS, Lexicon, default_lexicon
from .thesaurus import Thesaurus, default_thesaurus
from .tokens import Token, TokenSeq, rebuild

TEXT_AUG_KINDS = (
    "synonym_replacement",
    "article_removal",
    "back_translation",
    "be_verb_error",
    "verb_tense_error",
    "singular_plural_error",
)

_ARTICLES = {"a", "an", "the"}
_CONTENT_POS = {"noun", "verb", "adjective"}

_AN_WORDS = {"hour", "honest", "honor", "honour", "heir"}
_A_PREFIXES = ("uni", "use", "user", "one", "once", "eu")


def _match_case(template: str, word: str) -> str:
    if template[:1].isupper():
        return word[:1].upper() + word[1:]
    return word


def indefinite_article(word: str) -> str:
    """'a' or 'an' by first-sound heuristic."""
    w = word.lower()
    if w in _AN_WORDS:
        return "an"
    if w.startswith(_A_PREFIXES):
        return "a"
    return "an" if w[:1] in "aeiou" else "a"


def article_removal(seq: TokenSeq) -> TokenSeq:
    """Drop every article token; everything else passes through in order."""
    kept = [t for t in seq.tokens if not (t.pos == "article" and t.surface.lower() in _ARTICLES)]
    return rebuild(kept)


def be_verb_error(seq: TokenSeq, seed: int) -> TokenSeq:
    """Swap each be-verb for a uniformly chosen different be-verb."""
    rng = rng_from_seed(seed)
    out = []
    for token in seq.tokens:
        if token.pos == "be_verb":
            others = [b for b in BE_FORMS if b != token.surface.lower()]
            pick = others[int(rng.integers(len(others)))]
            out.append(Token(_match_case(token.surface, pick), "be_verb", "be"))
        else:
            out.append(token)
    return rebuild(out)


def verb_tense_error(seq: TokenSeq, seed: int, lexicon: Lexicon | None = None) -> TokenSeq:
    """Swap each verb (be-verbs included) for a conjugate form of its lemma.

    The sampling domain includes the current form, so a verb may come back
    unchanged.
    """
    lexicon = lexicon or default_lexicon()
    rng = rng_from_seed(seed)
    out = []
    for token in seq.tokens:
        if token.pos in ("verb", "be_verb"):
            forms = lexicon.verb_forms(token.lemma)
            pick = forms[int(rng.integers(len(forms)))]
            out.append(Token(_match_case(token.surface, pick), token.pos, token.lemma))
        else:
            out.append(token)
    return rebuild(out)


def singular_plural_error(seq: TokenSeq, seed: int, lexicon: Lexicon | None = None) -> TokenSeq:
    """Toggle the number of every noun; articles are left alone on purpose."""
    lexicon = lexicon or default_lexicon()
    del seed  # deterministic toggle; kept for a uniform operator signature
    out = []
    for token in seq.tokens:
        if token.pos == "noun":
            if lexicon.is_plural(token.surface, token.lemma):
                pick = lexicon.singularize(token.surface)
            else:
                pick = lexicon.pluralize(token.surface)
            out.append(Token(_match_case(token.surface, pick), "noun", token.lemma))
        else:
            out.append(token)
    return rebuild(out)


def synonym_replacement(
    seq: TokenSeq,
    thesaurus: Thesaurus | None = None,
    rate: float = 0.3,
    seed: int = 0,
) -> TokenSeq:
    """Replace content words with thesaurus synonyms.

    Each candidate is replaced with probability ``rate``; when none gets
    selected but candidates exist, one is forced so the sentence always
    changes. An 'a'/'an' directly before a replaced word is re-agreed with
    the new word's first sound.
    """
    thesaurus = thesaurus or default_thesaurus()
    rng = rng_from_seed(seed)
    tokens = list(seq.tokens)
    candidates = [
        i
        for i, t in enumerate(tokens)
        if t.pos in _CONTENT_POS and thesaurus.lookup(t.surface, t.pos)
    ]
    if not candidates:
        return rebuild(tokens)
    selected = [i for i in candidates if rng.random() < rate]
    if not selected:
        selected = [candidates[int(rng.integers(len(candidates)))]]
    replaced = set()
    for i in selected:
        options = thesaurus.lookup(tokens[i].surface, tokens[i].pos)
        pick = options[int(rng.integers(len(options)))]
        tokens[i] = Token(_match_case(tokens[i].surface, pick), tokens[i].pos, pick.lower())
        replaced.add(i)
    for i in replaced:
        j = i - 1
        if j >= 0 and tokens[j].pos == "article" and tokens[j].surface.lower() in ("a", "an"):
            article = indefinite_article(tokens[i].surface)
            tokens[j] = Token(_match_case(tokens[j].surface, article), "article", article)
    return rebuild(tokens)
