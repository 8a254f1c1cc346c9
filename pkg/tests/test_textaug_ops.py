"""Operator contracts and the golden caption pairs.

For the stochastic operators the check is membership of the enumerated
admissible-outcome set, which must also contain the published outputs.
"""

import itertools

import pytest

from robustaug.textaug import (
    article_removal,
    be_verb_error,
    default_lexicon,
    default_thesaurus,
    detokenize,
    indefinite_article,
    singular_plural_error,
    synonym_replacement,
    tokenize,
    verb_tense_error,
)
from robustaug.textaug.thesaurus import Thesaurus
from robustaug.textaug.tokens import Token, rebuild

SENTENCE_1 = "A male is wearing an orange hat and glasses."
SENTENCE_1B = "A male wears an orange hat and glasses."
SENTENCE_2 = "A man on a ladder cleans the window of a tall building."


# --- article removal (deterministic, exact golden) -------------------------


def test_article_removal_golden_one():
    assert article_removal(tokenize(SENTENCE_1)).original_text == "Male is wearing orange hat and glasses."


def test_article_removal_golden_two():
    assert article_removal(tokenize(SENTENCE_2)).original_text == "Man on ladder cleans window of tall building."


def test_article_removal_without_articles_is_noop():
    seq = tokenize("Dogs run fast.")
    assert article_removal(seq).original_text == "Dogs run fast."


def test_article_removal_only_deletes_articles():
    seq = tokenize(SENTENCE_2)
    out = article_removal(seq)
    kept = [s.lower() for s in out.surfaces()]
    original = [s.lower() for s in seq.surfaces()]
    for word in kept:
        original.remove(word)  # kept tokens appear in order in the original
    assert set(original) <= {"a", "an", "the"}


# --- be verb error ----------------------------------------------------------


def test_be_verb_error_reaches_published_output():
    seq = tokenize(SENTENCE_1)
    outputs = {be_verb_error(seq, seed).original_text for seed in range(64)}
    assert "A male am wearing an orange hat and glasses." in outputs


def test_be_verb_error_always_differs():
    seq = tokenize(SENTENCE_1)
    for seed in range(40):
        out = be_verb_error(seq, seed)
        assert out.tokens[2].surface.lower() != "is"
        assert out.tokens[2].surface.lower() in {"am", "are", "was", "were", "be", "been", "being"}


def test_be_verb_error_no_be_verbs_noop():
    seq = tokenize(SENTENCE_2)
    assert be_verb_error(seq, 3).original_text == SENTENCE_2


def test_be_verb_error_touches_only_be_verbs():
    seq = tokenize(SENTENCE_1)
    out = be_verb_error(seq, 11)
    for before, after in zip(seq.tokens, out.tokens):
        if before.pos != "be_verb":
            assert before.surface == after.surface


# --- verb tense error -------------------------------------------------------


def _tense_admissible(sentence):
    lexicon = default_lexicon()
    seq = tokenize(sentence)
    per_position = []
    for token in seq.tokens:
        if token.pos in ("verb", "be_verb"):
            forms = lexicon.verb_forms(token.lemma)
            per_position.append([(token, f) for f in forms])
        else:
            per_position.append([(token, None)])
    outcomes = set()
    for combo in itertools.product(*per_position):
        tokens = []
        for token, form in combo:
            if form is None:
                tokens.append(token)
            else:
                surface = form if token.surface[:1].islower() else form.capitalize()
                tokens.append(Token(surface, token.pos, token.lemma))
        outcomes.add(rebuild(tokens).original_text)
    return outcomes


def test_verb_tense_published_outputs_admissible():
    assert "A male was wearing an orange hat and glasses." in _tense_admissible(SENTENCE_1)
    assert "A man on a ladder cleaned the window of a tall building." in _tense_admissible(SENTENCE_2)


@pytest.mark.parametrize("sentence", [SENTENCE_1, SENTENCE_2])
def test_verb_tense_outputs_in_admissible_set(sentence):
    admissible = _tense_admissible(sentence)
    seq = tokenize(sentence)
    for seed in range(60):
        assert verb_tense_error(seq, seed).original_text in admissible


def test_verb_tense_same_lemma_contract():
    seq = tokenize(SENTENCE_2)
    for seed in range(30):
        out = verb_tense_error(seq, seed)
        for before, after in zip(seq.tokens, out.tokens):
            if before.pos == "verb":
                assert after.lemma == before.lemma
            else:
                assert after.surface == before.surface


# --- singular/plural error (deterministic toggle) ---------------------------


def test_singular_plural_golden_one():
    out = singular_plural_error(tokenize(SENTENCE_1B), 0)
    assert out.original_text == "A male wears an orange hats and glass."


def test_singular_plural_golden_two():
    out = singular_plural_error(tokenize(SENTENCE_2), 0)
    assert out.original_text == "A men on a ladders cleans the windows of a tall buildings."


def test_singular_plural_involution_regular():
    seq = tokenize("A dog chases the ball near a fence.")
    twice = singular_plural_error(singular_plural_error(seq, 0), 0)
    assert twice.original_text == seq.original_text


def test_singular_plural_touches_only_nouns():
    seq = tokenize(SENTENCE_2)
    out = singular_plural_error(seq, 0)
    for before, after in zip(seq.tokens, out.tokens):
        if before.pos != "noun":
            assert before.surface == after.surface


# --- synonym replacement ----------------------------------------------------


def _synonym_admissible(sentence):
    """All reachable outputs: nonempty replacement subsets x synonym choices,
    with indefinite-article agreement applied."""
    thesaurus = default_thesaurus()
    seq = tokenize(sentence)
    candidates = [
        i
        for i, t in enumerate(seq.tokens)
        if t.pos in ("noun", "verb", "adjective") and thesaurus.lookup(t.surface, t.pos)
    ]
    outcomes = set()
    for r in range(1, len(candidates) + 1):
        for subset in itertools.combinations(candidates, r):
            option_lists = [thesaurus.lookup(seq.tokens[i].surface, seq.tokens[i].pos) for i in subset]
            for choice in itertools.product(*option_lists):
                tokens = list(seq.tokens)
                for i, pick in zip(subset, choice):
                    surface = pick if tokens[i].surface[:1].islower() else pick.capitalize()
                    tokens[i] = Token(surface, tokens[i].pos, pick)
                for i in subset:
                    j = i - 1
                    if j >= 0 and tokens[j].surface.lower() in ("a", "an"):
                        article = indefinite_article(tokens[i].surface)
                        if tokens[j].surface[:1].isupper():
                            article = article.capitalize()
                        tokens[j] = Token(article, "article", article.lower())
                outcomes.add(rebuild(tokens).original_text)
    return outcomes


def test_synonym_published_outputs_admissible():
    assert "A guy is wearing a tangerine cap and glasses." in _synonym_admissible(SENTENCE_1)
    assert "A male on a ravel cleans the window of a tall building." in _synonym_admissible(SENTENCE_2)


@pytest.mark.parametrize("sentence", [SENTENCE_1, SENTENCE_2])
def test_synonym_outputs_in_admissible_set(sentence):
    admissible = _synonym_admissible(sentence)
    seq = tokenize(sentence)
    for seed in range(60):
        assert synonym_replacement(seq, rate=0.3, seed=seed).original_text in admissible


def test_synonym_replacements_come_from_thesaurus():
    thesaurus = default_thesaurus()
    seq = tokenize(SENTENCE_1)
    for seed in range(30):
        out = synonym_replacement(seq, rate=0.5, seed=seed)
        for before, after in zip(seq.tokens, out.tokens):
            if before.surface != after.surface and before.pos in ("noun", "verb", "adjective"):
                assert after.surface.lower() in thesaurus.lookup(before.surface, before.pos)


def test_synonym_single_entry_thesaurus_forced():
    thesaurus = Thesaurus(["hat\tnoun\tcap"])
    seq = tokenize(SENTENCE_1)
    out = synonym_replacement(seq, thesaurus, rate=1.0, seed=4)
    changed = [
        (b.surface, a.surface) for b, a in zip(seq.tokens, out.tokens) if b.surface != a.surface
    ]
    assert changed == [("hat", "cap")]


def test_synonym_forces_at_least_one_replacement():
    seq = tokenize(SENTENCE_1)
    for seed in range(30):
        out = synonym_replacement(seq, rate=0.01, seed=seed)
        assert out.original_text != SENTENCE_1


def test_synonym_no_candidates_noop():
    thesaurus = Thesaurus(["xyzzy\tnoun\tplugh"])
    seq = tokenize(SENTENCE_1)
    out = synonym_replacement(seq, thesaurus, rate=1.0, seed=0)
    assert out.original_text == SENTENCE_1


def test_synonym_preserves_capitalization():
    thesaurus = Thesaurus(["male\tnoun\tguy"])
    seq = tokenize("Male is wearing orange hat.")
    out = synonym_replacement(seq, thesaurus, rate=1.0, seed=0)
    assert out.tokens[0].surface == "Guy"


# --- cross-operator invariants ----------------------------------------------


@pytest.mark.parametrize(
    "op",
    [
        lambda s, seed: be_verb_error(s, seed),
        lambda s, seed: verb_tense_error(s, seed),
        lambda s, seed: singular_plural_error(s, seed),
        lambda s, seed: synonym_replacement(s, rate=0.4, seed=seed),
    ],
)
def test_token_count_preserved(op):
    seq = tokenize(SENTENCE_1)
    for seed in (0, 1, 2):
        assert len(op(seq, seed).tokens) == len(seq.tokens)


@pytest.mark.parametrize(
    "op",
    [
        lambda s: be_verb_error(s, 7),
        lambda s: verb_tense_error(s, 7),
        lambda s: singular_plural_error(s, 7),
        lambda s: synonym_replacement(s, rate=0.4, seed=7),
        article_removal,
    ],
)
def test_operator_determinism(op):
    seq = tokenize(SENTENCE_2)
    assert op(seq).original_text == op(seq).original_text


def test_indefinite_article_heuristic():
    assert indefinite_article("tangerine") == "a"
    assert indefinite_article("orange") == "an"
    assert indefinite_article("hour") == "an"
    assert indefinite_article("university") == "a"
