"""Rule-based parsing of surface questions into query programs.

Rule order (first match wins):

  1. empty input                          -> EmptyQuery
  2. any unknown token                    -> UnknownToken
  3. "how many" NP "are there"/"do have"  -> COUNT (long)
  4. "how many" NP                        -> COUNT (short; EXTENDED only)
  5. "are there [any]" NP ["there"]       -> EXIST (long)
  6. "is there [any]" NP ["there"]        -> EXIST (long)
  7. "do have [any]" NP ["there"]         -> EXIST (long; "i" is a stopword)
  8. "any" NP                             -> EXIST (short; EXTENDED only)
  9. bare NP                              -> EXIST (short; EXTENDED only,
                                             one-word queries presume existence)

NP tokens bind filters by vocabulary kind (size, freshness, category,
class); generic subjects bind nothing. A category token alongside a class
token of that same category is accepted and the class wins; a cross
category pair is an InconsistentFilters error. Anything else inside an NP
is OutOfGrammar. ORIGINAL mode accepts only the long constructions, so
language(ORIGINAL) is a strict subset of language(EXTENDED).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .lexicon import Lexicon, default_lexicon
from .model import Category, Freshness, ObjectClass, Size, category_of
from .oracle import FilterSet, Head, QueryProgram


class GrammarMode(Enum):
    ORIGINAL = "original"
    EXTENDED = "extended"


GRAMMAR_KEYWORDS = frozenset({"are", "is", "there", "do", "have", "any", "how", "many"})

_PUNCTUATION = "?!.,;:'\"()[]/\\-—"
_PUNCT_TABLE = str.maketrans({ch: " " for ch in _PUNCTUATION})


class ParseError(Exception):
    pass


class OutOfGrammar(ParseError):
    pass


class UnknownToken(ParseError):
    def __init__(self, token: str):
        super().__init__(f"unknown token {token!r}")
        self.token = token


class InconsistentFilters(ParseError):
    pass


class EmptyQuery(ParseError):
    pass


@dataclass(frozen=True)
class TokenStream:
    """Canonical tokens after normalization; unknown ones are kept and flagged."""

    tokens: tuple[str, ...]
    unknown: tuple[str, ...] = ()


_PROPERTY_VOCAB: dict[str, tuple[str, object]] = {}
for _size in Size:
    _PROPERTY_VOCAB[_size.value] = ("size", _size)
for _fresh in Freshness:
    _PROPERTY_VOCAB[_fresh.value] = ("freshness", _fresh)
for _cat in Category:
    _PROPERTY_VOCAB[_cat.value] = ("category", _cat)
for _cls in ObjectClass:
    _PROPERTY_VOCAB[_cls.value] = ("class", _cls)


def normalize(text: str, lexicon: Lexicon | None = None) -> TokenStream:
    """Lowercase, strip punctuation and stopwords, merge multi-word
    surfaces, and map synonyms/plurals to canonical tokens."""
    lexicon = lexicon or default_lexicon()
    words = [
        w
        for w in text.lower().translate(_PUNCT_TABLE).split()
        if w not in lexicon.stopwords
    ]
    max_words = lexicon.max_phrase_words()
    tokens: list[str] = []
    unknown: list[str] = []
    i = 0
    while i < len(words):
        merged = None
        for k in range(min(max_words, len(words) - i), 1, -1):
            merged = lexicon.phrase_canonical(" ".join(words[i : i + k]))
            if merged is not None:
                tokens.append(merged)
                i += k
                break
        if merged is not None:
            continue
        word = words[i]
        canonical = lexicon.canonical_for(word)
        if canonical is not None:
            tokens.append(canonical)
        elif word in GRAMMAR_KEYWORDS:
            tokens.append(word)
        else:
            tokens.append(word)
            unknown.append(word)
        i += 1
    return TokenStream(tokens=tuple(tokens), unknown=tuple(unknown))


def parse(
    stream: TokenStream,
    mode: GrammarMode = GrammarMode.EXTENDED,
    lexicon: Lexicon | None = None,
) -> QueryProgram:
    lexicon = lexicon or default_lexicon()
    if not stream.tokens:
        raise EmptyQuery("nothing left after normalization")
    if stream.unknown:
        raise UnknownToken(stream.unknown[0])
    toks = list(stream.tokens)

    if toks[0] == "how":
        if len(toks) < 2 or toks[1] != "many":
            raise OutOfGrammar("'how' must be followed by 'many'")
        rest = toks[2:]
        long_form = False
        if rest[-2:] in (["are", "there"], ["do", "have"]):
            rest = rest[:-2]
            long_form = True
        if mode is GrammarMode.ORIGINAL and not long_form:
            raise OutOfGrammar("bare 'how many' question is not a long form")
        return _bind(Head.COUNT, rest, lexicon)

    for marker in (("are", "there"), ("is", "there"), ("do", "have")):
        if tuple(toks[: len(marker)]) == marker:
            rest = toks[len(marker):]
            if rest and rest[0] == "any":
                rest = rest[1:]
            if rest and rest[-1] == "there":
                rest = rest[:-1]
            return _bind(Head.EXIST, rest, lexicon)

    if mode is GrammarMode.ORIGINAL:
        raise OutOfGrammar("no long-form head construction found")
    if toks[0] == "any":
        return _bind(Head.EXIST, toks[1:], lexicon)
    return _bind(Head.EXIST, toks, lexicon)


def _bind(head: Head, np_tokens: list[str], lexicon: Lexicon) -> QueryProgram:
    bound: dict[str, object] = {}
    for token in np_tokens:
        if token in lexicon.subjects:
            continue
        if token not in _PROPERTY_VOCAB:
            raise OutOfGrammar(f"unexpected {token!r} in noun phrase")
        kind, value = _PROPERTY_VOCAB[token]
        if kind in bound and bound[kind] is not value:
            raise InconsistentFilters(f"conflicting {kind} values")
        bound[kind] = value
    category = bound.get("category")
    obj_class = bound.get("class")
    if category is not None and obj_class is not None:
        if category_of(obj_class) is not category:
            raise InconsistentFilters(
                f"{obj_class.value} is not a {category.value}"
            )
        category = None  # class wins, the category was redundant
    return QueryProgram(
        filters=FilterSet(
            size=bound.get("size"),
            freshness=bound.get("freshness"),
            category=category,
            obj_class=obj_class,
        ),
        head=head,
    )


def parse_question(
    text: str,
    mode: GrammarMode = GrammarMode.EXTENDED,
    lexicon: Lexicon | None = None,
) -> QueryProgram:
    """Convenience wrapper: normalize then parse."""
    lexicon = lexicon or default_lexicon()
    return parse(normalize(text, lexicon), mode, lexicon)
