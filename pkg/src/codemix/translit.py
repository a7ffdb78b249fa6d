"""Devanagari-to-Roman transliteration via a rule table.

The shipped scheme is a simplified lowercase phonetic mapping (no
diacritics): inherent "a" is inserted after bare consonants, suppressed
under virama, and a word-final inherent vowel is dropped when the token
already contains a vowel ("kamal", not "kamala"). Anything outside the
Devanagari block passes through untouched, so mixed-script tokens are
safe. Scheme files are TSV (class, sequence, roman) and swappable.
"""

import logging
from dataclasses import dataclass, field
from importlib.resources import files

from .corpus import BitextRecord

log = logging.getLogger(__name__)

DEVANAGARI_LO = 0x0900
DEVANAGARI_HI = 0x097F
VIRAMA = "्"
NUKTA = "़"

_CLASSES = ("consonant", "vowel", "matra", "digit", "sign")


def is_devanagari(ch):
    return DEVANAGARI_LO <= ord(ch) <= DEVANAGARI_HI


@dataclass
class TranslitScheme:
    name: str
    rules: dict            # sequence -> (class, roman)
    inherent: str = "a"
    max_seq: int = field(default=1)

    def lookup(self, text, i):
        """Longest rule match at position i, or None."""
        for width in range(min(self.max_seq, len(text) - i), 0, -1):
            hit = self.rules.get(text[i:i + width])
            if hit is not None:
                return text[i:i + width], hit
        return None, None


def load_scheme(path=None):
    """Load a scheme TSV; with no path, the shipped Hindi scheme."""
    if path is None:
        path = files("codemix").joinpath("data/devanagari_roman.tsv")
        name = "hindi-simple"
        text = path.read_text(encoding="utf-8")
    else:
        name = str(path)
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    rules = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"scheme line {lineno}: expected 3 tab-separated fields")
        cls, seq, roman = parts
        if cls not in _CLASSES:
            raise ValueError(f"scheme line {lineno}: unknown class {cls!r}")
        if any(c.isspace() for c in roman):
            raise ValueError(f"scheme line {lineno}: roman value contains whitespace")
        rules[seq] = (cls, roman)
    if not rules:
        raise ValueError("empty transliteration scheme")
    return TranslitScheme(name=name, rules=rules,
                          max_seq=max(len(k) for k in rules))


def _has_vowel(s):
    return any(c in "aeiou" for c in s)


def transliterate_token(token, scheme, counter=None):
    """Map one token through the scheme. Unmapped Devanagari passes through
    with a warning (tallied in `counter` when given)."""
    out = []
    pending = False  # consonant emitted, inherent vowel not yet decided
    i = 0

    def flush():
        nonlocal pending
        if pending:
            out.append(scheme.inherent)
            pending = False

    while i < len(token):
        seq, hit = scheme.lookup(token, i)
        if hit is None:
            ch = token[i]
            if is_devanagari(ch):
                log.warning("no rule for %r (U+%04X); passing through", ch, ord(ch))
                if counter is not None:
                    counter[ch] = counter.get(ch, 0) + 1
            flush()
            out.append(ch)
            i += 1
            continue
        cls, roman = hit
        if cls == "consonant":
            flush()
            out.append(roman)
            pending = True
        elif cls == "matra":
            if pending:
                pending = False
            out.append(roman)
        elif cls == "sign":
            if seq == VIRAMA:
                pending = False
            elif seq == NUKTA:
                pass  # bare modifier on an already-emitted consonant
            else:
                flush()
                out.append(roman)
        else:  # vowel, digit
            flush()
            out.append(roman)
        i += len(seq)

    if pending:
        # word-final schwa deletion, but never strip a CV-less syllable bare
        if not _has_vowel("".join(out)):
            out.append(scheme.inherent)
    return "".join(out)


def transliterate_text(text, scheme, counter=None):
    return " ".join(transliterate_token(t, scheme, counter) for t in text.split())


def romanize_target(records, scheme):
    """Transliterate every target side token-by-token; sources unchanged."""
    out = []
    counter = {}
    for rec in records:
        new_tokens = tuple(transliterate_token(t, scheme, counter)
                           for t in rec.target_tokens)
        out.append(BitextRecord(
            id=rec.id,
            source_tokens=rec.source_tokens,
            target_tokens=new_tokens,
            source_raw=rec.source_raw,
            target_raw=" ".join(new_tokens),
        ))
    if counter:
        total = sum(counter.values())
        log.warning("%d unmapped Devanagari codepoint occurrence(s) across %d distinct",
                    total, len(counter))
    return out
