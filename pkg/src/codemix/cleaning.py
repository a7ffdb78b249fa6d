"""Strip social-media artifacts from text: URLs, @mentions, #hashtags,
emoji, and emoticons, in that order, then normalize whitespace.

The pass order alone is not idempotent (removing an emoji can expose a
mention that was not token-initial before), so the pipeline reruns
until the text stops changing. Emoticons are a fixed shipped list and
are only removed as standalone tokens; emoji are removed wherever they
occur, including ZWJ sequences, skin tones, and keycaps.
"""

import json
import re
from dataclasses import dataclass, field
from importlib.resources import files

from .corpus import BitextRecord

CATEGORIES = ("url", "mention", "hashtag", "emoji", "emoticon")

_URL = re.compile(r"(?:(?:https?|ftp)://\S+)|(?<!\S)www\.\S+", re.IGNORECASE)
_MENTION = re.compile(r"(?<!\S)@\S*")
_HASHTAG = re.compile(r"(?<!\S)#(\S*)")

# emoji-presentation blocks plus the glue codepoints that build sequences
_EMOJI = re.compile(
    "["
    "\U0001F1E6-\U0001F1FF"   # regional indicators
    "\U0001F300-\U0001F5FF"
    "\U0001F600-\U0001F64F"
    "\U0001F680-\U0001F6FF"
    "\U0001F700-\U0001F77F"
    "\U0001F780-\U0001F7FF"
    "\U0001F800-\U0001F8FF"
    "\U0001F900-\U0001F9FF"
    "\U0001FA00-\U0001FAFF"
    "\U0001F3FB-\U0001F3FF"   # skin tones
    "☀-➿"
    "⬀-⯿"
    "←-⇿"
    "⌀-⏿"
    "️"                  # variation selector
    "‍"                  # zero-width joiner
    "⃣"                  # keycap combiner
    "]+"
)


def _load_emoticons():
    text = files("codemix").joinpath("data/emoticons.txt").read_text(encoding="utf-8")
    return frozenset(line for line in text.splitlines() if line)

EMOTICONS = _load_emoticons()


@dataclass
class CleaningReport:
    counts: dict = field(default_factory=lambda: {c: 0 for c in CATEGORIES})
    dropped: int = 0

    def merge_counts(self, counts):
        for k, v in counts.items():
            self.counts[k] += v

    def to_dict(self):
        return {"removed": dict(self.counts), "dropped_records": self.dropped}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


def _clean_once(text, counts, hashtag_mode):
    def strip(pattern, key, repl=""):
        nonlocal text
        text, n = pattern.subn(repl, text)
        counts[key] += n

    strip(_URL, "url")
    strip(_MENTION, "mention")
    strip(_HASHTAG, "hashtag", r"\1" if hashtag_mode == "keep-word" else "")
    strip(_EMOJI, "emoji")
    kept = []
    for tok in text.split():
        if tok in EMOTICONS:
            counts["emoticon"] += 1
        else:
            kept.append(tok)
    return " ".join(kept)


def clean_text(text, hashtag_mode="remove"):
    """Returns (cleaned text, per-category removal counts)."""
    if hashtag_mode not in ("remove", "keep-word"):
        raise ValueError(f"unknown hashtag mode {hashtag_mode!r}")
    counts = {c: 0 for c in CATEGORIES}
    for _ in range(5):
        new = _clean_once(text, counts, hashtag_mode)
        if new == text:
            break
        text = new
    return text, counts


def adapt_corpus(records, hashtag_mode="remove"):
    """Clean both sides of every record; drop pairs a side of which
    comes back empty. Returns (records, CleaningReport)."""
    report = CleaningReport()
    out = []
    for rec in records:
        src, c1 = clean_text(rec.source_raw, hashtag_mode)
        tgt, c2 = clean_text(rec.target_raw, hashtag_mode)
        report.merge_counts(c1)
        report.merge_counts(c2)
        if not src or not tgt:
            report.dropped += 1
            continue
        out.append(BitextRecord(
            id=rec.id,
            source_tokens=tuple(src.split()),
            target_tokens=tuple(tgt.split()),
            source_raw=src,
            target_raw=tgt,
        ))
    return out, report
