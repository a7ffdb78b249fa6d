"""Evaluation measures: corpus BLEU plus code-mixing statistics.

BLEU here is corpus-level with a single reference per hypothesis:
clipped n-gram precisions for orders 1..4 combined by geometric mean
under uniform weights, times the brevity penalty exp(min(0, 1 - r/c)).
Orders for which the hypothesis corpus contains no n-grams at all are
left out of the mean (a one-word corpus is still a perfect match of
itself); a zero match count at a participating order either zeroes the
score (smoothing "none") or is replaced by epsilon (default).

CMI is 100 * (1 - dominant-language share) over language-tagged
tokens, ignoring OTHER; SPF is the fraction of adjacent non-OTHER
token boundaries where the language flips.
"""

import math
from collections import Counter
from dataclasses import dataclass, field

from .corpus import LanguageTag

DEVANAGARI_LO = 0x0900
DEVANAGARI_HI = 0x097F


@dataclass
class BleuConfig:
    max_order: int = 4
    case_sensitive: bool = False
    smoothing: str = "epsilon"   # "none" or "epsilon"
    epsilon: float = 0.1

    def __post_init__(self):
        if self.max_order < 1:
            raise ValueError("max_order must be >= 1")
        if self.smoothing not in ("none", "epsilon"):
            raise ValueError(f"unknown smoothing {self.smoothing!r}")


def _ngram_counts(tokens, order):
    return Counter(tuple(tokens[i:i + order]) for i in range(len(tokens) - order + 1))


def bleu(hypotheses, references, config=None):
    """Corpus BLEU in [0, 100] for parallel lists of sentence strings."""
    config = config or BleuConfig()
    if len(hypotheses) != len(references):
        raise ValueError(f"hypothesis/reference length mismatch: "
                         f"{len(hypotheses)} vs {len(references)}")
    if not hypotheses:
        raise ValueError("cannot score an empty corpus")

    matches = [0] * config.max_order
    totals = [0] * config.max_order
    hyp_len = 0
    ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        if not config.case_sensitive:
            hyp = hyp.lower()
            ref = ref.lower()
        h = hyp.split()
        r = ref.split()
        hyp_len += len(h)
        ref_len += len(r)
        for order in range(1, config.max_order + 1):
            hc = _ngram_counts(h, order)
            if not hc:
                continue
            rc = _ngram_counts(r, order)
            totals[order - 1] += sum(hc.values())
            matches[order - 1] += sum(min(c, rc[g]) for g, c in hc.items())

    if hyp_len == 0:
        return 0.0
    log_sum = 0.0
    used = 0
    for m, t in zip(matches, totals):
        if t == 0:
            continue  # no n-grams of this order exist in the corpus at all
        used += 1
        if m == 0:
            if config.smoothing == "none":
                return 0.0
            m = config.epsilon
        log_sum += math.log(m / t)
    if used == 0:
        return 0.0
    bp = math.exp(min(0.0, 1.0 - ref_len / hyp_len))
    return 100.0 * bp * math.exp(log_sum / used)


def _is_latin(ch):
    o = ord(ch)
    return (0x41 <= o <= 0x5A) or (0x61 <= o <= 0x7A) or (0xC0 <= o <= 0x24F)


def tag_token(token):
    """Script heuristic: any Devanagari wins, then any Latin letter."""
    for ch in token:
        if DEVANAGARI_LO <= ord(ch) <= DEVANAGARI_HI:
            return LanguageTag.LG2
    for ch in token:
        if _is_latin(ch):
            return LanguageTag.LG1
    return LanguageTag.OTHER


def token_language_tags(pair_or_tokens):
    """Per-token tags, exact from substitution spans when available.

    Accepts a GeneratedPair (its spans carry ground truth) or a plain
    token sequence (falls back to the script heuristic).
    """
    spans = getattr(pair_or_tokens, "spans", None)
    if spans is not None:
        tags = [LanguageTag.LG1] * len(pair_or_tokens.mixed_tokens)
        for s in spans:
            for i in range(s.out_start, s.out_end):
                tags[i] = s.tag
        return tags
    return [tag_token(t) for t in pair_or_tokens]


def cmi(tags):
    """Code-mixing index in [0, 100]; 0 for monolingual or all-OTHER input."""
    n = len(tags)
    other = sum(1 for t in tags if t is LanguageTag.OTHER)
    if n == 0 or n == other:
        return 0.0
    m = max(sum(1 for t in tags if t is LanguageTag.LG1),
            sum(1 for t in tags if t is LanguageTag.LG2))
    return 100.0 * (1.0 - m / (n - other))


def spf(tags):
    """Switch-point fraction in [0, 1] over the non-OTHER subsequence."""
    langs = [t for t in tags if t is not LanguageTag.OTHER]
    if len(langs) < 2:
        return 0.0
    switches = sum(1 for a, b in zip(langs, langs[1:]) if a is not b)
    return switches / (len(langs) - 1)


@dataclass
class MetricsReport:
    bleu: float = None
    cmi_mean: float = 0.0
    spf_mean: float = 0.0
    cmi_per_sentence: list = field(default_factory=list)
    spf_per_sentence: list = field(default_factory=list)
    token_histogram: dict = field(default_factory=dict)
    sentences: int = 0

    def to_dict(self):
        out = {
            "sentences": self.sentences,
            "cmi_mean": round(self.cmi_mean, 4),
            "spf_mean": round(self.spf_mean, 4),
            "token_histogram": self.token_histogram,
            "cmi_per_sentence": [round(v, 4) for v in self.cmi_per_sentence],
            "spf_per_sentence": [round(v, 4) for v in self.spf_per_sentence],
        }
        if self.bleu is not None:
            out["bleu"] = round(self.bleu, 4)
        return out


def corpus_stats(tagged_sentences, bleu_score=None):
    """Aggregate per-sentence tag sequences into a MetricsReport."""
    cmis = []
    spfs = []
    hist = Counter()
    for tags in tagged_sentences:
        cmis.append(cmi(tags))
        spfs.append(spf(tags))
        hist.update(t.value for t in tags)
    n = len(cmis)
    return MetricsReport(
        bleu=bleu_score,
        cmi_mean=sum(cmis) / n if n else 0.0,
        spf_mean=sum(spfs) / n if n else 0.0,
        cmi_per_sentence=cmis,
        spf_per_sentence=spfs,
        token_histogram={tag.value: hist.get(tag.value, 0) for tag in LanguageTag},
        sentences=n,
    )
