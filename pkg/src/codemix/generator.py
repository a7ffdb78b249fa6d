"""Code-mixed sentence generation by n-gram substitution.

A sentence's candidate n-grams (orders 1..max_order, restricted to
source-dominant vocabulary units) are ranked by the cosine similarity
of their best target-side neighbor. Candidates are then applied most
similar first: each selected n-gram type is replaced at every position
that does not collide with an earlier replacement, and consumes one
unit of the substitution budget no matter how many positions it
covered. Generation is fully deterministic given a table and a config.
"""

import json
from dataclasses import dataclass

from .corpus import LanguageTag
from .embedding import nearest_lg2
from .fileio import atomic_write, read_lines
from .ngram_shuffle import join_surface, split_surface
from .translit import load_scheme, transliterate_token

SCRIPT_MODES = ("native", "roman")

# budget presets; all use candidate orders up to 3
PRESETS = {"unigram": 1, "bigram": 2, "trigram": 3}


@dataclass
class GeneratorConfig:
    max_order: int = 3
    num_substitutions: int = 1
    min_similarity: float = 0.0
    script_mode: str = "native"
    tau: float = 0.8
    seed: int = 1

    def __post_init__(self):
        if self.max_order < 1:
            raise ValueError("max_order must be >= 1")
        if self.num_substitutions < 0:
            raise ValueError("num_substitutions must be >= 0")
        if not -1.0 <= self.min_similarity <= 1.0:
            raise ValueError("min_similarity must lie in [-1, 1]")
        if self.script_mode not in SCRIPT_MODES:
            raise ValueError(f"script_mode must be one of {SCRIPT_MODES}")


def preset_config(name, **overrides):
    """Config for a named preset: "trigram", "bigram-roman", "unigram-native"."""
    parts = name.split("-")
    budget = PRESETS.get(parts[0])
    if budget is None or len(parts) > 2:
        raise ValueError(f"unknown preset {name!r}; choose from "
                         f"{sorted(PRESETS)} with optional -native/-roman")
    kwargs = {"max_order": 3, "num_substitutions": budget}
    if len(parts) == 2:
        if parts[1] not in SCRIPT_MODES:
            raise ValueError(f"unknown script mode {parts[1]!r} in preset {name!r}")
        kwargs["script_mode"] = parts[1]
    kwargs.update(overrides)
    return GeneratorConfig(**kwargs)


@dataclass(frozen=True)
class Candidate:
    tokens: tuple
    surface: str
    order: int
    replacement_surface: str
    similarity: float


@dataclass
class SubstitutionPlan:
    candidates: list  # Candidate, similarity-descending


@dataclass(frozen=True)
class Span:
    out_start: int
    out_end: int
    tag: LanguageTag
    src_start: int
    src_end: int
    substitution: Candidate = None


@dataclass
class GeneratedPair:
    source_tokens: tuple
    mixed_tokens: tuple
    spans: list
    applied: list
    origin_id: str = ""


def plan_substitutions(tokens, table, config, _memo=None):
    """Rank the sentence's substitutable n-gram types, best first.

    _memo, when given, caches best-neighbor lookups by gram surface
    across calls sharing one table and config (the corpus drivers pass
    one); gram types recur constantly within a corpus.
    """
    if not tokens:
        raise ValueError("cannot plan substitutions for an empty sentence")
    tokens = tuple(tokens)
    memo = {} if _memo is None else _memo
    seen = set()
    cands = []
    for order in range(1, config.max_order + 1):
        for i in range(len(tokens) - order + 1):
            gram = tokens[i:i + order]
            if gram in seen:
                continue
            seen.add(gram)
            surface = join_surface(gram)
            if surface not in memo:
                memo[surface] = _best_neighbor(surface, table, config)
            hit = memo[surface]
            if hit is None:
                continue
            repl, sim = hit
            cands.append(Candidate(tokens=gram, surface=surface, order=order,
                                   replacement_surface=repl, similarity=sim))
    cands.sort(key=lambda c: (-c.similarity, -c.order, c.surface))
    return SubstitutionPlan(candidates=cands)


def _best_neighbor(surface, table, config):
    """(replacement, similarity) for a src-dominant in-vocab gram, else None."""
    idx = table.vocab.get(surface)
    if idx is None:
        return None
    src, tgt = table.provenance[idx]
    total = src + tgt
    if total < 1 or src / total < config.tau:
        return None
    hits = nearest_lg2(surface, 1, table, config.tau)
    if not hits:
        return None
    repl, sim = hits[0]
    if sim < config.min_similarity:
        return None
    return repl, sim


def _occurrences(tokens, gram):
    n = len(gram)
    return [i for i in range(len(tokens) - n + 1) if tokens[i:i + n] == gram]


def apply_plan(tokens, plan, config, scheme=None):
    """Substitute per the plan within the type budget; returns a GeneratedPair.

    A candidate is replaced at every occurrence not colliding with an
    earlier replacement (left to right for self-overlap); candidates
    left with no free occurrence are skipped without spending budget.
    """
    tokens = tuple(tokens)
    if config.script_mode == "roman" and scheme is None:
        scheme = load_scheme()
    taken = [False] * len(tokens)
    chosen = []   # (start, candidate)
    applied = []
    budget = config.num_substitutions
    for cand in plan.candidates:
        if budget <= 0:
            break
        placed = False
        for i in _occurrences(tokens, cand.tokens):
            if any(taken[i:i + cand.order]):
                continue
            for j in range(i, i + cand.order):
                taken[j] = True
            chosen.append((i, cand))
            placed = True
        if placed:
            applied.append(cand)
            budget -= 1

    chosen.sort(key=lambda t: t[0])
    mixed = []
    spans = []
    pos = 0

    def passthrough(upto):
        nonlocal pos
        if upto > pos:
            start = len(mixed)
            mixed.extend(tokens[pos:upto])
            spans.append(Span(out_start=start, out_end=len(mixed),
                              tag=LanguageTag.LG1, src_start=pos, src_end=upto))
            pos = upto

    for start, cand in chosen:
        passthrough(start)
        repl = list(split_surface(cand.replacement_surface))
        if config.script_mode == "roman":
            repl = [transliterate_token(t, scheme) for t in repl]
        out_start = len(mixed)
        mixed.extend(repl)
        spans.append(Span(out_start=out_start, out_end=len(mixed),
                          tag=LanguageTag.LG2, src_start=start,
                          src_end=start + cand.order, substitution=cand))
        pos = start + cand.order
    passthrough(len(tokens))

    return GeneratedPair(source_tokens=tokens, mixed_tokens=tuple(mixed),
                         spans=spans, applied=applied)


def reconstruct_source(pair):
    """Undo substitutions using only the recorded spans."""
    out = []
    for span in pair.spans:
        if span.substitution is None:
            out.extend(pair.mixed_tokens[span.out_start:span.out_end])
        else:
            out.extend(span.substitution.tokens)
    return tuple(out)


def _generate(token_seqs, ids, table, config):
    scheme = load_scheme() if config.script_mode == "roman" else None
    memo = {}
    out = []
    for rec_id, tokens in zip(ids, token_seqs):
        plan = plan_substitutions(tokens, table, config, _memo=memo)
        pair = apply_plan(tokens, plan, config, scheme=scheme)
        pair.origin_id = rec_id
        out.append(pair)
    return out


def generate_corpus(records, table, config):
    """One GeneratedPair per record, seeded from its source side."""
    return _generate([r.source_tokens for r in records],
                     [r.id for r in records], table, config)


def generate_sentences(token_seqs, table, config):
    """Like generate_corpus but over bare source-language token lists."""
    ids = [f"line-{i + 1}" for i in range(len(token_seqs))]
    return _generate(token_seqs, ids, table, config)


def write_generated_tsv(pairs, path):
    """source<TAB>mixed, one pair per line (token-joined, whitespace-normal)."""
    with atomic_write(path) as fh:
        for p in pairs:
            fh.write(" ".join(p.source_tokens) + "\t" + " ".join(p.mixed_tokens) + "\n")


def write_generated_jsonl(pairs, path):
    with atomic_write(path) as fh:
        for p in pairs:
            obj = {
                "id": p.origin_id,
                "source": " ".join(p.source_tokens),
                "mixed": " ".join(p.mixed_tokens),
                "applied": [
                    {"source": c.surface, "replacement": c.replacement_surface,
                     "order": c.order, "similarity": round(c.similarity, 6)}
                    for c in p.applied
                ],
                "spans": [
                    {"start": s.out_start, "end": s.out_end, "tag": s.tag.value,
                     "src_start": s.src_start, "src_end": s.src_end}
                    for s in p.spans
                ],
            }
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def load_generated_jsonl(path):
    """Read pairs back with span tags (substitution details are not kept)."""
    pairs = []
    for lineno, line in enumerate(read_lines(path), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: line {lineno}: {exc}") from exc
        spans = [Span(out_start=s["start"], out_end=s["end"],
                      tag=LanguageTag(s["tag"]),
                      src_start=s["src_start"], src_end=s["src_end"])
                 for s in obj.get("spans", [])]
        pairs.append(GeneratedPair(
            source_tokens=tuple(obj["source"].split()),
            mixed_tokens=tuple(obj["mixed"].split()),
            spans=spans,
            applied=obj.get("applied", []),
            origin_id=str(obj.get("id", f"row-{lineno}")),
        ))
    return pairs
