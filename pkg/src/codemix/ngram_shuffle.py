"""Mixed-language shuffled n-gram corpus construction.

For each sentence pair we collect the unique contiguous n-grams of
orders 1..n from both sides, shuffle that set once, and emit the result
as a single space-separated line. Multi-token n-grams are joined with
"_" under an escape rule so surfaces always round-trip to token
sequences.
"""

import random
from dataclasses import dataclass

from .fileio import atomic_write, read_lines


def escape_token(token):
    return token.replace("\\", "\\\\").replace("_", "\\_")


def join_surface(tokens):
    """Join tokens into a single whitespace-free surface string."""
    return "_".join(escape_token(t) for t in tokens)


def split_surface(surface):
    """Inverse of join_surface."""
    tokens = []
    cur = []
    i = 0
    while i < len(surface):
        ch = surface[i]
        if ch == "\\" and i + 1 < len(surface):
            cur.append(surface[i + 1])
            i += 2
        elif ch == "_":
            tokens.append("".join(cur))
            cur = []
            i += 1
        else:
            cur.append(ch)
            i += 1
    tokens.append("".join(cur))
    return tuple(tokens)


@dataclass(frozen=True)
class NGramUnit:
    """A unique n-gram of one sentence pair, with per-side occurrence counts."""

    tokens: tuple
    order: int
    surface: str
    src_count: int
    tgt_count: int

    @property
    def total_count(self):
        return self.src_count + self.tgt_count


@dataclass(frozen=True)
class ShuffledSentence:
    units: tuple  # surfaces, in shuffled order
    origin_id: str

    @property
    def text(self):
        return " ".join(self.units)


def _side_ngrams(n, tokens):
    # yields (tokens_tuple, count) for the unique n-grams of one side
    counts = {}
    for i in range(len(tokens) - n + 1):
        key = tuple(tokens[i:i + n])
        counts[key] = counts.get(key, 0) + 1
    return counts


def _collect(n, x_tokens, y_tokens, acc):
    """Merge order-n counts of both sides into acc: tokens -> [src, tgt]."""
    if n < 1:
        raise ValueError(f"n-gram order must be >= 1, got {n}")
    for key, c in _side_ngrams(n, x_tokens).items():
        acc.setdefault(key, [0, 0])[0] += c
    for key, c in _side_ngrams(n, y_tokens).items():
        acc.setdefault(key, [0, 0])[1] += c


def _freeze(acc):
    return [
        NGramUnit(tokens=key, order=len(key), surface=join_surface(key),
                  src_count=src, tgt_count=tgt)
        for key, (src, tgt) in acc.items()
    ]


def ngrams(n, x_tokens, y_tokens):
    """Unique contiguous n-grams of exactly order n drawn from either side.

    Sides shorter than n contribute nothing. An n-gram present on both
    sides yields one unit carrying counts from both.
    """
    acc = {}
    _collect(n, x_tokens, y_tokens, acc)
    return set(_freeze(acc))


def _cumulative_ordered(n, x_tokens, y_tokens):
    # insertion order: ascending order j, x side before y side, position order
    if n < 1:
        raise ValueError(f"n-gram order must be >= 1, got {n}")
    acc = {}
    for j in range(1, n + 1):
        _collect(j, x_tokens, y_tokens, acc)
    return _freeze(acc)


def cumulative_ngrams(n, x_tokens, y_tokens):
    """Union of ngrams(j, x, y) for j = 1..n."""
    return set(_cumulative_ordered(n, x_tokens, y_tokens))


def shuffled_sentence(record, n, rng):
    """One uniformly shuffled line holding the record's cumulative n-gram set."""
    units = _cumulative_ordered(n, record.source_tokens, record.target_tokens)
    rng.shuffle(units)
    return ShuffledSentence(units=tuple(u.surface for u in units), origin_id=record.id)


def build_shuffled_corpus(records, n, seed, corpus_path, vocab_path):
    """Write one shuffled line per record plus a vocabulary sidecar.

    Each record gets its own generator derived from (seed, position), so
    output is reproducible and independent of any chunking. Returns the
    aggregated vocabulary as surface -> NGramUnit.
    """
    vocab = {}
    n_lines = 0
    with atomic_write(corpus_path) as fh:
        for i, rec in enumerate(records):
            units = _cumulative_ordered(n, rec.source_tokens, rec.target_tokens)
            random.Random(f"{seed}:{i}").shuffle(units)
            fh.write(" ".join(u.surface for u in units) + "\n")
            n_lines += 1
            for u in units:
                slot = vocab.setdefault(u.surface, [u.tokens, u.order, 0, 0])
                slot[2] += u.src_count
                slot[3] += u.tgt_count
    if n_lines == 0:
        raise ValueError("no records to build a shuffled corpus from")
    frozen = {
        s: NGramUnit(tokens=v[0], order=v[1], surface=s, src_count=v[2], tgt_count=v[3])
        for s, v in vocab.items()
    }
    write_vocab(frozen, vocab_path)
    return frozen


def write_vocab(vocab, path):
    """TSV sidecar: surface, order, src_count, tgt_count; frequent units first."""
    with atomic_write(path) as fh:
        for u in sorted(vocab.values(), key=lambda u: (-u.total_count, u.surface)):
            fh.write(f"{u.surface}\t{u.order}\t{u.src_count}\t{u.tgt_count}\n")


def load_vocab(path):
    vocab = {}
    for lineno, line in enumerate(read_lines(path), start=1):
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise ValueError(f"{path}: line {lineno}: expected 4 fields, got {len(fields)}")
        surface = fields[0]
        vocab[surface] = NGramUnit(
            tokens=split_surface(surface),
            order=int(fields[1]),
            surface=surface,
            src_count=int(fields[2]),
            tgt_count=int(fields[3]),
        )
    return vocab
