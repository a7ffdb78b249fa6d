"""Parallel-corpus ingestion, validation, dedup, split, and serialization.

Tokenization throughout is plain Unicode-whitespace splitting with no
case or punctuation normalization. Files are UTF-8; undecodable bytes
are a hard error rather than being replaced.
"""

import json
import logging
import random
from dataclasses import dataclass, field
from enum import Enum

from .fileio import atomic_write, read_lines

log = logging.getLogger(__name__)


class LanguageTag(Enum):
    LG1 = "LG1"
    LG2 = "LG2"
    OTHER = "OTHER"


@dataclass(frozen=True)
class BitextRecord:
    """One aligned sentence pair: source side in LG1, target side in LG2."""

    id: str
    source_tokens: tuple
    target_tokens: tuple
    source_raw: str
    target_raw: str


@dataclass
class CorpusSplit:
    train: list
    valid: list
    seed: int
    counts: dict = field(default_factory=dict)


def make_record(rec_id, source_raw, target_raw):
    """Build a record from raw sentence strings, or None if either side is empty."""
    src_tokens = tuple(source_raw.split())
    tgt_tokens = tuple(target_raw.split())
    if not src_tokens or not tgt_tokens:
        return None
    return BitextRecord(
        id=rec_id,
        source_tokens=src_tokens,
        target_tokens=tgt_tokens,
        source_raw=source_raw,
        target_raw=target_raw,
    )


def _check_unique_ids(records):
    seen = set()
    for rec in records:
        if rec.id in seen:
            raise ValueError(f"duplicate record id {rec.id!r}")
        seen.add(rec.id)


def load_parallel(source_path, target_path):
    """Load two line-aligned plain-text files into bitext records.

    Record k pairs line k of each file. Pairs that are blank on either
    side after trimming are dropped with a warning.
    """
    src_lines = read_lines(source_path)
    tgt_lines = read_lines(target_path)
    if len(src_lines) != len(tgt_lines):
        raise ValueError(
            f"line count mismatch: {source_path} has {len(src_lines)} lines, "
            f"{target_path} has {len(tgt_lines)}"
        )
    records = []
    for lineno, (src, tgt) in enumerate(zip(src_lines, tgt_lines), start=1):
        rec = make_record(f"line-{lineno}", src, tgt)
        if rec is None:
            log.warning("dropping pair at line %d: empty side after trim", lineno)
            continue
        records.append(rec)
    return records


def load_tsv(path):
    """Load a source<TAB>target[<TAB>id] file. Lines with fewer than 2 fields are a hard error."""
    records = []
    for lineno, line in enumerate(read_lines(path), start=1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) < 2:
            raise ValueError(f"{path}: line {lineno} has {len(fields)} field(s), expected at least 2")
        rec_id = fields[2] if len(fields) >= 3 and fields[2] else f"row-{lineno}"
        rec = make_record(rec_id, fields[0], fields[1])
        if rec is None:
            log.warning("dropping pair at line %d: empty side after trim", lineno)
            continue
        records.append(rec)
    _check_unique_ids(records)
    return records


def load_jsonl(path):
    """Load records from JSON Lines with keys "id", "source", "target"."""
    records = []
    for lineno, line in enumerate(read_lines(path), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: line {lineno}: {exc}") from exc
        rec = make_record(str(obj.get("id", f"row-{lineno}")), obj["source"], obj["target"])
        if rec is None:
            log.warning("dropping pair at line %d: empty side after trim", lineno)
            continue
        records.append(rec)
    _check_unique_ids(records)
    return records


def write_parallel(records, source_path, target_path):
    for rec in records:
        if "\n" in rec.source_raw or "\n" in rec.target_raw:
            raise ValueError(f"record {rec.id!r} contains a newline; cannot serialize line-per-sentence")
    with atomic_write(source_path) as fh:
        for rec in records:
            fh.write(rec.source_raw + "\n")
    with atomic_write(target_path) as fh:
        for rec in records:
            fh.write(rec.target_raw + "\n")


def write_tsv(records, path):
    with atomic_write(path) as fh:
        for rec in records:
            if any("\t" in s or "\n" in s for s in (rec.source_raw, rec.target_raw)):
                raise ValueError(f"record {rec.id!r} contains a tab or newline; cannot serialize as TSV")
            fh.write(f"{rec.source_raw}\t{rec.target_raw}\t{rec.id}\n")


def write_jsonl(records, path):
    with atomic_write(path) as fh:
        for rec in records:
            fh.write(json.dumps(
                {"id": rec.id, "source": rec.source_raw, "target": rec.target_raw},
                ensure_ascii=False,
            ) + "\n")


def dedup(records):
    """Drop exact duplicate pairs, keeping first occurrences.

    A pair is a duplicate iff its raw source and target strings match an
    earlier pair exactly after trimming outer whitespace.
    """
    seen = set()
    kept = []
    for rec in records:
        key = (rec.source_raw.strip(), rec.target_raw.strip())
        if key in seen:
            continue
        seen.add(key)
        kept.append(rec)
    return kept


def split(records, valid_size, seed):
    """Draw a validation set by seeded shuffle-then-prefix; the rest is train."""
    if valid_size < 0 or valid_size > len(records):
        raise ValueError(f"valid_size {valid_size} out of range for {len(records)} records")
    order = list(range(len(records)))
    random.Random(seed).shuffle(order)
    valid = [records[i] for i in order[:valid_size]]
    train = [records[i] for i in order[valid_size:]]
    return CorpusSplit(
        train=train,
        valid=valid,
        seed=seed,
        counts={"train": len(train), "valid": len(valid)},
    )
