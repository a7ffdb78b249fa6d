"""Shared fixtures: a deterministic toy bitext with a known dictionary.

The toy corpus maps fifty alphaNN source words onto fifty betaNN target
words one-for-one, so induced translation pairs can be checked against
the construction dictionary instead of against human judgement.
"""

import random

import numpy as np
import pytest

from codemix.corpus import BitextRecord
from codemix.embedding import EmbeddingTable

TOY_SRC = [f"alpha{i:02d}" for i in range(50)]
TOY_TGT = [f"beta{i:02d}" for i in range(50)]
TOY_DICT = dict(zip(TOY_SRC, TOY_TGT))


def build_toy_records(pairs=5000, seed=7, lo=5, hi=10):
    # uniform word draws with replacement; target is the word-for-word image
    rng = random.Random(seed)
    out = []
    for i in range(pairs):
        words = rng.choices(TOY_SRC, k=rng.randint(lo, hi))
        image = [TOY_DICT[w] for w in words]
        out.append(BitextRecord(
            id=f"toy-{i}",
            source_tokens=tuple(words),
            target_tokens=tuple(image),
            source_raw=" ".join(words),
            target_raw=" ".join(image),
        ))
    return out


@pytest.fixture(scope="session")
def toy_records():
    return build_toy_records()


def make_table(entries, dim=8):
    """Hand-built embedding table for generator tests.

    entries: iterable of (surface, vector_prefix, src_count, tgt_count).
    Vectors shorter than dim are zero-padded on the right.
    """
    vocab = {}
    vecs, prov, counts, surfaces = [], [], [], []
    for surface, vec, src, tgt in entries:
        vocab[surface] = len(surfaces)
        surfaces.append(surface)
        row = np.zeros(dim, dtype=np.float32)
        row[: len(vec)] = vec
        vecs.append(row)
        prov.append((src, tgt))
        counts.append(src + tgt)
    return EmbeddingTable(
        vocab=vocab,
        vectors=np.array(vecs, dtype=np.float32),
        provenance=np.array(prov, dtype=np.int64),
        dim=dim,
        counts=np.array(counts, dtype=np.int64),
        surfaces=surfaces,
        epoch_losses=[],
    )
