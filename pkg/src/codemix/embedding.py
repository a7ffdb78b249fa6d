"""Skip-gram negative-sampling embeddings over the shuffled corpus.

Training is implemented directly on numpy: per-position reduced windows,
unigram^0.75 negative sampling, frequency subsampling, and linear
learning-rate decay. The published vectors are the input matrix. One
worker with a fixed seed is bit-deterministic; more workers run lock
free over shared arrays, so results then vary run to run.

Because every unit carries per-side occurrence counts, neighbor queries
can be restricted to units dominated by one language, which is what
turns nearest-neighbor lookup into n-gram translation.
"""

import logging
import threading
from dataclasses import dataclass, field

import numpy as np

from .fileio import atomic_write, read_lines

log = logging.getLogger(__name__)

LR_FLOOR_FRAC = 1e-4  # lr never decays below initial_lr * this


@dataclass
class EmbeddingHyperparams:
    dim: int = 100
    window: int = 5
    epochs: int = 5
    min_count: int = 5
    negatives: int = 5
    initial_lr: float = 0.025
    subsample_t: float = 1e-4
    seed: int = 1

    def __post_init__(self):
        if self.dim < 1 or self.window < 1 or self.epochs < 1:
            raise ValueError("dim, window and epochs must all be >= 1")
        if self.min_count < 1 or self.negatives < 1:
            raise ValueError("min_count and negatives must be >= 1")
        if not self.initial_lr > 0:
            raise ValueError("initial_lr must be positive")
        if self.subsample_t < 0:
            raise ValueError("subsample_t must be >= 0")


@dataclass
class EmbeddingTable:
    vocab: dict                      # surface -> row index
    vectors: np.ndarray              # (V, dim) float32
    provenance: np.ndarray           # (V, 2) int64: src_count, tgt_count
    dim: int
    counts: np.ndarray = None        # (V,) corpus frequency
    surfaces: list = field(default_factory=list)
    epoch_losses: list = field(default_factory=list)
    # lazily-built neighbor-query candidate arrays, keyed by (side, tau)
    _nn_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not self.surfaces:
            self.surfaces = [None] * len(self.vocab)
            for s, i in self.vocab.items():
                self.surfaces[i] = s
        if self.counts is None:
            self.counts = self.provenance.sum(axis=1)

    def __contains__(self, surface):
        return surface in self.vocab

    def vector(self, surface):
        return self.vectors[self.vocab[surface]]

    def tgt_fraction(self):
        total = self.provenance.sum(axis=1)
        with np.errstate(invalid="ignore"):
            frac = np.where(total > 0, self.provenance[:, 1] / np.maximum(total, 1), -1.0)
        return frac


def _stable_sigmoid(x):
    return 0.5 * (np.tanh(0.5 * x) + 1.0)


def _read_sentences(corpus_path):
    return [line.split() for line in read_lines(corpus_path) if line.split()]


def _build_vocab(sentences, min_count):
    counts = {}
    for sent in sentences:
        for s in sent:
            counts[s] = counts.get(s, 0) + 1
    kept = {s: c for s, c in counts.items() if c >= min_count}
    if not kept:
        raise ValueError(
            f"vocabulary is empty after min_count={min_count} filtering "
            f"({len(counts)} raw types)")
    # frequent first; lexicographic tie-break keeps indexing reproducible
    surfaces = sorted(kept, key=lambda s: (-kept[s], s))
    vocab = {s: i for i, s in enumerate(surfaces)}
    freq = np.array([kept[s] for s in surfaces], dtype=np.int64)
    return vocab, surfaces, freq


def _sentence_pairs(idx, reduced, window):
    """All (center, context) index pairs for one sentence.

    reduced[i] is the window radius drawn for center position i; a pair
    (i, j) exists iff 0 < |i - j| <= reduced[i].
    """
    centers = []
    contexts = []
    n = len(idx)
    for d in range(1, window + 1):
        if d >= n:
            break
        left = np.arange(0, n - d)
        right = left + d
        fwd = reduced[left] >= d     # center on the left
        bwd = reduced[right] >= d    # center on the right
        if fwd.any():
            centers.append(idx[left[fwd]])
            contexts.append(idx[right[fwd]])
        if bwd.any():
            centers.append(idx[right[bwd]])
            contexts.append(idx[left[bwd]])
    if not centers:
        return None, None
    return np.concatenate(centers), np.concatenate(contexts)


class _Trainer:
    def __init__(self, sentences, vocab, freq, params):
        self.params = params
        V = len(vocab)
        self.total_tokens = int(freq.sum())
        rng = np.random.default_rng(params.seed)
        self.syn0 = ((rng.random((V, params.dim), dtype=np.float32) - 0.5)
                     / params.dim)
        # Output rows start as copies of the input rows rather than zeros.
        # Mutually-predictive unit pairs then attract in input space from the
        # first update, which keeps translation pairs out of the mirrored
        # fixed point that small vocabularies admit.
        self.syn1 = self.syn0.copy()
        # negative-sampling distribution: unigram^0.75
        noise = freq.astype(np.float64) ** 0.75
        self.noise_cdf = np.cumsum(noise / noise.sum())
        # subsampling keep probability, word2vec-style
        if params.subsample_t > 0:
            f = freq / self.total_tokens
            self.keep = np.minimum(1.0, np.sqrt(params.subsample_t / f)
                                   + params.subsample_t / f)
        else:
            self.keep = None
        self.sent_idx = [np.array([vocab[s] for s in sent if s in vocab],
                                  dtype=np.int64) for sent in sentences]
        self.sent_lens = [len(a) for a in self.sent_idx]
        self.expected = max(1, params.epochs * sum(self.sent_lens))
        self.consumed = 0
        self.consumed_lock = threading.Lock()
        self.epoch_losses = []

    def _lr(self):
        frac = 1.0 - self.consumed / self.expected
        return self.params.initial_lr * max(frac, LR_FLOOR_FRAC)

    def _train_sentence(self, idx, rng, loss_acc):
        p = self.params
        if self.keep is not None and len(idx):
            idx = idx[rng.random(len(idx)) < self.keep[idx]]
        if len(idx) < 2:
            return
        reduced = rng.integers(1, p.window + 1, size=len(idx))
        centers, contexts = _sentence_pairs(idx, reduced, p.window)
        if centers is None:
            return
        lr = self._lr()
        P = len(centers)
        negs = np.searchsorted(self.noise_cdf, rng.random((P, p.negatives)))
        in_vec = self.syn0[centers]                      # (P, D)
        out_pos = self.syn1[contexts]                    # (P, D)
        out_neg = self.syn1[negs]                        # (P, K, D)

        score_pos = np.einsum("pd,pd->p", in_vec, out_pos)
        score_neg = np.einsum("pd,pkd->pk", in_vec, out_neg)
        g_pos = (1.0 - _stable_sigmoid(score_pos)) * lr            # (P,)
        g_neg = -_stable_sigmoid(score_neg) * lr                   # (P, K)
        # a negative drawn equal to either end of the pair is a collision,
        # not evidence; tiny vocabularies hit this constantly
        g_neg[negs == contexts[:, None]] = 0.0
        g_neg[negs == centers[:, None]] = 0.0

        loss_acc[0] += float(np.logaddexp(0.0, -score_pos).sum()
                             + np.logaddexp(0.0, score_neg).sum())
        loss_acc[1] += P

        grad_in = g_pos[:, None] * out_pos + np.einsum("pk,pkd->pd", g_neg, out_neg)
        np.add.at(self.syn0, centers, grad_in.astype(np.float32))
        np.add.at(self.syn1, contexts, (g_pos[:, None] * in_vec).astype(np.float32))
        np.add.at(self.syn1, negs.reshape(-1),
                  (g_neg[:, :, None] * in_vec[:, None, :])
                  .reshape(-1, p.dim).astype(np.float32))

    def run(self, workers=1):
        p = self.params
        order = range(len(self.sent_idx))
        for epoch in range(p.epochs):
            loss_acc = [0.0, 0]
            if workers <= 1:
                rng = np.random.default_rng((p.seed, epoch))
                for si in order:
                    self._train_sentence(self.sent_idx[si], rng, loss_acc)
                    self.consumed += self.sent_lens[si]
            else:
                self._run_hogwild(epoch, workers, loss_acc)
            mean = loss_acc[0] / max(loss_acc[1], 1)
            self.epoch_losses.append(mean)
            log.info("epoch %d/%d: mean pair loss %.4f, lr %.5f",
                     epoch + 1, p.epochs, mean, self._lr())

    def _run_hogwild(self, epoch, workers, loss_acc):
        # lock-free updates on shared syn0/syn1; racy and nondeterministic
        shards = [list(range(w, len(self.sent_idx), workers)) for w in range(workers)]

        def work(wid):
            rng = np.random.default_rng((self.params.seed, epoch, wid))
            local = [0.0, 0]
            done = 0
            for si in shards[wid]:
                self._train_sentence(self.sent_idx[si], rng, local)
                done += self.sent_lens[si]
            with self.consumed_lock:
                self.consumed += done
                loss_acc[0] += local[0]
                loss_acc[1] += local[1]

        threads = [threading.Thread(target=work, args=(w,)) for w in range(workers)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()


def train(corpus_path, params, vocab_provenance=None, workers=1):
    """Train an EmbeddingTable on a shuffled corpus file.

    vocab_provenance maps surface -> object with src_count/tgt_count
    (the sidecar written at corpus build time). Units missing from it
    get (0, 0) and are then never language-dominant, so they can be
    queried but never returned as translation candidates.
    """
    sentences = _read_sentences(corpus_path)
    if not sentences:
        raise ValueError(f"shuffled corpus {corpus_path} is empty")
    vocab, surfaces, freq = _build_vocab(sentences, params.min_count)
    trainer = _Trainer(sentences, vocab, freq, params)
    trainer.run(workers=workers)

    prov = np.zeros((len(vocab), 2), dtype=np.int64)
    if vocab_provenance:
        for s, i in vocab.items():
            u = vocab_provenance.get(s)
            if u is not None:
                prov[i, 0] = u.src_count
                prov[i, 1] = u.tgt_count
    table = EmbeddingTable(vocab=vocab, vectors=trainer.syn0, provenance=prov,
                           dim=params.dim, counts=freq, surfaces=surfaces,
                           epoch_losses=trainer.epoch_losses)
    if not np.isfinite(table.vectors).all():
        raise FloatingPointError("training produced non-finite vectors")
    return table


def cosine(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        log.warning("cosine of a zero vector; returning 0.0")
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def _check_tau(tau):
    if not 0.5 <= tau <= 1.0:
        raise ValueError(f"dominance threshold must lie in [0.5, 1], got {tau}")


def _side_candidates(table, side, tau):
    """Cached arrays for dominance-filtered neighbor queries.

    side 0 keeps src-dominated units, side 1 tgt-dominated. Returns
    (cand, unit_rows, totals, surf_rank): row indices passing the
    filter, their unit-normalized float64 vectors (zero rows kept as
    zeros), provenance totals, and each surface's lexicographic rank.
    """
    key = (side, tau)
    hit = table._nn_cache.get(key)
    if hit is not None:
        return hit
    total = table.provenance.sum(axis=1)
    with np.errstate(invalid="ignore"):
        frac = np.where(total > 0, table.provenance[:, side] / np.maximum(total, 1), -1.0)
    cand = np.flatnonzero(frac >= tau)
    M = table.vectors[cand].astype(np.float64)
    norms = np.linalg.norm(M, axis=1)
    M /= np.maximum(norms, 1e-30)[:, None]
    M[norms == 0.0] = 0.0
    order = sorted(range(len(cand)), key=lambda j: table.surfaces[cand[j]])
    surf_rank = np.empty(len(cand), dtype=np.int64)
    surf_rank[order] = np.arange(len(cand))
    entry = (cand, M, total[cand], surf_rank)
    table._nn_cache[key] = entry
    return entry


def nearest_lg2(query_surface, k, table, tau=0.8):
    """Top-k most cosine-similar units whose occurrences are tgt-dominated.

    Returns None when the query is out of vocabulary, and an empty list
    when nothing passes the dominance filter. Ties break toward the
    more frequent unit, then lexicographically.
    """
    _check_tau(tau)
    qi = table.vocab.get(query_surface)
    if qi is None:
        return None
    cand, M, totals, surf_rank = _side_candidates(table, 1, tau)
    if len(cand) == 0:
        return []
    q = table.vectors[qi].astype(np.float64)
    qn = np.linalg.norm(q)
    if qn == 0.0:
        log.warning("query %r has a zero vector", query_surface)
        sims = np.zeros(len(cand))
    else:
        sims = M @ (q / qn)
    # rank on provenance totals, the quantity that survives save/load;
    # lexsort treats its last key as primary
    ranked = np.lexsort((surf_rank, -totals, -sims))
    out = []
    for j in ranked:
        if cand[j] == qi:
            continue
        out.append((table.surfaces[cand[j]], float(sims[j])))
        if len(out) == k:
            break
    return out


def induce_lexicon(table, top_m, tau=0.8):
    """Best tgt-side neighbor for the top_m most frequent src-dominated units.

    Output rows are (src surface, tgt surface, similarity), sorted by
    similarity descending. Units with no neighbor past tau are skipped.
    """
    _check_tau(tau)
    lg1, _, totals, _ = _side_candidates(table, 0, tau)
    by_freq = {int(i): int(t) for i, t in zip(lg1, totals)}
    order = sorted(lg1, key=lambda i: (-by_freq[int(i)], table.surfaces[i]))
    out = []
    for i in order[:top_m]:
        hits = nearest_lg2(table.surfaces[i], 1, table, tau)
        if hits:
            out.append((table.surfaces[i], hits[0][0], hits[0][1]))
    out.sort(key=lambda row: (-row[2], row[0]))
    return out


def save_table(table, path):
    """Text format: header "<V> <dim>"; one unit per line: surface, dim
    floats at 6 significant digits, src_count, tgt_count."""
    with atomic_write(path) as fh:
        fh.write(f"{len(table.vocab)} {table.dim}\n")
        for i, s in enumerate(table.surfaces):
            floats = " ".join(f"{v:.6g}" for v in table.vectors[i])
            fh.write(f"{s} {floats} {table.provenance[i, 0]} {table.provenance[i, 1]}\n")


def load_table(path):
    lines = read_lines(path)
    if not lines:
        raise ValueError(f"{path}: empty embedding file")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError(f"{path}: line 1: malformed header {lines[0]!r}")
    V, dim = int(header[0]), int(header[1])
    rows = [ln for ln in lines[1:] if ln]
    if len(rows) != V:
        raise ValueError(f"{path}: header promises {V} rows, found {len(rows)}")
    vocab = {}
    surfaces = []
    vectors = np.zeros((V, dim), dtype=np.float32)
    prov = np.zeros((V, 2), dtype=np.int64)
    for i, ln in enumerate(rows):
        parts = ln.split(" ")
        if len(parts) != dim + 3:
            raise ValueError(f"{path}: line {i + 2}: expected {dim + 3} fields, got {len(parts)}")
        s = parts[0]
        if s in vocab:
            raise ValueError(f"{path}: line {i + 2}: duplicate surface {s!r}")
        vocab[s] = i
        surfaces.append(s)
        vectors[i] = [float(v) for v in parts[1:dim + 1]]
        prov[i] = (int(parts[dim + 1]), int(parts[dim + 2]))
    return EmbeddingTable(vocab=vocab, vectors=vectors, provenance=prov,
                          dim=dim, counts=prov.sum(axis=1), surfaces=surfaces)
