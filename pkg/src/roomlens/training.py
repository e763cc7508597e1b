"""Skip-gram training with negative sampling over tokenized corpora.

The classic recipe: for every center token, context tokens inside a
per-position window drawn uniformly from [1, window] are positives;
each positive gets `negatives` noise tokens drawn from the unigram
distribution raised to 3/4. Plain SGD on the logistic loss, learning
rate decayed linearly over the whole run.

All randomness is pre-drawn from a seeded numpy generator and the inner
update loop is JIT-compiled, so a single-worker run is bit-reproducible.
Multi-worker mode shards sentences across threads that update shared
weights without locks (racy by design, opt-in, not reproducible).
"""

from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from numba import njit

from .errors import InputError
from .rooms import Room


@dataclass
class TrainConfig:
    dim: int = 300
    window: int = 5
    min_count: int = 2
    epochs: int = 5
    negatives: int = 5
    learning_rate: float = 0.025
    min_learning_rate: float = 1e-4
    seed: int = 1
    subsample: float = 0.0  # frequent-token downsampling threshold; 0 disables
    workers: int = 1

    def __post_init__(self):
        if self.dim < 1:
            raise InputError("dim must be >= 1")
        if self.window < 1:
            raise InputError("window must be >= 1")
        if self.min_count < 1:
            raise InputError("min_count must be >= 1")
        if self.epochs < 1:
            raise InputError("epochs must be >= 1")
        if self.negatives < 1:
            raise InputError("negatives must be >= 1")
        if not self.learning_rate > 0:
            raise InputError("learning_rate must be > 0")
        if not 0 < self.min_learning_rate <= self.learning_rate:
            raise InputError("min_learning_rate must be in (0, learning_rate]")
        if self.subsample < 0:
            raise InputError("subsample must be >= 0")
        if self.workers < 1:
            raise InputError("workers must be >= 1")


@dataclass
class VocabStats:
    counts: dict[str, int]
    total_tokens: int
    kept: dict[str, int]  # token -> contiguous index


def build_vocab(corpus: Sequence[Sequence[str]], min_count: int) -> VocabStats:
    """Count tokens and keep those with frequency >= min_count.

    Kept tokens are ordered by descending frequency, ties broken
    lexicographically, and indexed contiguously from 0.
    """
    counts: Counter[str] = Counter()
    total = 0
    for sentence in corpus:
        counts.update(sentence)
        total += len(sentence)
    if total == 0:
        raise InputError("empty corpus: no tokens to count")
    survivors = sorted(
        (token for token, c in counts.items() if c >= min_count),
        key=lambda token: (-counts[token], token),
    )
    if not survivors:
        raise InputError(f"corpus below min_count: no token occurs >= {min_count} times")
    return VocabStats(dict(counts), total, {token: i for i, token in enumerate(survivors)})


@njit(cache=True, nogil=True)
def _sg_update(w_in, w_out, centers, contexts, negatives, alphas):
    """Sequential SGD over (center, context) pairs with presampled negatives."""
    dim = w_in.shape[1]
    n_neg = negatives.shape[1]
    for i in range(centers.shape[0]):
        c = centers[i]
        a = alphas[i]
        acc = np.zeros(dim, dtype=np.float32)
        o = contexts[i]
        s = 0.0
        for d in range(dim):
            s += w_in[c, d] * w_out[o, d]
        g = np.float32((1.0 - 1.0 / (1.0 + np.exp(-s))) * a)
        for d in range(dim):
            acc[d] += g * w_out[o, d]
            w_out[o, d] += g * w_in[c, d]
        for k in range(n_neg):
            t = negatives[i, k]
            s = 0.0
            for d in range(dim):
                s += w_in[c, d] * w_out[t, d]
            g = np.float32(-(1.0 / (1.0 + np.exp(-s))) * a)
            for d in range(dim):
                acc[d] += g * w_out[t, d]
                w_out[t, d] += g * w_in[c, d]
        for d in range(dim):
            w_in[c, d] += acc[d]


class SkipGramTrainer:
    """Trains a Room; keeps vocabulary and both weight matrices inspectable."""

    def __init__(self, config: TrainConfig | None = None):
        self.config = config or TrainConfig()
        self.stats: VocabStats | None = None
        self.tokens: list[str] = []
        self.w_in: np.ndarray | None = None
        self.w_out: np.ndarray | None = None
        self._noise_cum: np.ndarray | None = None

    def fit(
        self,
        corpus: Iterable[Sequence[str]],
        on_epoch_end: Callable[["SkipGramTrainer", int], None] | None = None,
    ) -> Room:
        cfg = self.config
        corpus = [list(s) for s in corpus]
        self.stats = build_vocab(corpus, cfg.min_count)
        kept = self.stats.kept
        self.tokens = list(kept)
        vocab_size = len(self.tokens)

        sentences = []
        for sentence in corpus:
            ids = np.array([kept[t] for t in sentence if t in kept], dtype=np.int64)
            if ids.size:
                sentences.append(ids)
        position_offsets = np.concatenate(([0], np.cumsum([len(s) for s in sentences]))) if sentences else np.zeros(1)
        per_epoch = int(position_offsets[-1])
        total_positions = max(1, per_epoch * cfg.epochs)

        init_rng = np.random.default_rng(cfg.seed)
        self.w_in = ((init_rng.random((vocab_size, cfg.dim), dtype=np.float32) - 0.5) / cfg.dim).astype(np.float32)
        self.w_out = np.zeros((vocab_size, cfg.dim), dtype=np.float32)

        kept_counts = np.array([self.stats.counts[t] for t in self.tokens], dtype=np.float64)
        noise_mass = kept_counts**0.75
        self._noise_cum = np.cumsum(noise_mass)
        keep_prob = self._keep_probabilities(kept_counts) if cfg.subsample > 0 else None

        n_workers = min(cfg.workers, max(1, len(sentences)))
        shards = [list(range(w, len(sentences), n_workers)) for w in range(n_workers)]
        worker_rngs = [np.random.default_rng((cfg.seed, 1 + w)) for w in range(n_workers)]
        n_neg = cfg.negatives if vocab_size > 1 else 0

        lr0, lr1 = cfg.learning_rate, cfg.min_learning_rate

        def sentence_alpha(epoch: int, sentence_index: int) -> float:
            progress = (epoch * per_epoch + position_offsets[sentence_index]) / total_positions
            return lr0 + (lr1 - lr0) * progress

        for epoch in range(cfg.epochs):
            batches = []
            for w in range(n_workers):
                batches.append(
                    self._build_batch(
                        [sentences[i] for i in shards[w]],
                        [sentence_alpha(epoch, i) for i in shards[w]],
                        worker_rngs[w],
                        n_neg,
                        keep_prob,
                    )
                )
            if n_workers == 1:
                _sg_update(self.w_in, self.w_out, *batches[0])
            else:
                threads = [
                    threading.Thread(target=_sg_update, args=(self.w_in, self.w_out, *batch))
                    for batch in batches
                ]
                for t in threads:
                    t.start()
                for t in threads:
                    t.join()
            if on_epoch_end is not None:
                on_epoch_end(self, epoch)

        meta = {
            "source": "trained",
            "window": cfg.window,
            "min_count": cfg.min_count,
            "epochs": cfg.epochs,
            "negatives": cfg.negatives,
            "learning_rate": cfg.learning_rate,
            "seed": cfg.seed,
            "subsample": cfg.subsample,
            "workers": cfg.workers,
            "total_tokens": self.stats.total_tokens,
        }
        return Room(self.tokens, self.w_in, meta=meta)

    def _keep_probabilities(self, kept_counts: np.ndarray) -> np.ndarray:
        threshold = self.config.subsample * kept_counts.sum()
        prob = (np.sqrt(kept_counts / threshold) + 1.0) * (threshold / kept_counts)
        return np.minimum(prob, 1.0)

    def _build_batch(self, sentences, alphas_per_sentence, rng, n_neg, keep_prob):
        window = self.config.window
        cum = self._noise_cum
        total_mass = cum[-1]
        centers_parts, contexts_parts, alpha_parts = [], [], []
        for ids, alpha in zip(sentences, alphas_per_sentence):
            if keep_prob is not None:
                ids = ids[rng.random(ids.size) < keep_prob[ids]]
            size = ids.size
            if size < 2:
                continue
            spans = rng.integers(1, window + 1, size=size)
            pos_contexts = []
            for i in range(size):
                left = ids[max(0, i - spans[i]) : i]
                right = ids[i + 1 : i + 1 + spans[i]]
                pos_contexts.append(np.concatenate((left, right)))
            counts = np.array([p.size for p in pos_contexts])
            centers_parts.append(np.repeat(ids, counts))
            contexts_parts.append(np.concatenate(pos_contexts))
            alpha_parts.append(np.full(int(counts.sum()), alpha, dtype=np.float32))
        if not centers_parts:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty, np.zeros((0, n_neg), dtype=np.int64), np.zeros(0, dtype=np.float32)
        centers = np.concatenate(centers_parts)
        contexts = np.concatenate(contexts_parts)
        alphas = np.concatenate(alpha_parts)
        negs = np.zeros((centers.size, n_neg), dtype=np.int64)
        if n_neg:
            negs = np.searchsorted(cum, rng.random((centers.size, n_neg)) * total_mass, side="right")
            # a noise token must differ from the positive it contrasts with
            for _ in range(100):
                mask = negs == contexts[:, None]
                hits = int(mask.sum())
                if not hits:
                    break
                negs[mask] = np.searchsorted(cum, rng.random(hits) * total_mass, side="right")
            negs = negs.astype(np.int64)
        return centers, contexts, negs, alphas

    def probe_loss(self, pairs: Sequence[tuple[str, str]], negatives: int = 5, seed: int = 0) -> float:
        """Mean negative-sampling loss over a fixed probe batch.

        Noise draws come from a generator seeded here, independent of the
        training stream, so repeated calls measure the same quantity.
        """
        if self.w_in is None or self.stats is None:
            raise InputError("trainer has not been fitted")
        kept = self.stats.kept
        rng = np.random.default_rng(seed)
        cum = self._noise_cum
        total_mass = cum[-1]
        losses = []
        for center, context in pairs:
            if center not in kept or context not in kept:
                raise InputError(f"probe pair ({center!r}, {context!r}) not in kept vocabulary")
            u = self.w_in[kept[center]].astype(np.float64)
            v = self.w_out[kept[context]].astype(np.float64)
            loss = float(np.logaddexp(0.0, -np.dot(u, v)))
            if negatives and len(kept) > 1:
                noise = np.searchsorted(cum, rng.random(negatives) * total_mass, side="right")
                for t in noise:
                    loss += float(np.logaddexp(0.0, np.dot(u, self.w_out[t].astype(np.float64))))
            losses.append(loss)
        if not losses:
            raise InputError("empty probe batch")
        return float(np.mean(losses))


def train_skipgram(corpus: Iterable[Sequence[str]], config: TrainConfig | None = None) -> Room:
    """Train a Room from a tokenized corpus."""
    return SkipGramTrainer(config).fit(corpus)
