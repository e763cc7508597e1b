"""Embedding spaces ("rooms"): vocabulary, vectors, similarity queries, persistence.

A room is the frozen point of view used for all scoring: an ordered
vocabulary plus one embedding row per token. Vectors are stored as
float32 (the on-disk precision); all similarity arithmetic runs in
float64 on exact casts of those rows, so results are reproducible and
independent of how a room was produced.
"""

from __future__ import annotations

import struct
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Sequence

import numpy as np

from ._util import atomic_write
from .errors import (
    DegenerateVectorError,
    DimensionMismatchError,
    InputError,
    ParseError,
    TokenNotFoundError,
)

BINARY_MAGIC = b"ROOM1"


def cosine(a, b) -> float:
    """Cosine similarity of two vectors.

    Raw in the sense that negative values are preserved; the result is only
    clipped to [-1, 1] to strip float rounding noise (mathematically the
    value cannot leave that interval).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1:
        raise DimensionMismatchError("cosine expects 1-d vectors")
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatchError(f"vector lengths differ: {a.shape[0]} vs {b.shape[0]}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise DegenerateVectorError("degenerate vector: zero norm")
    return _clip(float(np.dot(a, b)) / (na * nb))


def _clip(value: float) -> float:
    if value > 1.0:
        return 1.0
    if value < -1.0:
        return -1.0
    return value


class Room:
    """Immutable vocabulary + embedding matrix.

    Safe to share across threads once constructed: the matrix is marked
    read-only and every query is pure.
    """

    def __init__(self, tokens: Sequence[str], matrix, meta: dict | None = None):
        tokens = list(tokens)
        matrix = np.array(matrix, dtype=np.float32)
        if matrix.ndim != 2:
            raise InputError("matrix must be 2-dimensional (vocab x dim)")
        if matrix.shape[0] != len(tokens):
            raise InputError(f"{len(tokens)} tokens but {matrix.shape[0]} matrix rows")
        if matrix.shape[1] < 1:
            raise InputError("embedding size must be >= 1")
        if not np.all(np.isfinite(matrix)):
            raise InputError("matrix contains non-finite values")
        index: dict[str, int] = {}
        for i, token in enumerate(tokens):
            if not token:
                raise InputError("empty token")
            if token in index:
                raise InputError(f"duplicate token {token!r}")
            index[token] = i
        matrix.setflags(write=False)
        self._tokens = tuple(tokens)
        self._index = index
        self._matrix = matrix
        self.meta = dict(meta) if meta is not None else {}
        self._m64: np.ndarray | None = None
        self._norms: np.ndarray | None = None

    # -- basic accessors -------------------------------------------------

    @property
    def tokens(self) -> tuple[str, ...]:
        return self._tokens

    @property
    def vocab(self):
        """Ordered read-only mapping token -> row index."""
        return MappingProxyType(self._index)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[1]

    def __len__(self) -> int:
        return len(self._tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, Room):
            return NotImplemented
        return self._tokens == other._tokens and np.array_equal(self._matrix, other._matrix)

    def lookup(self, token: str) -> np.ndarray | None:
        """The stored row for `token`, or None when out of vocabulary."""
        i = self._index.get(token)
        return None if i is None else self._matrix[i]

    # -- similarity ------------------------------------------------------

    def _matrix64(self) -> np.ndarray:
        if self._m64 is None:
            m = self._matrix.astype(np.float64)
            m.setflags(write=False)
            self._m64 = m
        return self._m64

    def _row_norms(self) -> np.ndarray:
        if self._norms is None:
            m = self._matrix64()
            norms = np.array([float(np.linalg.norm(m[i])) for i in range(m.shape[0])])
            norms.setflags(write=False)
            self._norms = norms
        return self._norms

    def nearest(self, seed, k: int = 10, t: float = 0.0) -> list[tuple[str, float]]:
        """Up to `k` tokens with cosine similarity to `seed` strictly above `t`.

        `seed` may be a token (excluded from its own results) or a raw
        vector. Sorted by descending similarity, ties broken by ascending
        vocabulary index. Exact brute-force scan: every candidate score is
        computed with the same arithmetic as cosine(). Rows with zero norm
        have undefined similarity and are never returned.
        """
        exclude = -1
        if isinstance(seed, str):
            idx = self._index.get(seed)
            if idx is None:
                raise TokenNotFoundError(seed)
            query = self._matrix64()[idx]
            exclude = idx
        else:
            query = np.asarray(seed, dtype=np.float64)
            if query.ndim != 1 or query.shape[0] != self.dim:
                raise DimensionMismatchError(
                    f"seed vector has length {query.shape[0] if query.ndim == 1 else '?'}, room dim is {self.dim}"
                )
        nq = float(np.linalg.norm(query))
        if nq == 0.0:
            raise DegenerateVectorError("degenerate seed vector: zero norm")
        if k <= 0:
            return []
        m = self._matrix64()
        norms = self._row_norms()
        hits: list[tuple[float, int]] = []
        for i in range(len(self._tokens)):
            if i == exclude:
                continue
            ni = norms[i]
            if ni == 0.0:
                continue
            score = _clip(float(np.dot(m[i], query)) / (ni * nq))
            if score > t:
                hits.append((-score, i))
        hits.sort()
        return [(self._tokens[i], -neg) for neg, i in hits[:k]]


# -- persistence ---------------------------------------------------------


def save_room(room: Room, path, format: str = "binary") -> None:
    """Write a room to disk (atomically) in the text or binary layout."""
    if format == "text":
        _save_text(room, path)
    elif format == "binary":
        _save_binary(room, path)
    else:
        raise InputError(f"unknown room format {format!r} (expected 'text' or 'binary')")


def load_room(path, format: str | None = None) -> Room:
    """Read a room from disk. With format=None the layout is sniffed."""
    path = Path(path)
    if format is None:
        with open(path, "rb") as handle:
            format = "binary" if handle.read(len(BINARY_MAGIC)) == BINARY_MAGIC else "text"
    if format == "text":
        return _load_text(path)
    if format == "binary":
        return _load_binary(path)
    raise InputError(f"unknown room format {format!r} (expected 'text' or 'binary')")


def _format_component(x: np.float32) -> str:
    # 9 significant digits round-trips any float32 exactly.
    return "%.9g" % float(x)


def _save_text(room: Room, path) -> None:
    for token in room.tokens:
        if any(ch.isspace() for ch in token):
            raise InputError(f"token {token!r} contains whitespace; not representable in text format")
    with atomic_write(path, "w", encoding="utf-8") as out:
        out.write(f"{len(room)} {room.dim}\n")
        for i, token in enumerate(room.tokens):
            row = " ".join(_format_component(x) for x in room.matrix[i])
            out.write(f"{token} {row}\n")


def _load_text(path) -> Room:
    with open(path, "r", encoding="utf-8") as handle:
        lines = handle.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError(path, 1, "empty file")
    header = lines[0].split(" ")
    if len(header) != 2:
        raise ParseError(path, 1, f"malformed header {lines[0]!r}; expected '<vocab> <dim>'")
    try:
        count, dim = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError(path, 1, f"malformed header {lines[0]!r}; expected two integers") from None
    if count < 0 or dim < 1:
        raise ParseError(path, 1, f"invalid header values {lines[0]!r}")
    if len(lines) - 1 != count:
        raise ParseError(path, len(lines), f"header declares {count} rows, file has {len(lines) - 1}")
    tokens: list[str] = []
    seen: set[str] = set()
    matrix = np.empty((count, dim), dtype=np.float32)
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(" ")
        if len(parts) != dim + 1:
            raise ParseError(path, lineno, f"expected token + {dim} components, got {len(parts)} fields")
        token = parts[0]
        if not token:
            raise ParseError(path, lineno, "empty token")
        if token in seen:
            raise ParseError(path, lineno, f"duplicate token {token!r}")
        seen.add(token)
        tokens.append(token)
        try:
            matrix[lineno - 2] = [float(p) for p in parts[1:]]
        except ValueError:
            raise ParseError(path, lineno, "non-numeric vector component") from None
    try:
        return Room(tokens, matrix, meta={"source": "loaded", "path": str(path), "format": "text"})
    except InputError as exc:
        raise ParseError(path, None, str(exc)) from None


def _save_binary(room: Room, path) -> None:
    with atomic_write(path, "wb") as out:
        out.write(BINARY_MAGIC)
        out.write(struct.pack("<QQ", len(room), room.dim))
        for i, token in enumerate(room.tokens):
            raw = token.encode("utf-8")
            out.write(struct.pack("<I", len(raw)))
            out.write(raw)
            out.write(room.matrix[i].astype("<f4").tobytes())


def _load_binary(path) -> Room:
    data = Path(path).read_bytes()
    view = memoryview(data)
    pos = 0

    def need(n: int, what: str) -> memoryview:
        nonlocal pos
        if pos + n > len(data):
            raise ParseError(path, None, f"truncated file: expected {what} at byte {pos}")
        chunk = view[pos : pos + n]
        pos += n
        return chunk

    if bytes(need(len(BINARY_MAGIC), "magic")) != BINARY_MAGIC:
        raise ParseError(path, None, "bad magic; not a binary room file")
    count, dim = struct.unpack("<QQ", need(16, "header"))
    if dim < 1:
        raise ParseError(path, None, f"invalid embedding size {dim}")
    tokens: list[str] = []
    seen: set[str] = set()
    matrix = np.empty((count, dim), dtype=np.float32)
    for entry in range(count):
        (token_len,) = struct.unpack("<I", need(4, f"token length of entry {entry}"))
        try:
            token = bytes(need(token_len, f"token bytes of entry {entry}")).decode("utf-8")
        except UnicodeDecodeError:
            raise ParseError(path, None, f"entry {entry}: token is not valid UTF-8") from None
        if not token:
            raise ParseError(path, None, f"entry {entry}: empty token")
        if token in seen:
            raise ParseError(path, None, f"entry {entry}: duplicate token {token!r}")
        seen.add(token)
        tokens.append(token)
        matrix[entry] = np.frombuffer(need(4 * dim, f"vector of entry {entry}"), dtype="<f4")
    if pos != len(data):
        raise ParseError(path, None, f"trailing data after {count} entries (byte {pos})")
    try:
        return Room(tokens, matrix, meta={"source": "loaded", "path": str(path), "format": "binary"})
    except InputError as exc:
        raise ParseError(path, None, str(exc)) from None
