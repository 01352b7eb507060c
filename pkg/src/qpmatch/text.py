"""Text/pattern data model and classical closest-match machinery.

Symbols are small integer codes.  Texts ingested from bytes use the identity
mapping byte -> code, so the alphabet is decoupled from any particular
encoding and k-gram recoding can assign fresh codes uniformly.  All offsets
and positions are zero-based.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

#: Reserved padding code; never a member of any alphabet.
SENTINEL = -1

INDEX_FORMAT_VERSION = 1


def _frozen_array(values, dtype=np.int64) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype).copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Text:
    """An immutable string of symbol codes of length N over a finite alphabet.

    ``padded_from`` records the original length when sentinel padding has
    been appended (see :func:`pad_to_power_of_two`); it is ``None`` for
    unpadded texts.
    """

    symbols: np.ndarray
    alphabet: frozenset
    padded_from: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "symbols", _frozen_array(self.symbols))
        if self.n < 1:
            raise DomainError("text must contain at least one symbol")
        if SENTINEL in self.alphabet:
            raise DomainError("alphabet may not contain the padding sentinel")
        limit = self.padded_from if self.padded_from is not None else self.n
        body = self.symbols[:limit]
        if not np.isin(body, list(self.alphabet)).all():
            raise DomainError("text contains symbols outside its alphabet")
        if self.padded_from is not None and not (self.symbols[limit:] == SENTINEL).all():
            raise DomainError("padding region must hold only the sentinel code")

    @property
    def n(self) -> int:
        return len(self.symbols)

    @classmethod
    def from_codes(cls, codes, alphabet=None) -> "Text":
        codes = np.asarray(codes, dtype=np.int64)
        if alphabet is None:
            alphabet = frozenset(int(c) for c in codes)
        return cls(codes, frozenset(alphabet))

    @classmethod
    def from_bytes(cls, data: bytes) -> "Text":
        if not data:
            raise DomainError("empty text")
        return cls.from_codes(np.frombuffer(data, dtype=np.uint8).astype(np.int64))

    @classmethod
    def from_file(cls, path) -> "Text":
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())


@dataclass(frozen=True)
class Pattern:
    """An immutable sequence of symbol codes of length M."""

    symbols: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "symbols", _frozen_array(self.symbols))
        if self.m < 1:
            raise DomainError("pattern must contain at least one symbol")

    @property
    def m(self) -> int:
        return len(self.symbols)

    @classmethod
    def from_codes(cls, codes) -> "Pattern":
        return cls(np.asarray(codes, dtype=np.int64))

    @classmethod
    def from_bytes(cls, data: bytes) -> "Pattern":
        if not data:
            raise DomainError("empty pattern")
        return cls.from_codes(np.frombuffer(data, dtype=np.uint8).astype(np.int64))


@dataclass(frozen=True)
class SymbolIndicator:
    """Membership bitvector of one symbol: bit i is set iff text[i] == symbol."""

    symbol: int
    bits: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "bits", _frozen_array(self.bits, dtype=np.uint8))


@dataclass(frozen=True)
class OracleIndex:
    """One :class:`SymbolIndicator` per alphabet symbol of a text of length n."""

    n: int
    indicators: dict = field(default_factory=dict)

    def indicator_for(self, symbol: int) -> SymbolIndicator:
        """Indicator for ``symbol``; all-zero for symbols outside the alphabet."""
        ind = self.indicators.get(int(symbol))
        if ind is None:
            ind = SymbolIndicator(int(symbol), np.zeros(self.n, dtype=np.uint8))
        return ind

    def to_json(self) -> str:
        payload = {
            "version": INDEX_FORMAT_VERSION,
            "n": self.n,
            "alphabet": sorted(self.indicators),
            "indicators": {
                str(sym): base64.b64encode(np.packbits(ind.bits).tobytes()).decode("ascii")
                for sym, ind in sorted(self.indicators.items())
            },
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, document: str) -> "OracleIndex":
        payload = json.loads(document)
        if payload.get("version") != INDEX_FORMAT_VERSION:
            raise DomainError(f"unsupported index format version: {payload.get('version')!r}")
        n = int(payload["n"])
        indicators = {}
        for sym_str, encoded in payload["indicators"].items():
            packed = np.frombuffer(base64.b64decode(encoded), dtype=np.uint8)
            bits = np.unpackbits(packed)[:n]
            indicators[int(sym_str)] = SymbolIndicator(int(sym_str), bits)
        return cls(n, indicators)


@dataclass(frozen=True)
class ClassicalMatchResult:
    """Best Hamming agreement score and all offsets attaining it, ascending."""

    best_score: int
    offsets: tuple


def build_index(text: Text) -> OracleIndex:
    """Build the per-symbol membership index of ``text`` in one pass.

    Sentinel padding positions belong to no indicator.
    """
    indicators = {
        int(sym): SymbolIndicator(int(sym), (text.symbols == sym).astype(np.uint8))
        for sym in sorted(text.alphabet)
    }
    return OracleIndex(text.n, indicators)


def f_sigma(index: OracleIndex, symbol: int, i: int) -> int:
    """Return 1 iff text position ``i`` holds ``symbol``."""
    if not 0 <= i < index.n:
        raise DomainError(f"position {i} out of range [0, {index.n})")
    if int(symbol) not in index.indicators:
        raise DomainError(f"symbol {symbol!r} not in alphabet")
    return int(index.indicators[int(symbol)].bits[i])


def hamming_score(text: Text, pattern: Pattern, offset: int) -> int:
    """Count per-position symbol agreements of ``pattern`` at ``offset``."""
    if not 0 <= offset <= text.n - pattern.m:
        raise DomainError(f"offset {offset} out of range [0, {text.n - pattern.m}]")
    window = text.symbols[offset : offset + pattern.m]
    return int(np.count_nonzero(window == pattern.symbols))


def closest_match_classical(text: Text, pattern: Pattern) -> ClassicalMatchResult:
    """Scan all offsets and return the maximal score with its full tie set."""
    n, m = text.n, pattern.m
    if m > n:
        raise DomainError(f"pattern length {m} exceeds text length {n}")
    scores = np.zeros(n - m + 1, dtype=np.int64)
    for j in range(m):
        scores += text.symbols[j : j + n - m + 1] == pattern.symbols[j]
    best = int(scores.max())
    offsets = tuple(int(o) for o in np.flatnonzero(scores == best))
    return ClassicalMatchResult(best, offsets)


def recode_kgrams(text: Text, pattern: Pattern, k: int):
    """Recode text and pattern over the alphabet of overlapping k-grams.

    Each position of the recoded text holds the code of the k-gram starting
    there, so the text shrinks to N-k+1 positions and the pattern to M-k+1.
    Codes are assigned by first appearance, text first, then pattern, which
    makes the recoding deterministic.
    """
    if k not in (2, 3):
        raise DomainError("k-gram size must be 2 or 3")
    if pattern.m < k:
        raise DomainError(f"pattern of length {pattern.m} too short for {k}-grams")
    if text.n < k:
        raise DomainError(f"text of length {text.n} too short for {k}-grams")

    codes = {}

    def encode(symbols) -> list:
        out = []
        for i in range(len(symbols) - k + 1):
            gram = tuple(int(s) for s in symbols[i : i + k])
            out.append(codes.setdefault(gram, len(codes)))
        return out

    new_text = encode(text.symbols)
    new_pattern = encode(pattern.symbols)
    return Text.from_codes(new_text), Pattern.from_codes(new_pattern)


def pad_to_power_of_two(text: Text, m: int) -> Text:
    """Append sentinel symbols until N - m is an exact power of two.

    Returns ``text`` unchanged when N - m already is one.  For m == N the
    text is padded until N - m = 1 (= 2^0).
    """
    if m > text.n:
        raise DomainError(f"pattern length {m} exceeds text length {text.n}")
    gap = text.n - m
    target = 1
    while target < gap:
        target *= 2
    if target == gap:
        return text
    padded = np.concatenate([text.symbols, np.full(target - gap, SENTINEL, dtype=np.int64)])
    original = text.padded_from if text.padded_from is not None else text.n
    return Text(padded, text.alphabet, padded_from=original)
