import json

import numpy as np
import pytest

from qpmatch import (
    SENTINEL,
    DomainError,
    OracleIndex,
    Pattern,
    Text,
    build_index,
    closest_match_classical,
    f_sigma,
    hamming_score,
    pad_to_power_of_two,
    recode_kgrams,
)


def T(s: str) -> Text:
    return Text.from_bytes(s.encode())


def P(s: str) -> Pattern:
    return Pattern.from_bytes(s.encode())


class TestBuildIndex:
    def test_aba(self):
        idx = build_index(T("aba"))
        assert idx.indicator_for(ord("a")).bits.tolist() == [1, 0, 1]
        assert idx.indicator_for(ord("b")).bits.tolist() == [0, 1, 0]

    def test_single_symbol_text(self):
        idx = build_index(T("zzzz"))
        assert list(idx.indicators) == [ord("z")]
        assert idx.indicator_for(ord("z")).bits.tolist() == [1, 1, 1, 1]

    def test_partition_property(self):
        rng = np.random.default_rng(7)
        text = Text.from_codes(rng.integers(0, 4, size=64))
        idx = build_index(text)
        total = sum(ind.bits.astype(int) for ind in idx.indicators.values())
        assert (total == 1).all()

    def test_empty_text_rejected(self):
        with pytest.raises(DomainError):
            Text.from_bytes(b"")

    def test_unknown_symbol_gives_zero_indicator(self):
        idx = build_index(T("abc"))
        assert idx.indicator_for(ord("x")).bits.sum() == 0


class TestFSigma:
    def test_hit(self):
        idx = build_index(T("abc"))
        assert f_sigma(idx, ord("b"), 1) == 1

    def test_miss(self):
        idx = build_index(T("abc"))
        assert f_sigma(idx, ord("b"), 0) == 0

    def test_agrees_with_direct_scan(self):
        rng = np.random.default_rng(3)
        codes = rng.integers(0, 5, size=40)
        idx = build_index(Text.from_codes(codes))
        for _ in range(100):
            i = int(rng.integers(0, 40))
            sym = int(rng.integers(0, 5))
            assert f_sigma(idx, sym, i) == int(codes[i] == sym)

    def test_errors(self):
        idx = build_index(T("abc"))
        with pytest.raises(DomainError):
            f_sigma(idx, ord("a"), 3)
        with pytest.raises(DomainError):
            f_sigma(idx, ord("x"), 0)


class TestHammingScore:
    def test_partial(self):
        assert hamming_score(T("abcd"), P("abd"), 0) == 2

    def test_exact_window(self):
        assert hamming_score(T("xyabcz"), P("abc"), 2) == 3

    def test_matches_independent_recount(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            codes = rng.integers(0, 3, size=20)
            pat = rng.integers(0, 3, size=4)
            o = int(rng.integers(0, 17))
            expected = sum(int(codes[o + j] == pat[j]) for j in range(4))
            assert hamming_score(Text.from_codes(codes), Pattern.from_codes(pat), o) == expected

    def test_offset_out_of_range(self):
        with pytest.raises(DomainError):
            hamming_score(T("abcd"), P("ab"), 3)


class TestClosestMatch:
    def test_unique(self):
        res = closest_match_classical(T("xxabxx"), P("ab"))
        assert res.best_score == 2 and res.offsets == (2,)

    def test_all_offsets_tie(self):
        res = closest_match_classical(T("aaaa"), P("aa"))
        assert res.best_score == 2 and res.offsets == (0, 1, 2)

    def test_equals_brute_force(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            n = int(rng.integers(4, 65))
            m = int(rng.integers(1, min(n, 8) + 1))
            codes = rng.integers(0, 4, size=n)
            pat = rng.integers(0, 4, size=m)
            text, pattern = Text.from_codes(codes), Pattern.from_codes(pat)
            scores = [sum(int(codes[o + j] == pat[j]) for j in range(m)) for o in range(n - m + 1)]
            best = max(scores)
            res = closest_match_classical(text, pattern)
            assert res.best_score == best
            assert list(res.offsets) == [o for o, s in enumerate(scores) if s == best]

    def test_pattern_longer_than_text(self):
        with pytest.raises(DomainError):
            closest_match_classical(T("ab"), P("abc"))

    def test_exact_match_iff_score_m(self):
        text, pattern = T("abcabd"), P("abd")
        for o in range(4):
            occurs = bytes(text.symbols[o : o + 3].astype(np.uint8)) == b"abd"
            assert (hamming_score(text, pattern, o) == 3) == occurs


class TestRecodeKgrams:
    def test_text_windows(self):
        text, _ = recode_kgrams(T("abab"), P("ab"), 2)
        # three overlapping 2-grams: ab, ba, ab
        assert text.n == 3
        assert text.symbols[0] == text.symbols[2] != text.symbols[1]

    def test_pattern_windows(self):
        _, pat = recode_kgrams(T("abcabc"), P("abc"), 2)
        assert pat.m == 2

    def test_preserves_exact_match_offsets(self):
        rng = np.random.default_rng(9)
        for k in (2, 3):
            codes = rng.integers(0, 3, size=40)
            pat = np.array([5, 6, 7, 5])
            codes[12:16] = pat  # planted occurrence with unique symbols
            text, pattern = Text.from_codes(codes), Pattern.from_codes(pat)
            rt, rp = recode_kgrams(text, pattern, k)
            orig = [o for o in range(37) if hamming_score(text, pattern, o) == 4]
            rec = [o for o in range(rt.n - rp.m + 1) if hamming_score(rt, rp, o) == rp.m]
            assert rec == orig == [12]

    def test_rejects_bad_k(self):
        with pytest.raises(DomainError):
            recode_kgrams(T("abcd"), P("ab"), 4)
        with pytest.raises(DomainError):
            recode_kgrams(T("abcd"), P("a"), 2)


class TestPadding:
    def test_pads_to_next_power(self):
        padded = pad_to_power_of_two(T("abcabcabca"), 4)  # N=10, gap 6 -> 8
        assert padded.n == 12
        assert padded.padded_from == 10
        assert (padded.symbols[10:] == SENTINEL).all()

    def test_identity_when_already_power(self):
        text = T("abcabcabcabc")  # N=12, gap 8 with M=4
        assert pad_to_power_of_two(text, 4) is text

    def test_indicators_zero_over_tail(self):
        padded = pad_to_power_of_two(T("abcabcabca"), 4)
        idx = build_index(padded)
        for ind in idx.indicators.values():
            assert ind.bits[10:].sum() == 0


class TestIndexSerialization:
    def test_round_trip(self):
        idx = build_index(T("abracadabra"))
        doc = idx.to_json()
        back = OracleIndex.from_json(doc)
        assert back.n == idx.n
        assert set(back.indicators) == set(idx.indicators)
        for sym in idx.indicators:
            assert (back.indicators[sym].bits == idx.indicators[sym].bits).all()

    def test_schema_fields(self):
        payload = json.loads(build_index(T("aba")).to_json())
        assert set(payload) == {"version", "n", "alphabet", "indicators"}
        assert payload["n"] == 3
        assert payload["alphabet"] == [ord("a"), ord("b")]

    def test_rejects_unknown_version(self):
        payload = json.loads(build_index(T("aba")).to_json())
        payload["version"] = 99
        with pytest.raises(DomainError):
            OracleIndex.from_json(json.dumps(payload))
