import random

import pytest

from convo_miner.patterns import (
    EmptySelectionError,
    MiningParams,
    Pattern,
    PatternKind,
    extract_sequences,
    extract_sets,
    match_pattern,
    mine_patterns,
    sort_patterns,
)

from conftest import make_conversation, random_conversations
from _oracles import (
    oracle_catalog,
    oracle_contains_sequence,
    oracle_sequences,
    oracle_sets,
)


class TestExtractSequences:
    def test_three_turns_max_len_two(self):
        conv = make_conversation([["DI"], ["FQ"], ["DI"]])
        expected = {("DI",), ("FQ",), ("DI", "FQ"), ("FQ", "DI"), ("DI", "DI")}
        assert extract_sequences(conv, 2) == expected

    def test_single_turn(self):
        conv = make_conversation([["DI"]])
        assert extract_sequences(conv, 4) == {("DI",)}

    def test_empty_conversation(self):
        conv = make_conversation([])
        assert extract_sequences(conv, 4) == frozenset()

    def test_multi_code_turn_cannot_fill_two_positions(self):
        conv = make_conversation([["A", "B"]])
        assert extract_sequences(conv, 2) == {("A",), ("B",)}

    def test_duplicate_codes_allowed_across_turns(self):
        conv = make_conversation([["DI"], ["DI"]])
        assert ("DI", "DI") in extract_sequences(conv, 2)

    def test_matches_brute_force_enumeration(self):
        rng = random.Random(13)
        for _ in range(150):
            turns = [rng.sample("ABCD", rng.randint(1, 3)) for _ in range(rng.randint(0, 6))]
            conv = make_conversation(turns)
            max_len = rng.randint(1, 4)
            assert extract_sequences(conv, max_len) == oracle_sequences(
                [set(t) for t in turns], max_len
            )


class TestExtractSets:
    def test_two_code_union(self):
        conv = make_conversation([["DI"], ["FQ", "DI"]])
        expected = {frozenset({"DI"}), frozenset({"FQ"}), frozenset({"DI", "FQ"})}
        assert extract_sets(conv, 3) == expected

    def test_single_code(self):
        conv = make_conversation([["DI"], ["DI"]])
        assert extract_sets(conv, 5) == {frozenset({"DI"})}

    def test_four_codes_capped_at_pairs(self):
        conv = make_conversation([["A", "B"], ["C"], ["D"]])
        result = extract_sets(conv, 2)
        assert len(result) == 4 + 6  # C(4,1) + C(4,2)

    def test_matches_brute_force_enumeration(self):
        rng = random.Random(29)
        for _ in range(100):
            turns = [rng.sample("ABCDE", rng.randint(1, 3)) for _ in range(rng.randint(0, 5))]
            conv = make_conversation(turns)
            size = rng.randint(1, 4)
            assert extract_sets(conv, size) == oracle_sets([set(t) for t in turns], size)


class TestMinePatterns:
    def test_support_counts_conversations(self):
        convs = [
            make_conversation([["DI"], ["FQ"]], student="a"),
            make_conversation([["DI"], ["X"], ["FQ"]], student="b"),
        ]
        catalog = mine_patterns(convs, MiningParams(min_support=2))
        by_key = {(p.kind, p.codes): p for p in catalog.patterns}
        pattern = by_key[(PatternKind.SEQUENCE, ("DI", "FQ"))]
        assert pattern.support == 2
        assert pattern.supporters == (("a", "T1"), ("b", "T1"))

    def test_average_score_over_supporters(self):
        convs = [
            make_conversation([["DI"]], student="a", score=1.0),
            make_conversation([["DI"]], student="b", score=0.5),
        ]
        catalog = mine_patterns(convs, MiningParams(min_support=2))
        assert all(p.avg_score == pytest.approx(0.75) for p in catalog.patterns)

    def test_occurrence_multiplicity_counts_once(self):
        convs = [
            make_conversation([["DI"], ["DI"], ["DI"]], student="a"),
            make_conversation([["DI"]], student="b"),
        ]
        catalog = mine_patterns(convs, MiningParams(min_support=1, max_seq_len=1))
        by_key = {(p.kind, p.codes): p for p in catalog.patterns}
        assert by_key[(PatternKind.SEQUENCE, ("DI",))].support == 2

    def test_min_support_drops_rare_patterns(self):
        convs = [
            make_conversation([["DI"]], student="a"),
            make_conversation([["FQ"]], student="b"),
            make_conversation([["FQ"]], student="c"),
        ]
        catalog = mine_patterns(convs, MiningParams(min_support=2))
        codes = {p.codes for p in catalog.patterns}
        assert ("FQ",) in codes and ("DI",) not in codes

    def test_empty_selection_rejected(self):
        with pytest.raises(EmptySelectionError):
            mine_patterns([], MiningParams())

    def test_deterministic_catalog_order(self):
        convs = [
            make_conversation([["B"], ["A"]], student="a"),
            make_conversation([["B"], ["A"]], student="b"),
        ]
        catalog = mine_patterns(convs, MiningParams(min_support=2))
        keys = [(p.kind.value, p.length, p.codes) for p in catalog.patterns]
        assert keys == sorted(keys)

    def test_oracle_equivalence_random_batches(self):
        rng = random.Random(4)
        for _ in range(60):
            convs = random_conversations(rng)
            params = MiningParams(min_support=rng.randint(1, 2))
            catalog = mine_patterns(convs, params)
            expected = oracle_catalog(convs, params.max_seq_len, params.max_set_size, params.min_support)
            actual = {
                (p.kind.value, p.codes): (p.support, list(p.supporters), p.avg_score)
                for p in catalog.patterns
            }
            assert set(actual) == set(expected)
            for key, (support, supporters, avg) in expected.items():
                got_support, got_supporters, got_avg = actual[key]
                assert got_support == support
                assert got_supporters == supporters
                assert got_avg == pytest.approx(avg, abs=1e-12)

    def test_anti_monotone_support(self):
        rng = random.Random(77)
        convs = random_conversations(rng, max_convs=8, max_turns=6)
        catalog = mine_patterns(convs, MiningParams(min_support=1))
        support = {(p.kind, p.codes): p.support for p in catalog.patterns}
        for pattern in catalog.patterns:
            if pattern.kind is PatternKind.SEQUENCE:
                subs = [pattern.codes[:k] for k in range(1, pattern.length)]
                subs = [s for s in subs if s]
            else:
                members = list(pattern.codes)
                subs = [
                    tuple(sorted(set(members) - {m}))
                    for m in members
                    if len(members) > 1
                ]
            for sub in subs:
                assert support[(pattern.kind, sub)] >= pattern.support

    def test_singleton_coverage(self):
        rng = random.Random(31)
        convs = random_conversations(rng, max_convs=6)
        params = MiningParams(min_support=2)
        catalog = mine_patterns(convs, params)
        counts = {}
        for conv in convs:
            for code in conv.code_union:
                counts[code] = counts.get(code, 0) + 1
        by_key = {(p.kind, p.codes): p for p in catalog.patterns}
        for code, count in counts.items():
            if count >= params.min_support:
                seq = by_key[(PatternKind.SEQUENCE, (code,))]
                single = by_key[(PatternKind.SET, (code,))]
                assert seq.support == single.support == count


class TestSortPatterns:
    def _catalog(self):
        convs = [
            make_conversation([["A"], ["B"]], student="a", score=0.8),
            make_conversation([["A"], ["B"]], student="b", score=0.9),
            make_conversation([["A"]], student="c", score=0.5),
        ]
        return mine_patterns(convs, MiningParams(min_support=2))

    def test_sort_by_support_desc(self):
        ordered = sort_patterns(self._catalog(), "support", "desc")
        supports = [p.support for p in ordered]
        assert supports == sorted(supports, reverse=True)

    def test_ties_preserve_catalog_order(self):
        catalog = self._catalog()
        ordered = sort_patterns(catalog, "support", "desc")
        by_support = {}
        for p in ordered:
            by_support.setdefault(p.support, []).append(p)
        catalog_positions = {(p.kind, p.codes): i for i, p in enumerate(catalog.patterns)}
        for group in by_support.values():
            positions = [catalog_positions[(p.kind, p.codes)] for p in group]
            assert positions == sorted(positions)

    def test_sort_by_avg_score(self):
        ordered = sort_patterns(self._catalog(), "avg_score", "desc")
        scores = [p.avg_score for p in ordered]
        assert scores == sorted(scores, reverse=True)

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError):
            sort_patterns(self._catalog(), "name")


class TestMatchPattern:
    def test_set_pattern_from_single_coded_turn(self):
        conv = make_conversation([["FQ"], ["DI"]])
        assert match_pattern(Pattern.query("set", ["FQ"]), conv)

    def test_order_violation_fails(self):
        conv = make_conversation([["B"], ["A"]])
        assert not match_pattern(Pattern.query("sequence", ["A", "B"]), conv)

    def test_set_ignores_order(self):
        conv = make_conversation([["A"], ["B"]])
        assert match_pattern(Pattern.query("set", ["A", "B"]), conv)

    def test_agrees_with_supporters(self):
        rng = random.Random(23)
        for _ in range(30):
            convs = random_conversations(rng)
            catalog = mine_patterns(convs, MiningParams(min_support=1))
            for pattern in catalog.patterns:
                for conv in convs:
                    assert match_pattern(pattern, conv) == (conv.key in set(pattern.supporters))

    def test_agrees_with_brute_force_embedding(self):
        rng = random.Random(41)
        for _ in range(120):
            turns = [rng.sample("ABC", rng.randint(1, 2)) for _ in range(rng.randint(1, 5))]
            conv = make_conversation(turns)
            codes = [rng.choice("ABC") for _ in range(rng.randint(1, 3))]
            expected = oracle_contains_sequence([set(t) for t in turns], codes)
            assert match_pattern(Pattern.query("sequence", codes), conv) == expected


class TestMiningParams:
    def test_defaults(self):
        params = MiningParams()
        assert (params.max_seq_len, params.max_set_size, params.min_support) == (4, 3, 2)

    def test_validation(self):
        with pytest.raises(ValueError):
            MiningParams(min_support=0)

    def test_from_dict_rejects_unknown(self):
        with pytest.raises(ValueError):
            MiningParams.from_dict({"support": 3})
