import copy
import json
import random

import pytest

from convo_miner.corpus import (
    CorpusParseError,
    CorpusValidationError,
    apply_filter,
    background_distributions,
    load_corpus,
    serialize_corpus,
)
from convo_miner.model import BloomLevel, ExperienceLevel, FilterCriteria

from conftest import minimal_document


def _load(document):
    return load_corpus(json.dumps(document))


class TestLoad:
    def test_minimal_corpus(self):
        corpus = _load(minimal_document())
        assert len(corpus.conversations) == 1
        turn = corpus.conversations[0].turns[0]
        assert turn.response_length == 8
        assert turn.information_gain == 0.0  # first turn, inclusive mode
        assert not turn.relevance_is_fallback
        assert corpus.students[0].avg_score == pytest.approx(0.8)
        assert corpus.tasks[0].avg_score == pytest.approx(0.8)

    def test_load_is_deterministic(self):
        doc = json.dumps(minimal_document())
        assert load_corpus(doc) == load_corpus(doc)

    def test_accepts_bytes_and_file_objects(self, tmp_path):
        raw = json.dumps(minimal_document()).encode("utf-8")
        assert load_corpus(raw) == load_corpus(raw.decode())
        path = tmp_path / "c.json"
        path.write_bytes(raw)
        with open(path, "rb") as handle:
            assert load_corpus(handle) == load_corpus(raw)

    def test_missing_relevance_uses_flagged_fallback(self):
        doc = minimal_document()
        del doc["conversations"][0]["turns"][0]["relevance"]
        corpus = _load(doc)
        turn = corpus.conversations[0].turns[0]
        assert turn.relevance_is_fallback
        assert 0.0 <= turn.relevance <= 1.0

    def test_background_mapping_header(self):
        doc = minimal_document()
        doc["background_mapping"] = {"beginner": "none", "expert": "experienced"}
        doc["students"][0]["dv_experience"] = "beginner"
        doc["students"][0]["gpt_familiarity"] = "expert"
        corpus = _load(doc)
        assert corpus.students[0].dv_experience is ExperienceLevel.NONE
        assert corpus.students[0].gpt_familiarity is ExperienceLevel.EXPERIENCED

    def test_exclusive_mode_option(self):
        doc = minimal_document()
        corpus = load_corpus(json.dumps(doc), ig_mode="exclusive_smoothed", alpha=1.0)
        assert corpus.conversations[0].turns[0].information_gain > 0.0


class TestParseErrors:
    def test_malformed_json_reports_line(self):
        with pytest.raises(CorpusParseError, match="line"):
            load_corpus("{\n  \"schema\": [,]\n}")

    def test_missing_key_reports_field(self):
        doc = minimal_document()
        del doc["conversations"][0]["turns"][0]["prompt"]
        with pytest.raises(CorpusParseError, match=r"turns\[0\].*prompt"):
            _load(doc)

    def test_wrong_type_reports_field(self):
        doc = minimal_document()
        doc["tasks"][0]["difficulty"] = "hard"
        with pytest.raises(CorpusParseError, match="difficulty"):
            _load(doc)


class TestValidation:
    def _findings(self, document):
        with pytest.raises(CorpusValidationError) as excinfo:
            _load(document)
        return excinfo.value.findings

    def test_dangling_code_names_the_code(self):
        doc = minimal_document()
        doc["conversations"][0]["turns"][0]["codes"] = ["XX"]
        findings = self._findings(doc)
        assert any("'XX'" in f for f in findings)

    def test_dangling_student_and_task(self):
        doc = minimal_document()
        doc["conversations"][0]["student"] = "ghost"
        doc["conversations"][0]["task"] = "T99"
        findings = self._findings(doc)
        assert any("ghost" in f for f in findings)
        assert any("T99" in f for f in findings)

    def test_duplicate_ids_rejected(self):
        doc = minimal_document()
        doc["students"].append(dict(doc["students"][0]))
        doc["tasks"].append(dict(doc["tasks"][0]))
        doc["schema"].append(dict(doc["schema"][0]))
        findings = self._findings(doc)
        assert any("duplicate alias" in f for f in findings)
        assert any("duplicate id" in f for f in findings)

    def test_duplicate_conversation_pair_rejected(self):
        doc = minimal_document()
        doc["conversations"].append(copy.deepcopy(doc["conversations"][0]))
        findings = self._findings(doc)
        assert any("duplicate (student, task)" in f for f in findings)

    def test_bad_correctness_value(self):
        doc = minimal_document()
        doc["conversations"][0]["turns"][0]["correctness"] = 0.7
        findings = self._findings(doc)
        assert any("correctness" in f for f in findings)

    def test_score_out_of_range(self):
        doc = minimal_document()
        doc["conversations"][0]["score"] = 1.2
        assert any("score" in f for f in self._findings(doc))

    def test_relevance_out_of_range(self):
        doc = minimal_document()
        doc["conversations"][0]["turns"][0]["relevance"] = 2.0
        assert any("relevance" in f for f in self._findings(doc))

    def test_empty_codes_rejected(self):
        doc = minimal_document()
        doc["conversations"][0]["turns"][0]["codes"] = []
        assert any("no codes" in f for f in self._findings(doc))

    def test_conversation_without_turns_rejected(self):
        doc = minimal_document()
        doc["conversations"][0]["turns"] = []
        assert any("no turns" in f for f in self._findings(doc))

    def test_learning_code_requires_bloom(self):
        doc = minimal_document()
        doc["schema"][0] = {"id": "DI", "label": "x", "abbr": "DI", "category": "learning"}
        assert any("bloom" in f for f in self._findings(doc))

    def test_chatgpt_code_must_not_carry_bloom(self):
        doc = minimal_document()
        doc["schema"][1]["bloom"] = "remember"
        assert any("bloom" in f for f in self._findings(doc))

    def test_difficulty_out_of_range(self):
        doc = minimal_document()
        doc["tasks"][0]["difficulty"] = 9
        assert any("difficulty" in f for f in self._findings(doc))

    def test_empty_schema_rejected(self):
        doc = minimal_document()
        doc["schema"] = []
        doc["conversations"][0]["turns"][0]["codes"] = ["DI"]
        assert any("schema" in f for f in self._findings(doc))


class TestRoundTrip:
    def test_serialize_then_load_is_identity(self, fixture_corpus):
        doc = serialize_corpus(fixture_corpus)
        again = load_corpus(json.dumps(doc))
        assert again == fixture_corpus

    def test_conversation_counts_partition(self, fixture_corpus):
        per_student = {}
        per_task = {}
        for conv in fixture_corpus.conversations:
            per_student[conv.student] = per_student.get(conv.student, 0) + 1
            per_task[conv.task] = per_task.get(conv.task, 0) + 1
        assert sum(per_student.values()) == len(fixture_corpus.conversations)
        assert sum(per_task.values()) == len(fixture_corpus.conversations)


def _three_task_doc():
    doc = minimal_document()
    doc["tasks"] = [
        {"id": "T1", "type": "A", "cognitive_level": "remember", "difficulty": 2, "description": "d"},
        {"id": "T2", "type": "A", "cognitive_level": "analyze", "difficulty": 3, "description": "d"},
        {"id": "T3", "type": "B", "cognitive_level": "create", "difficulty": 4, "description": "d"},
    ]
    doc["students"] = [
        {"alias": "lo", "dv_experience": "none", "cs_background": "none", "gpt_familiarity": "none"},
        {"alias": "hi", "dv_experience": "experienced", "cs_background": "some", "gpt_familiarity": "some"},
    ]
    turn = {"prompt": "p", "response": "r one two", "codes": ["DI"], "relevance": 1.0, "correctness": 1}
    doc["conversations"] = [
        {"student": "lo", "task": "T1", "score": 0.4, "turns": [dict(turn)]},
        {"student": "lo", "task": "T2", "score": 0.4, "turns": [dict(turn)]},
        {"student": "hi", "task": "T2", "score": 0.9, "turns": [dict(turn)]},
        {"student": "hi", "task": "T3", "score": 0.9, "turns": [dict(turn)]},
    ]
    return doc


class TestApplyFilter:
    def test_empty_criteria_selects_everything(self):
        corpus = _load(_three_task_doc())
        selection = apply_filter(corpus, FilterCriteria())
        assert len(selection.conversations) == 4
        assert selection.students == {"lo", "hi"}
        assert selection.tasks == {"T1", "T2", "T3"}

    def test_difficulty_range_selects_tasks(self):
        corpus = _load(_three_task_doc())
        selection = apply_filter(corpus, FilterCriteria(difficulty_range=(3, 5)))
        assert selection.tasks == {"T2", "T3"}

    def test_student_score_range(self):
        corpus = _load(_three_task_doc())
        selection = apply_filter(corpus, FilterCriteria(score_range=(0.0, 0.5)))
        assert selection.students == {"lo"}
        assert {c.key for c in selection.conversations} == {("lo", "T1"), ("lo", "T2")}

    def test_conjunction_of_both_sides(self):
        corpus = _load(_three_task_doc())
        selection = apply_filter(
            corpus, FilterCriteria(score_range=(0.5, 1.0), task_types=frozenset({"A"}))
        )
        assert {c.key for c in selection.conversations} == {("hi", "T2")}

    def test_background_and_cognitive_filters(self):
        corpus = _load(_three_task_doc())
        selection = apply_filter(
            corpus,
            FilterCriteria(
                dv_experience=frozenset({ExperienceLevel.EXPERIENCED}),
                cognitive_levels=frozenset({BloomLevel.CREATE}),
            ),
        )
        assert {c.key for c in selection.conversations} == {("hi", "T3")}

    def test_over_constrained_filter_is_empty_but_valid(self):
        corpus = _load(_three_task_doc())
        selection = apply_filter(corpus, FilterCriteria(task_ids=frozenset({"nope"})))
        assert selection.conversations == ()
        assert selection.tasks == frozenset()

    def test_bad_interval_rejected(self):
        with pytest.raises(ValueError):
            FilterCriteria(score_range=(0.9, 0.1))

    def test_monotone_under_added_criteria(self, fixture_corpus):
        rng = random.Random(7)
        types = sorted({t.task_type for t in fixture_corpus.tasks})
        for _ in range(40):
            base_kwargs = {}
            if rng.random() < 0.5:
                base_kwargs["difficulty_range"] = (rng.randint(1, 3), 5)
            if rng.random() < 0.5:
                base_kwargs["task_types"] = frozenset(rng.sample(types, rng.randint(1, len(types))))
            base = FilterCriteria(**base_kwargs)
            extra_aliases = frozenset(
                s.alias for s in rng.sample(fixture_corpus.students, rng.randint(1, 20))
            )
            tighter = FilterCriteria(student_aliases=extra_aliases, **base_kwargs)
            wide = apply_filter(fixture_corpus, base)
            narrow = apply_filter(fixture_corpus, tighter)
            assert narrow.conversation_keys <= wide.conversation_keys
            assert narrow.students <= wide.students
            assert narrow.tasks <= wide.tasks

    def test_criteria_dict_round_trip(self):
        criteria = FilterCriteria(
            task_ids=frozenset({"T2", "T1"}),
            score_range=(0.25, 0.75),
            cognitive_levels=frozenset({BloomLevel.ANALYZE}),
            gpt_familiarity=frozenset({ExperienceLevel.SOME}),
        )
        assert FilterCriteria.from_dict(criteria.to_dict()) == criteria

    def test_from_dict_rejects_unknown_keys(self):
        with pytest.raises(ValueError, match="unknown criteria"):
            FilterCriteria.from_dict({"difficulty": [1, 2]})


class TestBackgroundDistributions:
    def test_type_histogram_counts(self):
        corpus = _load(_three_task_doc())
        bundle = background_distributions(corpus, FilterCriteria())
        assert bundle.task_types == {"A": 2, "B": 1}
        assert bundle.task_count == 3
        assert sum(bundle.task_difficulty.values()) == 3

    def test_empty_selection_is_all_zero(self):
        corpus = _load(_three_task_doc())
        bundle = background_distributions(corpus, FilterCriteria(task_ids=frozenset(), student_aliases=frozenset()))
        assert sum(bundle.task_difficulty.values()) == 0
        assert sum(bundle.task_types.values()) == 0
        assert sum(bundle.task_score_density) == 0
        assert sum(bundle.student_score_density) == 0
        assert all(sum(levels.values()) == 0 for levels in bundle.student_backgrounds.values())

    def test_fixture_difficulty_histogram_totals_all_tasks(self, fixture_corpus):
        bundle = background_distributions(fixture_corpus, FilterCriteria())
        assert sum(bundle.task_difficulty.values()) == len(fixture_corpus.tasks) == 27
        assert sum(bundle.student_score_density) == len(fixture_corpus.students) == 48
        for attr_counts in bundle.student_backgrounds.values():
            assert sum(attr_counts.values()) == 48

    def test_densities_use_ten_bins(self, fixture_corpus):
        bundle = background_distributions(fixture_corpus, FilterCriteria())
        assert len(bundle.task_score_density) == 10
        assert len(bundle.student_score_density) == 10
