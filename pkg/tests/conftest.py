from __future__ import annotations

import json
import random

import pytest

from convo_miner.corpus import load_corpus
from convo_miner.fixture import generate_fixture
from convo_miner.model import Conversation, Turn


def make_conversation(codes_per_turn, student="s1", task="T1", score=1.0, igs=None, rls=None):
    """Conversation with given per-turn code collections and dummy texts."""
    turns = tuple(
        Turn(
            index=i,
            prompt_text=f"prompt {i}",
            response_text=f"response {i}",
            codes=tuple(codes),
            relevance=1.0,
            correctness=1.0,
            response_length=rls[i] if rls else 0,
            information_gain=igs[i] if igs else 0.0,
        )
        for i, codes in enumerate(codes_per_turn)
    )
    return Conversation(student=student, task=task, score=score, turns=turns)


def random_conversations(rng: random.Random, max_convs=8, max_turns=6, max_codes=3, vocab="ABCDE"):
    """Small random conversation batch for oracle-equivalence checks."""
    count = rng.randint(1, max_convs)
    conversations = []
    for i in range(count):
        turns = []
        for t in range(rng.randint(1, max_turns)):
            codes = rng.sample(vocab, rng.randint(1, max_codes))
            turns.append(codes)
        conversations.append(
            make_conversation(
                turns,
                student=f"s{i}",
                task=f"T{rng.randint(1, 3)}",
                score=round(rng.random(), 2),
            )
        )
    # conversation keys must be unique; drop duplicates
    seen = set()
    unique = []
    for conv in conversations:
        if conv.key not in seen:
            seen.add(conv.key)
            unique.append(conv)
    return unique


@pytest.fixture(scope="session")
def fixture_document():
    return generate_fixture()


@pytest.fixture(scope="session")
def fixture_corpus(fixture_document):
    return load_corpus(json.dumps(fixture_document))


def minimal_document():
    """Smallest valid corpus: 1 student, 1 task, 1 conversation, 1 turn."""
    return {
        "schema": [
            {"id": "DI", "label": "Definition Inquiry", "abbr": "DI", "category": "learning", "bloom": "remember"},
            {"id": "FQ", "label": "Follow up Questions", "abbr": "FQ", "category": "chatgpt_effective"},
            {"id": "EMPTY", "label": "Empty", "abbr": "EM", "category": "chatgpt_other"},
        ],
        "students": [
            {"alias": "aa", "dv_experience": "none", "cs_background": "some", "gpt_familiarity": "experienced"}
        ],
        "tasks": [
            {"id": "T1", "type": "remember", "cognitive_level": "remember", "difficulty": 2, "description": "What is a bar chart?"}
        ],
        "conversations": [
            {
                "student": "aa",
                "task": "T1",
                "score": 0.8,
                "turns": [
                    {
                        "prompt": "What is a bar chart?",
                        "response": "A bar chart encodes values as bar lengths.",
                        "codes": ["DI"],
                        "relevance": 0.9,
                        "correctness": 1,
                    }
                ],
            }
        ],
    }
