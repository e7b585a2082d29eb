"""Smoke tests for the python bindings: each main operation is exercised once
against values that are easy to verify by hand."""

import math

import pytest

import toolforge as tf


TOOL_DOC = {
    "name": "weather_watch",
    "tool_description": "simulated weather service",
    "api_list": [
        {
            "name": "current_weather",
            "url": "https://sim.internal/weather_watch/current_weather",
            "description": "current conditions for a city",
            "method": "GET",
            "required_parameters": [{"name": "city", "type": "STRING"}],
            "optional_parameters": [],
            "tool_name": "weather_watch",
            "category_name": "Weather",
        },
        {
            "name": "rain_history",
            "url": "https://sim.internal/weather_watch/rain_history",
            "description": "how often it rains",
            "method": "GET",
            "required_parameters": [],
            "optional_parameters": [],
            "tool_name": "weather_watch",
            "category_name": "Weather",
        },
    ],
}


def test_token_counting_and_compression():
    assert tf.count_tokens("a b  c") == 3
    long_text = " ".join(f"w{i}" for i in range(5000))
    out = tf.compress_response(long_text, max_tokens=1024)
    assert tf.count_tokens(out) == 1024
    assert tf.compress_response(out, max_tokens=1024) == out


def test_ndcg_closed_form():
    rel = [("t", "A")]
    assert tf.ndcg_at_k([("t", "A"), ("t", "B")], rel, 2) == pytest.approx(1.0)
    got = tf.ndcg_at_k([("t", "B"), ("t", "A")], rel, 2)
    assert got == pytest.approx(1.0 / math.log2(3.0))


def test_parse_tool_doc_and_schemas():
    parsed = tf.parse_tool_doc(
        __import__("json").dumps(TOOL_DOC)
    )
    assert parsed["name"] == "weather_watch"
    assert len(parsed["api_list"]) == 2

    schemas = tf.render_function_schemas(TOOL_DOC)
    assert len(schemas) == 3  # two apis + Finish
    assert schemas[-1]["name"] == "Finish"
    assert schemas[-1]["parameters"]["properties"]["return_type"]["enum"] == [
        "give_answer",
        "give_up_and_restart",
    ]


OTHER_TOOL_DOC = {
    "name": "fx_exchange",
    "tool_description": "currency conversion",
    "api_list": [
        {
            "name": "convert_amount",
            "url": "https://sim.internal/fx_exchange/convert_amount",
            "description": "convert money between currencies",
            "method": "GET",
            "required_parameters": [],
            "optional_parameters": [],
            "tool_name": "fx_exchange",
            "category_name": "Finance",
        }
    ],
}


def test_index_retrieval():
    # three documents: with only two, the floored idf zeroes every score
    index = tf.build_index([TOOL_DOC, OTHER_TOOL_DOC], with_embeddings=True)
    assert index.size == 3
    top = index.retrieve("how often does it rain", k=1, scorer="bm25")
    assert top[0][:2] == ("weather_watch", "rain_history")
    emb = index.retrieve("current conditions city", k=3, scorer="embedding")
    assert emb[0][:2] == ("weather_watch", "current_weather")


def test_parse_action():
    action = tf.parse_action(
        'Thought: check it. API Name: current_weather. Parameters: {"city": "Ohio"}'
    )
    assert action["name"] == "current_weather"
    assert action["arguments"] == {"city": "Ohio"}


def test_judge_and_rates():
    facts = {
        "finish_type": "give_answer",
        "tried_all_apis": False,
        "any_useful_info": True,
        "answer_resolves": "Fully",
    }
    assert tf.judge_pass_rules(facts, solvable=True) == "Pass"
    facts["answer_resolves"] = "Hallucinated"
    assert tf.judge_pass_rules(facts, solvable=False) == "Fail"

    assert tf.pass_rate(["Pass", "Fail", "Pass", "Unsure"]) == 0.5
    assert tf.win_rate(["Win", "Tie", "Lose", "Win"]) == 0.625


def test_search_and_oracle_agree():
    script = {
        "roots": [
            {
                "action": {"thought": "trap", "name": "lookup", "arguments": {"n": 0}},
                "children": [
                    {
                        "action": {
                            "thought": "dead end",
                            "name": "Finish",
                            "arguments": {"return_type": "give_up_and_restart"},
                        },
                        "children": [],
                    }
                ],
            },
            {
                "action": {"thought": "better", "name": "fetch", "arguments": {"n": 1}},
                "children": [
                    {
                        "action": {
                            "thought": "found",
                            "name": "Finish",
                            "arguments": {
                                "return_type": "give_answer",
                                "final_answer": "42",
                            },
                        },
                        "children": [],
                    }
                ],
            },
        ]
    }
    answers, cost = tf.oracle_search(script, budget=30, max_children=3, max_depth=12)
    assert answers

    episode = tf.run_search(script, strategy="dfsdt", budget=30)
    assert episode["outcome"] == "PassCandidate"
    assert episode["policy_calls"] == cost
    assert episode["path"]["final"]["final_answer"] == "42"

    react = tf.run_search(script, strategy="react", budget=30)
    assert react["outcome"] == "GaveUp"  # no backtracking out of the trap
