# Copyright 2026 The proxgen Authors
# SPDX-License-Identifier: Apache-2.0

# Writes items.jsonl and responses.jsonl for the evaluate-replay fixture.
# expected_report.txt is maintained by hand from the tallies in README.md.

import json
import os

HERE = os.path.dirname(os.path.abspath(__file__))

DIRS = [("Front", "front"), ("FrontLeft", "front-left"), ("Left", "left"), ("BackLeft", "back-left"),
        ("Back", "back"), ("BackRight", "back-right"), ("Right", "right"), ("FrontRight", "front-right")]
DIST = ["under 0.5 m", "0.5–1 m", "1–2 m", "2–4 m", "over 4 m"]
ANGLE = ["roughly none", "slight left turn", "slight right turn", "moderate left turn", "moderate right turn",
         "sharp left turn", "sharp right turn"]


def clip(category, n):
    return {"stream_id": "fixture", "start": float(n), "end": float(n) + 4.0, "category": category,
            "anchor": {"timestamp": float(n) + 4.0, "kind": "Keystep" if category == "ChainOfActions" else "Fixation"},
            "first_frame": 30 * n, "last_frame": 30 * n + 119, "goal_object_id": None}


def provenance(n):
    return {"template": "builtin-v1", "seed": 1000 + n, "tool_calls": [], "recipe": {"task": "fixture"}}


def mcq(item_id, category, kind, ptype, values, texts, answer_index, n):
    options = []
    for i, (v, t) in enumerate(zip(values, texts)):
        options.append({"label": "ABCDE"[i], "text": t, "payload": {"type": ptype, "value": v}})
    return {"id": item_id, "category": category, "proximity_kind": kind,
            "question": "Fixture question %d?" % n, "options": options,
            "answer_label": "ABCDE"[answer_index], "answer_payload": options[answer_index]["payload"],
            "clip": clip(category, n), "provenance": provenance(n)}


def rotate(seq, k, count=5):
    return [seq[(k + i) % len(seq)] for i in range(count)]


# (category, kind, payload type, outcomes); outcome is "ok", "wrong" or "fail".
GROUPS = [
    ("Intention", "Approximate", "AngleBin", ["ok", "wrong", "ok", "wrong", "ok"]),
    ("Intention", "Relative", "Direction8", ["wrong", "ok", "fail", "ok", "wrong"]),
    ("Exploration", "Approximate", "DistanceBin", ["ok", "ok", "ok", "ok", "ok"]),
    ("Exploration", "Relative", "Direction8", ["wrong", "wrong", "ok", "wrong", "wrong"]),
    ("Exploitation", "Approximate", "DistanceBin", ["ok", "ok", "wrong", "ok", "ok"]),
    ("Exploitation", "Relative", "Direction8", ["wrong", "wrong", "wrong", "wrong", "wrong"]),
]

items = []
responses = []
n = 0
for g, (category, kind, ptype, outcomes) in enumerate(GROUPS):
    for j, outcome in enumerate(outcomes):
        if ptype == "Direction8":
            pairs = rotate(DIRS, n)
            values = [p[0] for p in pairs]
            texts = [p[1] for p in pairs]
        elif ptype == "DistanceBin":
            values = texts = rotate(DIST, n)
        else:
            values = texts = rotate(ANGLE, n)
        answer = (n * 3) % 5
        item_id = "fx-%s-%s-%d" % (category.lower(), kind.lower(), j)
        items.append(mcq(item_id, category, kind, ptype, values, texts, answer, n))
        right = "ABCDE"[answer]
        wrong = "ABCDE"[(answer + 1 + j % 4) % 5]
        if outcome == "ok":
            text = "Option <%s> looks tempting, but the last frame says otherwise.\nThe correct answer is <%s>." % (
                wrong, right) if j % 2 else "The correct answer is <%s>." % right
        elif outcome == "wrong":
            text = "Reasoning about the wearer's heading.\nThe correct answer is <%s>." % wrong
        else:
            text = "The correct answer is %s." % right
        responses.append({"id": item_id, "response": text})
        n += 1

CANDIDATES = ["open the drawer", "pick up the cup", "wipe the table", "close the fridge", "rinse the plate",
              "fill the kettle", "turn on the stove", "grab the towel", "stack the bowls", "sweep the floor"]


def chain_item(idx, k, chains, n):
    return {"id": "fx-chain-%d" % idx, "category": "ChainOfActions", "goal": "make tea", "candidates": CANDIDATES,
            "k": k, "valid_chains": [{"nodes": nodes, "edges": list(edges)} for nodes, edges in chains],
            "clip": clip("ChainOfActions", n), "provenance": provenance(n)}


CHAINS = [
    (3, [([3, 7, 1], "FA")], '[[3, 7, 1], ["F", "A"]]'),
    (3, [([2, 5, 9], "CB")], 'Thinking it through...\n[[2, 5, 9], ["F", "B"]]'),
    (5, [([1, 2, 3, 4, 5], "CADB")], '[[1, 2, 3, 4, 5], ["C", "A", "H", "E"]]'),
    (4, [([4, 6, 8, 10], "AAA"), ([6, 4, 8, 10], "BED")], '[[6, 4, 8, 10], [“B”, “C”, “A”]]'),
    (3, [([1, 2, 3], "CC")], '[[2, 1, 3], ["C", "C"]]'),
    (3, [([4, 5, 6], "DD")], "I am not sure which steps come next."),
    (4, [([7, 8, 9, 10], "ABA")], '[[7, 8, 9], ["A", "B"]]'),
    (3, [([5, 6, 7], "EF")], '[[5, 5, 6], ["E", "F"]]'),
    (3, [([8, 9, 10], "GH")], None),
    (3, [([1, 2, 3], "CC")], '[[1, 2, 4], ["C", "C"]]'),
]

for idx, (k, chains, text) in enumerate(CHAINS):
    items.append(chain_item(idx, k, chains, n))
    if text is not None:
        responses.append({"id": "fx-chain-%d" % idx, "response": text})
    n += 1

with open(os.path.join(HERE, "items.jsonl"), "w", encoding="utf-8") as f:
    f.write("# proxgen benchmark v1; records=%d\n" % len(items))
    for it in items:
        f.write(json.dumps(it, ensure_ascii=False, sort_keys=True) + "\n")
with open(os.path.join(HERE, "responses.jsonl"), "w", encoding="utf-8") as f:
    for r in responses:
        f.write(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n")
