"""Writes one 50-row dataset per task shape under tests/data/adapter/ along
with the records the adapter must produce, computed here independently.

Expected files use the adapted layout: label, s1, s2, dataset_id,
example_id. Scored pairs keep the bottom and top thirds: the thresholds are
the values at rank ceil(n/3) from each end of the sorted ratings, and ties at
a threshold stay with the retained class.
"""
import csv
import json
import math
import random
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "data" / "adapter"
OUT.mkdir(parents=True, exist_ok=True)
rng = random.Random(50)

WORDS = ("the customer support is pathetic battery life great screen dim price fair shipping slow "
         "café naïve résumé works fine broke after a week").split()


def sentence():
    n = rng.randint(3, 10)
    s = " ".join(rng.choice(WORDS) for _ in range(n))
    # Punctuation the CSV writer has to quote.
    if rng.random() < 0.2:
        s += ', "really"'
    return s[0].upper() + s[1:] + rng.choice([".", "!", "?"])


def write_expected(name, rows):
    with (OUT / f"{name}.expected.tsv").open("w", encoding="utf-8", newline="") as f:
        f.write("label\ts1\ts2\tdataset_id\texample_id\n")
        for r in rows:
            f.write("\t".join(r) + "\n")


# single_sentence, TSV with header
rows, expected = [], []
for i in range(50):
    s = sentence() if i else "the customer support is pathetic."
    y = "neg" if rng.random() < 0.3 or i == 0 else "pos"
    rows.append((f"r{i:02}", y, s))
    expected.append((y, "[S_1]", s, "SINGLE", f"r{i:02}"))
with (OUT / "single.tsv").open("w", encoding="utf-8", newline="") as f:
    f.write("id\tlabel\ttext\n")
    for r in rows:
        f.write("\t".join(r) + "\n")
(OUT / "single.ini").write_text(
    "dataset_id = SINGLE\ntask_shape = single_sentence\nformat = tsv\nheader = true\ndata = single.tsv\n"
    "id = id\nsentence1 = text\nlabel = label\nlabel_set = neg, pos\n")
write_expected("single", expected)

# sentence_pair, CSV without header, ids from row order
expected = []
with (OUT / "pair.csv").open("w", encoding="utf-8", newline="") as f:
    w = csv.writer(f, lineterminator="\n")
    for i in range(50):
        a, b = sentence(), sentence()
        y = rng.choice(["entailment", "neutral", "contradiction"])
        w.writerow([y, a, b])
        expected.append((y, a, b, "PAIR", str(i)))
(OUT / "pair.ini").write_text(
    "dataset_id = PAIR\ntask_shape = sentence_pair\nformat = csv\nheader = false\ndata = pair.csv\n"
    "sentence1 = 1\nsentence2 = 2\nlabel = 0\nlabel_set = entailment, neutral, contradiction\n")
write_expected("pair", expected)

# scored_pair, JSONL with ties
records = []
with (OUT / "scored.jsonl").open("w", encoding="utf-8") as f:
    for i in range(50):
        r = {"uid": f"p{i:02}", "a": sentence(), "b": sentence(), "score": rng.choice([0, 0.5, 1, 1.5, 2, 2.5, 3, 3.5, 4, 4.5, 5])}
        f.write(json.dumps(r, ensure_ascii=False) + "\n")
        records.append(r)
ratings = sorted(r["score"] for r in records)
k = math.ceil(len(ratings) / 3)
lower, upper = ratings[k - 1], ratings[len(ratings) - k]
assert lower < upper
expected = []
for r in records:
    if r["score"] <= lower:
        expected.append(("dissimilar", r["a"], r["b"], "SCORED", r["uid"]))
    elif r["score"] >= upper:
        expected.append(("similar", r["a"], r["b"], "SCORED", r["uid"]))
(OUT / "scored.ini").write_text(
    "dataset_id = SCORED\ntask_shape = scored_pair\nformat = jsonl\ndata = scored.jsonl\n"
    "id = uid\nsentence1 = a\nsentence2 = b\nrating = score\n")
write_expected("scored", expected)
print("scored thresholds", lower, upper, "kept", len(expected))
