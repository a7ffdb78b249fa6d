"""Acceptance gate: ten numbered end-to-end checks with wall-clock budgets.

Each test covers one numbered criterion, asserts the required behavior
with pinned tolerances, enforces its runtime budget, and prints one
"[criterion NN] PASS" line when it holds. The toy corpus comes from a
known 50-entry dictionary (see conftest), so lexicon quality is checked
against construction ground truth rather than human judgement.
"""

import json
import random
import re
import time

import pytest

from conftest import TOY_DICT, TOY_SRC, build_toy_records

from codemix.cleaning import clean_text
from codemix.cli import main as cli_main
from codemix.corpus import BitextRecord, write_tsv
from codemix.embedding import EmbeddingHyperparams, induce_lexicon, train
from codemix.generator import (
    GeneratorConfig,
    apply_plan,
    plan_substitutions,
    reconstruct_source,
)
from codemix.metrics import bleu, BleuConfig, cmi, spf
from codemix.corpus import LanguageTag
from codemix.ngram_shuffle import (
    build_shuffled_corpus,
    cumulative_ngrams,
    ngrams,
    shuffled_sentence,
)
from codemix.translit import is_devanagari, load_scheme, romanize_target

LG1, LG2 = LanguageTag.LG1, LanguageTag.LG2


def report(n, elapsed, budget, detail):
    print(f"[criterion {n:02d}] PASS in {elapsed:.2f}s "
          f"(budget {budget:.0f}s): {detail}")


# --------------------------------------------------------------- shared toy

@pytest.fixture(scope="module")
def toy(tmp_path_factory):
    root = tmp_path_factory.mktemp("acceptance")
    records = build_toy_records()
    tsv = root / "toy.tsv"
    write_tsv(records, str(tsv))
    return {"root": root, "records": records, "tsv": str(tsv)}


@pytest.fixture(scope="module")
def toy_table(toy):
    """Unigram shuffle + training at the pinned oracle settings, timed."""
    t0 = time.perf_counter()
    shuf = str(toy["root"] / "toy.shuf.txt")
    voc = str(toy["root"] / "toy.vocab.tsv")
    vocab = build_shuffled_corpus(toy["records"], 1, 11, shuf, voc)
    t1 = time.perf_counter()
    params = EmbeddingHyperparams(dim=32, window=5, epochs=15, min_count=2,
                                  negatives=2, initial_lr=0.025,
                                  subsample_t=0.0, seed=3)
    table = train(shuf, params, vocab_provenance=vocab, workers=1)
    t2 = time.perf_counter()
    return {"table": table, "build_s": t1 - t0, "train_s": t2 - t1}


# ---------------------------------------------------------------- criteria

def test_criterion_01_ngram_worked_example():
    t0 = time.perf_counter()
    x = "I've never seen it".split()
    y = "maine ye kabhi nah dekhi".split()

    uni = {u.surface for u in ngrams(1, x, y)}
    assert uni == {"I've", "never", "seen", "it",
                   "maine", "ye", "kabhi", "nah", "dekhi"}
    assert len(uni) == 9

    cum2 = {u.surface for u in cumulative_ngrams(2, x, y)}
    assert cum2 == uni | {"I've_never", "never_seen", "seen_it",
                          "maine_ye", "ye_kabhi", "kabhi_nah", "nah_dekhi"}
    assert len(cum2) == 16

    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0
    report(1, elapsed, 1, "9-element unigram set and 16-element cumulative set")


def test_criterion_02_shuffle_property_suite():
    t0 = time.perf_counter()
    rng = random.Random(21)
    vocab = [f"w{i}" for i in range(40)] + ["under_score", "mixed_1", "x"]
    checked = 0
    for i in range(1000):
        src = rng.choices(vocab, k=rng.randint(1, 12))
        tgt = rng.choices(vocab, k=rng.randint(1, 12))
        rec = BitextRecord(id=f"s-{i}", source_tokens=tuple(src),
                           target_tokens=tuple(tgt),
                           source_raw=" ".join(src), target_raw=" ".join(tgt))
        prev = set()
        for n in (1, 2, 3):
            units = cumulative_ngrams(n, src, tgt)
            surfaces = {u.surface for u in units}
            # monotonicity across orders
            assert prev <= surfaces
            prev = surfaces
            # shuffled multiset == cumulative set (units are unique)
            sent = shuffled_sentence(rec, n, random.Random(f"77:{i}:{n}"))
            assert sorted(sent.units) == sorted(surfaces)
            # fixed-seed determinism
            again = shuffled_sentence(rec, n, random.Random(f"77:{i}:{n}"))
            assert sent.units == again.units
            checked += 1
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    report(2, elapsed, 10, f"{checked} record/order combinations")


def test_criterion_03_lexicon_induction_oracle(toy_table):
    t0 = time.perf_counter()
    lex = induce_lexicon(toy_table["table"], 20)
    induce_s = time.perf_counter() - t0

    assert len(lex) == 20
    correct = sum(1 for src, tgt, _ in lex if TOY_DICT.get(src) == tgt)
    precision = correct / 20
    assert precision >= 0.9, f"precision@1 {precision} over top 20"

    elapsed = toy_table["build_s"] + toy_table["train_s"] + induce_s
    assert elapsed < 60.0
    report(3, elapsed, 60,
           f"precision@1 {correct}/20 "
           f"(build {toy_table['build_s']:.1f}s, train {toy_table['train_s']:.1f}s)")


def test_criterion_04_engine_properties(toy_table):
    t0 = time.perf_counter()
    table = toy_table["table"]
    rng = random.Random(31)
    words = TOY_SRC + ["zz1", "zz2"]   # two out-of-vocabulary intruders

    # the repeated-type case: with the middle word unknown, one budget
    # unit must rewrite both outer occurrences
    w = TOY_SRC[0]
    cfg1 = GeneratorConfig(max_order=1, num_substitutions=1)
    pair = apply_plan([w, "zz1", w],
                      plan_substitutions([w, "zz1", w], table, cfg1), cfg1)
    assert len(pair.applied) == 1
    assert pair.mixed_tokens[0] == pair.mixed_tokens[2] != w
    assert pair.mixed_tokens[1] == "zz1"

    memo = {}
    checked = 0
    for _ in range(500):
        tokens = rng.choices(words, k=rng.randint(1, 10))
        budget = rng.randint(0, 3)
        cfg = GeneratorConfig(max_order=2, num_substitutions=budget)
        plan = plan_substitutions(tokens, table, cfg, _memo=memo)
        pair = apply_plan(tokens, plan, cfg)

        # budget bound on distinct substituted types
        assert len(pair.applied) <= budget
        # budget 0 is the identity
        if budget == 0:
            assert pair.mixed_tokens == tuple(tokens)
        # spans tile the output without overlap
        pos = 0
        for s in pair.spans:
            assert s.out_start == pos and s.out_end > pos
            pos = s.out_end
        assert pos == len(pair.mixed_tokens)
        # spans are enough to reverse the rewrite
        assert reconstruct_source(pair) == tuple(tokens)
        # determinism
        again = apply_plan(tokens, plan_substitutions(tokens, table, cfg), cfg)
        assert again == pair
        checked += 1

    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    report(4, elapsed, 10, f"{checked} random sentences plus the a-b-a case")


def test_criterion_05_bleu_fixtures():
    t0 = time.perf_counter()
    corpus = ["the cat sat", "on the mat", "hello there"]
    assert bleu(corpus, corpus) == pytest.approx(100.0, abs=1e-9)

    # independent hand computation: p1 = 1/3, p2 = 0.1/2, p3 = 0.1/1,
    # order 4 absent, BP = 1 -> 100 * (1/600)^(1/3) = 11.8563
    got = bleu(["the the the"], ["the cat"])
    assert got == pytest.approx(11.8563, abs=1e-4)

    assert bleu(["aa bb cc"], ["dd ee ff"], BleuConfig(smoothing="none")) == 0.0

    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0
    report(5, elapsed, 1, "identity 100.0, clipped 11.8563, disjoint 0.0")


def test_criterion_06_cmi_spf_fixtures():
    t0 = time.perf_counter()
    assert cmi([LG1, LG1, LG1]) == 0.0
    assert spf([LG1, LG1, LG1]) == 0.0
    assert spf([LG1, LG2, LG1, LG2]) == pytest.approx(1.0)
    assert cmi([LG1, LG1, LG1, LG2, LG2, LG2]) == pytest.approx(50.0)
    assert spf([LG1, LG1, LG2, LG2]) == pytest.approx(1.0 / 3.0)
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0
    report(6, elapsed, 1, "monolingual, alternation, 3+3 split fixtures")


def test_criterion_07_cleaner_conformance():
    t0 = time.perf_counter()
    fixtures = [
        ("Check this #movie @user \U0001F600 http://t.co/x", "Check this"),
        ("plain sentence", "plain sentence"),
        ("great :) see www.ex.com", "great see"),
    ]
    for raw, want in fixtures:
        got, _ = clean_text(raw)
        assert got == want, (raw, got)

    rng = random.Random(41)
    pieces = ["hello", "world", "#tag", "#on2019", "@someone", "@a",
              "http://x.io/p?q=1", "https://t.co/abc", "www.news.example",
              "\U0001F600", "\U0001F468‍\U0001F469‍\U0001F467",
              "\U0001F44D\U0001F3FD", ":)", ":-(", "xD", "<3", "ok!",
              "a,b", "end.", "मैं", "123"]
    bad_shapes = re.compile(r"(?:^|\s)[@#]|https?://|(?:^|\s)www\.")
    checked = 0
    for _ in range(1000):
        raw = " ".join(rng.choices(pieces, k=rng.randint(1, 12)))
        once, _ = clean_text(raw)
        twice, _ = clean_text(once)
        assert once == twice                       # idempotent
        assert not bad_shapes.search(once), once   # artifacts gone
        assert once == " ".join(once.split())      # whitespace normal
        assert "\U0001F600" not in once and "\U0001F44D" not in once
        checked += 1

    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    report(7, elapsed, 5, f"3 exact fixtures, {checked} fuzz strings")


def test_criterion_08_romanization_shape():
    t0 = time.perf_counter()
    rng = random.Random(51)
    eng = ["the", "house", "is", "big", "very", "nice", "today", "see"]
    dev = ["मैं", "नहीं", "घर", "बड़ा", "पानी", "किताब", "नमस्ते",
           "हिंदी", "क्या", "अच्छा", "ज़रा", "१२३"]
    records = []
    for i in range(1000):
        src = rng.choices(eng, k=rng.randint(2, 7))
        tgt = rng.choices(dev, k=rng.randint(2, 7))
        records.append(BitextRecord(
            id=f"n-{i}", source_tokens=tuple(src), target_tokens=tuple(tgt),
            source_raw=" ".join(src), target_raw=" ".join(tgt)))

    out = romanize_target(records, load_scheme())
    assert len(out) == 1000
    for before, after in zip(records, out):
        assert after.source_raw == before.source_raw
        assert after.source_tokens == before.source_tokens
        assert len(after.target_tokens) == len(before.target_tokens)
        assert not any(is_devanagari(ch) for ch in after.target_raw)

    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    report(8, elapsed, 5, "1000 pairs: sources untouched, no Devanagari left")


def run_pipeline(toy, workdir, with_stats=True):
    """build -> train -> generate at pinned seeds; returns artifact paths."""
    workdir.mkdir(exist_ok=True)
    shuf = str(workdir / "shuf.txt")
    table = str(workdir / "table.txt")
    gen_tsv = str(workdir / "gen.tsv")
    gen_jsonl = str(workdir / "gen.jsonl")
    steps = [
        ["build-shuffled", "--tsv", toy["tsv"], "--max-order", "3",
         "--out", shuf, "--seed", "11"],
        ["train-embed", "--corpus", shuf, "--vocab", shuf + ".vocab.tsv",
         "--out", table, "--dim", "48", "--epochs", "3", "--min-count", "5",
         "--negatives", "3", "--seed", "3", "--workers", "1"],
        ["generate", "--table", table, "--tsv", toy["tsv"],
         "--preset", "trigram-native", "--out-tsv", gen_tsv,
         "--out-jsonl", gen_jsonl, "--seed", "3"],
    ]
    for argv in steps:
        assert cli_main(argv + ["--log-level", "warning"]) == 0, argv[0]
    return {"table": table, "gen_tsv": gen_tsv, "gen_jsonl": gen_jsonl}


@pytest.fixture(scope="module")
def e2e(toy):
    t0 = time.perf_counter()
    art = run_pipeline(toy, toy["root"] / "e2e")
    art["pipeline_s"] = time.perf_counter() - t0
    return art


def test_criterion_09_end_to_end_desk_run(toy, e2e):
    t0 = time.perf_counter()
    art = e2e

    rep_path = str(toy["root"] / "e2e" / "report.json")
    figs = toy["root"] / "e2e" / "figs"
    assert cli_main(["stats", "--generated", art["gen_jsonl"], "--out", rep_path,
                     "--figures-dir", str(figs), "--log-level", "warning"]) == 0
    rep = json.loads(open(rep_path, encoding="utf-8").read())
    assert rep["sentences"] == 5000
    assert rep["cmi_mean"] > 0.0
    assert rep["spf_mean"] > 0.0
    for name in ("cmi_hist.png", "spf_hist.png", "language_tokens.png"):
        assert (figs / name).stat().st_size > 0

    # budget-0 control: the same preset with the budget forced to zero
    # must leave every sentence monolingual
    zero_tsv = str(toy["root"] / "e2e" / "zero.tsv")
    zero_jsonl = str(toy["root"] / "e2e" / "zero.jsonl")
    assert cli_main(["generate", "--table", art["table"], "--tsv", toy["tsv"],
                     "--preset", "trigram-native", "--num-substitutions", "0",
                     "--out-tsv", zero_tsv, "--out-jsonl", zero_jsonl,
                     "--seed", "3", "--log-level", "warning"]) == 0
    zero_rep_path = str(toy["root"] / "e2e" / "zero_report.json")
    assert cli_main(["stats", "--generated", zero_jsonl, "--out", zero_rep_path,
                     "--log-level", "warning"]) == 0
    zero_rep = json.loads(open(zero_rep_path, encoding="utf-8").read())
    assert zero_rep["cmi_mean"] == 0.0

    elapsed = e2e["pipeline_s"] + (time.perf_counter() - t0)
    assert elapsed < 90.0
    report(9, elapsed, 90,
           f"cmi_mean {rep['cmi_mean']}, spf_mean {rep['spf_mean']}, "
           f"budget-0 cmi_mean 0.0")


def test_criterion_10_reproducibility(toy, e2e):
    t0 = time.perf_counter()
    second = run_pipeline(toy, toy["root"] / "rerun")
    a = open(e2e["gen_tsv"], "rb").read()
    b = open(second["gen_tsv"], "rb").read()
    assert a and a == b
    elapsed = time.perf_counter() - t0
    report(10, elapsed, 90, f"byte-identical generated TSV ({len(a)} bytes)")
