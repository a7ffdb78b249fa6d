"""Command-line pipeline driver.

Every subcommand resolves its settings through the same layering (CLI
flag > CMF_* env var > --config file > default), logs the resolved
values and seed to stderr, and writes outputs atomically. Exit codes:
0 success, 1 runtime failure, 2 bad arguments or config.
"""

import argparse
import json
import logging
import sys
from collections import namedtuple

from . import cleaning, corpus, embedding, generator, metrics, ngram_shuffle, translit
from .config import ConfigError, resolve
from .fileio import atomic_write, read_lines

log = logging.getLogger("codemix")

REQUIRED = object()

Opt = namedtuple("Opt", "key default cast help")


def parse_bool(s):
    if isinstance(s, bool):
        return s
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {s!r}")


def choice_of(*values):
    def cast(s):
        if s not in values:
            raise ConfigError(f"expected one of {values}, got {s!r}")
        return s
    return cast

GLOBAL_OPTS = [
    Opt("seed", 1, int, "seed for every randomized step"),
    Opt("workers", 1, int, "worker threads where supported"),
    Opt("log-level", "info", choice_of("debug", "info", "warning", "error"),
        "stderr logging verbosity"),
]


def _add_opts(parser, opts):
    for o in opts:
        kwargs = {"default": argparse.SUPPRESS, "help": o.help,
                  "dest": o.key.replace("-", "_")}
        if o.cast is parse_bool:
            kwargs["action"] = "store_true"
        else:
            kwargs["type"] = str
        parser.add_argument("--" + o.key, **kwargs)


def _finalize(opts, args):
    """Layered merge + casting + required-flag checks."""
    defaults = {o.key: o.default for o in opts}
    cli_values = {}
    for o in opts:
        dest = o.key.replace("-", "_")
        if hasattr(args, dest):
            cli_values[o.key] = getattr(args, dest)
    cfg, origins = resolve(defaults, defaults, config_path=getattr(args, "config", None),
                           cli_values=cli_values)
    casts = {o.key: o.cast for o in opts}
    for key, val in cfg.items():
        if val is REQUIRED or val is None:
            continue
        if isinstance(val, str) or isinstance(val, bool):
            try:
                cfg[key] = casts[key](val)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {key}: {exc}") from exc
    missing = [k for k, v in cfg.items() if v is REQUIRED]
    if missing:
        raise ConfigError("missing required option(s): "
                          + ", ".join("--" + k for k in sorted(missing)))
    return cfg, origins


def _log_config(name, cfg, origins):
    shown = {k: v for k, v in sorted(cfg.items()) if v is not None}
    log.info("%s: resolved config: %s", name,
             json.dumps(shown, ensure_ascii=False, default=str))
    log.info("%s: seed = %s", name, cfg.get("seed"))
    overridden = {k: o for k, o in origins.items() if o != "default"}
    if overridden:
        log.debug("%s: non-default settings from: %s", name, overridden)


def _load_bitext(cfg):
    """Records from whichever input flags are set: --tsv, or --source/--target."""
    if cfg.get("tsv"):
        return corpus.load_tsv(cfg["tsv"])
    if cfg.get("source") and cfg.get("target"):
        return corpus.load_parallel(cfg["source"], cfg["target"])
    raise ConfigError("need --tsv, or --source and --target")


# ---------------------------------------------------------------- subcommands

def cmd_build_shuffled(cfg, origins):
    n = cfg["max-order"]
    if n < 1:
        raise ConfigError(f"--max-order must be >= 1, got {n}")
    records = _load_bitext(cfg)
    vocab_path = cfg.get("vocab") or cfg["out"] + ".vocab.tsv"
    vocab = ngram_shuffle.build_shuffled_corpus(records, n, cfg["seed"], cfg["out"], vocab_path)
    log.info("wrote %d shuffled sentences, %d vocabulary units",
             len(records), len(vocab))
    return 0


def cmd_train_embed(cfg, origins):
    try:
        params = embedding.EmbeddingHyperparams(
            dim=cfg["dim"], window=cfg["window"], epochs=cfg["epochs"],
            min_count=cfg["min-count"], negatives=cfg["negatives"],
            initial_lr=cfg["lr"], subsample_t=cfg["subsample"], seed=cfg["seed"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    prov = ngram_shuffle.load_vocab(cfg["vocab"]) if cfg.get("vocab") else None
    table = embedding.train(cfg["corpus"], params, vocab_provenance=prov,
                            workers=cfg["workers"])
    embedding.save_table(table, cfg["out"])
    log.info("trained %d vectors of dim %d", len(table.vocab), table.dim)
    return 0


def cmd_nearest(cfg, origins):
    table = embedding.load_table(cfg["table"])
    hits = embedding.nearest_lg2(cfg["query"], cfg["k"], table, tau=cfg["tau"])
    if hits is None:
        print(f"unknown unit: {cfg['query']}", file=sys.stderr)
        return 1
    for surface, sim in hits:
        print(f"{surface}\t{sim:.6f}")
    return 0


def cmd_induce_lexicon(cfg, origins):
    table = embedding.load_table(cfg["table"])
    rows = embedding.induce_lexicon(table, cfg["top-m"], tau=cfg["tau"])
    lines = [f"{a}\t{b}\t{sim:.6f}" for a, b, sim in rows]
    if cfg.get("out"):
        with atomic_write(cfg["out"]) as fh:
            fh.write("".join(line + "\n" for line in lines))
    else:
        for line in lines:
            print(line)
    log.info("induced %d entries", len(rows))
    return 0


def _generator_config(cfg, origins):
    knob_keys = ("max-order", "num-substitutions", "min-similarity", "script", "tau")
    explicit = {k for k in knob_keys if origins.get(k, "default") != "default"}
    kwargs = {}
    if cfg.get("preset"):
        base = generator.preset_config(cfg["preset"])
        kwargs = {"max_order": base.max_order,
                  "num_substitutions": base.num_substitutions,
                  "script_mode": base.script_mode}
    for key, attr in (("max-order", "max_order"),
                      ("num-substitutions", "num_substitutions"),
                      ("min-similarity", "min_similarity"),
                      ("script", "script_mode"),
                      ("tau", "tau")):
        if not cfg.get("preset") or key in explicit:
            kwargs[attr] = cfg[key]
    kwargs["seed"] = cfg["seed"]
    try:
        return generator.GeneratorConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_generate(cfg, origins):
    gconf = _generator_config(cfg, origins)
    table = embedding.load_table(cfg["table"])
    if cfg.get("tsv"):
        records = corpus.load_tsv(cfg["tsv"])
        pairs = generator.generate_corpus(records, table, gconf)
    elif cfg.get("input"):
        sentences = [line.split() for line in read_lines(cfg["input"]) if line.split()]
        pairs = generator.generate_sentences(sentences, table, gconf)
    else:
        raise ConfigError("need --tsv or --input")
    generator.write_generated_tsv(pairs, cfg["out-tsv"])
    if cfg.get("out-jsonl"):
        generator.write_generated_jsonl(pairs, cfg["out-jsonl"])
    n_sub = sum(len(p.applied) for p in pairs)
    log.info("generated %d sentences, %d substitutions applied", len(pairs), n_sub)
    return 0


def cmd_romanize(cfg, origins):
    scheme = translit.load_scheme(cfg.get("scheme"))
    if cfg.get("text"):
        counter = {}
        with atomic_write(cfg["out"]) as fh:
            for line in read_lines(cfg["text"]):
                fh.write(translit.transliterate_text(line, scheme, counter) + "\n")
        if counter:
            log.warning("%d unmapped Devanagari occurrence(s)", sum(counter.values()))
        return 0
    records = _load_bitext(cfg)
    out = translit.romanize_target(records, scheme)
    if cfg.get("out-source") and cfg.get("out-target"):
        corpus.write_parallel(out, cfg["out-source"], cfg["out-target"])
    else:
        corpus.write_tsv(out, cfg["out"])
    return 0


def cmd_clean(cfg, origins):
    records = _load_bitext(cfg)
    cleaned, report = cleaning.adapt_corpus(records, hashtag_mode=cfg["hashtag"])
    corpus.write_tsv(cleaned, cfg["out"])
    if cfg.get("report"):
        with atomic_write(cfg["report"]) as fh:
            fh.write(report.to_json() + "\n")
    else:
        print(report.to_json(), file=sys.stderr)
    log.info("kept %d of %d records", len(cleaned), len(records))
    return 0


def cmd_dedup(cfg, origins):
    records = _load_bitext(cfg)
    kept = corpus.dedup(records)
    corpus.write_tsv(kept, cfg["out"])
    log.info("kept %d of %d records", len(kept), len(records))
    return 0


def cmd_split(cfg, origins):
    records = _load_bitext(cfg)
    try:
        result = corpus.split(records, cfg["valid-size"], cfg["seed"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    corpus.write_tsv(result.train, cfg["out-train"])
    corpus.write_tsv(result.valid, cfg["out-valid"])
    log.info("split: %s", result.counts)
    return 0


def cmd_score_bleu(cfg, origins):
    try:
        bconf = metrics.BleuConfig(max_order=cfg["max-order"],
                                   case_sensitive=cfg["case-sensitive"],
                                   smoothing=cfg["smoothing"],
                                   epsilon=cfg["epsilon"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    score = metrics.bleu(read_lines(cfg["hyp"]), read_lines(cfg["ref"]), bconf)
    print(round(score, 4))
    if cfg.get("json"):
        with atomic_write(cfg["json"]) as fh:
            fh.write(json.dumps({"bleu": round(score, 4)}) + "\n")
    return 0


def cmd_stats(cfg, origins):
    if cfg.get("generated"):
        pairs = generator.load_generated_jsonl(cfg["generated"])
        tagged = [metrics.token_language_tags(p) for p in pairs]
        ids = [p.origin_id for p in pairs]
    elif cfg.get("text"):
        lines = [line.split() for line in read_lines(cfg["text"])]
        tagged = [metrics.token_language_tags(toks) for toks in lines]
        ids = [f"line-{i + 1}" for i in range(len(tagged))]
    else:
        raise ConfigError("need --generated or --text")
    report = metrics.corpus_stats(tagged)
    payload = json.dumps(report.to_dict(), indent=2)
    if cfg.get("out"):
        with atomic_write(cfg["out"]) as fh:
            fh.write(payload + "\n")
    else:
        print(payload)
    if cfg.get("per-sentence"):
        with atomic_write(cfg["per-sentence"]) as fh:
            for i, rec_id in enumerate(ids):
                fh.write(f"{rec_id}\t{report.cmi_per_sentence[i]:.4f}"
                         f"\t{report.spf_per_sentence[i]:.4f}\n")
    if cfg.get("figures-dir"):
        from .figures import render_report_figures
        written = render_report_figures(report, cfg["figures-dir"])
        log.info("figures: %s", ", ".join(str(p) for p in written))
    return 0


# ------------------------------------------------------------------- wiring

SUBCOMMANDS = [
    ("build-shuffled", cmd_build_shuffled,
     "build the shuffled n-gram corpus and vocabulary from bitext",
     [Opt("source", None, str, "LG1 side, one sentence per line"),
      Opt("target", None, str, "LG2 side, one sentence per line"),
      Opt("tsv", None, str, "bitext TSV instead of --source/--target"),
      Opt("max-order", 3, int, "largest n-gram order collected"),
      Opt("out", REQUIRED, str, "shuffled corpus output path"),
      Opt("vocab", None, str, "vocabulary sidecar path (default: <out>.vocab.tsv)")]),
    ("train-embed", cmd_train_embed,
     "train n-gram embeddings on a shuffled corpus",
     [Opt("corpus", REQUIRED, str, "shuffled corpus file"),
      Opt("vocab", None, str, "vocabulary sidecar with per-side counts"),
      Opt("out", REQUIRED, str, "embedding table output path"),
      Opt("dim", 100, int, "vector dimensionality"),
      Opt("window", 5, int, "maximum context radius"),
      Opt("epochs", 5, int, "training passes"),
      Opt("min-count", 5, int, "drop units rarer than this"),
      Opt("negatives", 5, int, "negative samples per positive"),
      Opt("lr", 0.025, float, "initial learning rate"),
      Opt("subsample", 1e-4, float, "frequent-unit subsampling threshold (0 = off)")]),
    ("nearest", cmd_nearest,
     "target-language nearest neighbors of one unit",
     [Opt("table", REQUIRED, str, "embedding table"),
      Opt("query", REQUIRED, str, "unit surface to look up"),
      Opt("k", 10, int, "how many neighbors"),
      Opt("tau", 0.8, float, "target-side dominance threshold")]),
    ("induce-lexicon", cmd_induce_lexicon,
     "translation lexicon from the embedding table",
     [Opt("table", REQUIRED, str, "embedding table"),
      Opt("top-m", 100, int, "how many frequent source units to translate"),
      Opt("tau", 0.8, float, "dominance threshold"),
      Opt("out", None, str, "output TSV (default: stdout)")]),
    ("generate", cmd_generate,
     "generate code-mixed sentences by n-gram substitution",
     [Opt("table", REQUIRED, str, "embedding table"),
      Opt("tsv", None, str, "bitext TSV; the source side is rewritten"),
      Opt("input", None, str, "plain source-language text, one sentence per line"),
      Opt("preset", None, str, "unigram|bigram|trigram, optionally -native/-roman"),
      Opt("max-order", 3, int, "largest n-gram order considered"),
      Opt("num-substitutions", 1, int, "substituted n-gram types per sentence"),
      Opt("min-similarity", 0.0, float, "cosine floor for substitution"),
      Opt("script", "native", choice_of("native", "roman"), "output script for insertions"),
      Opt("tau", 0.8, float, "dominance threshold"),
      Opt("out-tsv", REQUIRED, str, "source<TAB>mixed output"),
      Opt("out-jsonl", None, str, "rich output with spans and substitutions")]),
    ("romanize", cmd_romanize,
     "transliterate Devanagari target text to Roman script",
     [Opt("tsv", None, str, "bitext TSV input"),
      Opt("source", None, str, "LG1 side input"),
      Opt("target", None, str, "LG2 side input"),
      Opt("text", None, str, "single text file: every line transliterated"),
      Opt("scheme", None, str, "alternative scheme TSV"),
      Opt("out", None, str, "output path (TSV or text mode)"),
      Opt("out-source", None, str, "parallel-mode source output"),
      Opt("out-target", None, str, "parallel-mode target output")]),
    ("clean", cmd_clean,
     "strip social-media artifacts from a bitext corpus",
     [Opt("tsv", None, str, "bitext TSV input"),
      Opt("source", None, str, "LG1 side input"),
      Opt("target", None, str, "LG2 side input"),
      Opt("hashtag", "remove", choice_of("remove", "keep-word"),
          "drop hashtags entirely or keep the bare word"),
      Opt("out", REQUIRED, str, "cleaned bitext TSV"),
      Opt("report", None, str, "write the JSON report here instead of stderr")]),
    ("dedup", cmd_dedup,
     "drop exact duplicate pairs, keeping first occurrences",
     [Opt("tsv", None, str, "bitext TSV input"),
      Opt("source", None, str, "LG1 side input"),
      Opt("target", None, str, "LG2 side input"),
      Opt("out", REQUIRED, str, "deduplicated bitext TSV")]),
    ("split", cmd_split,
     "seeded train/validation split",
     [Opt("tsv", None, str, "bitext TSV input"),
      Opt("source", None, str, "LG1 side input"),
      Opt("target", None, str, "LG2 side input"),
      Opt("valid-size", REQUIRED, int, "validation set size"),
      Opt("out-train", REQUIRED, str, "training split TSV"),
      Opt("out-valid", REQUIRED, str, "validation split TSV")]),
    ("score-bleu", cmd_score_bleu,
     "corpus BLEU of a hypothesis file against a reference file",
     [Opt("hyp", REQUIRED, str, "hypotheses, one per line"),
      Opt("ref", REQUIRED, str, "references, one per line"),
      Opt("max-order", 4, int, "largest n-gram order"),
      Opt("case-sensitive", False, parse_bool, "keep case when matching"),
      Opt("smoothing", "epsilon", choice_of("none", "epsilon"), "zero-count handling"),
      Opt("epsilon", 0.1, float, "numerator for zero counts under epsilon smoothing"),
      Opt("json", None, str, "also write {\"bleu\": ...} here")]),
    ("stats", cmd_stats,
     "code-mixing statistics report with optional figures",
     [Opt("generated", None, str, "generation JSONL with span tags"),
      Opt("text", None, str, "plain text; tags fall back to script heuristics"),
      Opt("out", None, str, "JSON report path (default: stdout)"),
      Opt("per-sentence", None, str, "per-sentence CMI/SPF TSV"),
      Opt("figures-dir", None, str, "directory for rendered PNG figures")]),
]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="codemix",
        description="synthetic code-mixed parallel corpus toolkit")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, func, help_text, opts in SUBCOMMANDS:
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", default=None, help="key = value settings file")
        all_opts = opts + GLOBAL_OPTS
        _add_opts(p, all_opts)
        p.set_defaults(_func=func, _opts=all_opts, _name=name)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg, origins = _finalize(args._opts, args)
        logging.basicConfig(
            level=getattr(logging, cfg["log-level"].upper()),
            format="%(levelname)s %(name)s: %(message)s",
            stream=sys.stderr)
        _log_config(args._name, cfg, origins)
        return args._func(cfg, origins)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
