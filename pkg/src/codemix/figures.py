"""Report figures for corpus statistics, rendered straight to PNG files.

Kept separate from metrics so library users who never plot don't pay
the matplotlib import.
"""

from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt


def _hist(values, title, xlabel, path, bins, rng):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(values, bins=bins, range=rng, color="#4878b0", edgecolor="white")
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("sentences")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_report_figures(report, out_dir):
    """Write CMI and SPF histograms plus a token-language bar chart.

    Returns the list of files written.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    p = out_dir / "cmi_hist.png"
    _hist(report.cmi_per_sentence, "Per-sentence code-mixing index",
          "CMI", p, bins=20, rng=(0, 100))
    written.append(p)

    p = out_dir / "spf_hist.png"
    _hist(report.spf_per_sentence, "Per-sentence switch-point fraction",
          "SPF", p, bins=20, rng=(0, 1))
    written.append(p)

    p = out_dir / "language_tokens.png"
    fig, ax = plt.subplots(figsize=(5, 4))
    labels = list(report.token_histogram)
    counts = [report.token_histogram[k] for k in labels]
    ax.bar(labels, counts, color=["#4878b0", "#e1812c", "#999999"][:len(labels)])
    ax.set_title("Token counts by language tag")
    ax.set_ylabel("tokens")
    fig.tight_layout()
    fig.savefig(p, dpi=120)
    plt.close(fig)
    written.append(p)

    return written
