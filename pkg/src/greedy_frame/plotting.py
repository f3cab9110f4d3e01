"""Matplotlib rendering of experiment summaries (PNG, PDF, ...)."""
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

COLORS = {"classical": "black", "saturated": "black", "greedy": "tab:blue",
          "greedy_saturated": "tab:blue"}


def plot_summary(summary, path, log_scale=True, title=None, figsize=(6.4, 4.0)):
    fig, ax = plt.subplots(figsize=figsize)
    for name, st in summary.stats.items():
        n = np.arange(len(st.mean))
        color = COLORS.get(name)
        line, = ax.plot(n, st.mean, color=color, lw=1.5, label=name)
        ax.fill_between(n, st.p10, st.p90, color=line.get_color(), alpha=0.2, lw=0)
    if log_scale:
        ax.set_yscale("log")
    ax.set_xlabel("Iteration")
    ax.set_ylabel("Error of approximation")
    if title:
        ax.set_title(title)
    if summary.stats:
        ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
