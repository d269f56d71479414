"""Render rho curves and scatter clouds to image files.

Companion to the CLI report commands: the delimited output stays the
primary artifact, these figures are written alongside it when requested.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def save_curve_figure(curves, path, title: str = "") -> None:
    """Stacked rho1/rho2-versus-depth plot for one or more curves."""
    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(7.0, 7.5))
    for curve in curves:
        label = curve.label or None
        ax1.plot(curve.n, curve.rho1, marker=".", lw=1.0, label=label)
        ax2.plot(curve.n, curve.rho2, marker=".", lw=1.0, label=label)
    ax1.set_ylabel(r"$\rho_1(T_n)$")
    ax2.set_ylabel(r"$\rho_2(T_n)$")
    ax2.set_xlabel("embedding depth n")
    ax2.axhline(0.0, color="0.6", lw=0.8)
    if any(c.label for c in curves) and len(curves) <= 12:
        ax1.legend(fontsize=8, frameon=False)
    if title:
        ax1.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_scatter_figure(cloud_set, marker_rows, path, title: str = "") -> None:
    """Reference cloud as dots plus highlighted data points as squares.

    cloud_set: a ScatterCloud (may be None); marker_rows: iterable of
    (label, rho2, rho1) tuples drawn as labeled squares.
    """
    fig, ax = plt.subplots(figsize=(7.0, 6.0))
    if cloud_set is not None and len(cloud_set.rho2):
        ax.plot(cloud_set.rho2, cloud_set.rho1, ".", ms=2.0, alpha=0.35,
                color="tab:blue", label=f"simulated ({len(cloud_set.rho2)})")
    for label, r2, r1 in marker_rows:
        ax.plot([r2], [r1], "s", ms=7.0, mfc="none", mew=1.5, color="tab:red")
        ax.annotate(label, (r2, r1), textcoords="offset points",
                    xytext=(5, 4), fontsize=8)
    ax.set_xlabel(r"$\rho_2$")
    ax.set_ylabel(r"$\rho_1$")
    if title:
        ax.set_title(title)
    handles, _ = ax.get_legend_handles_labels()
    if handles:
        ax.legend(fontsize=8, frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
