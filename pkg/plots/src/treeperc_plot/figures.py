"""Figure builders, one per plottable quantity family.

All output is deterministic: the Agg backend, a fixed SVG hash salt, and
no embedded creation date, so regenerating a figure from the same CSV is
byte-identical.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schema import ResultRow, SchemaError, select

matplotlib.rcParams["svg.hashsalt"] = "treeperc-plot"


def _save(fig, out_path: str):
    if out_path.endswith(".svg"):
        fig.savefig(out_path, metadata={"Date": None})
    else:
        fig.savefig(out_path, dpi=150)
    plt.close(fig)


def _need(rows: list[ResultRow], quantity: str) -> list[ResultRow]:
    got = select(rows, quantity)
    if not got:
        present = sorted({r.quantity for r in rows})
        raise SchemaError(f"no {quantity!r} rows in the file "
                          f"(found quantities: {present})")
    return got


def plot_curve(rows: list[ResultRow], out_path: str):
    """Critical curve in the (p1, p2) square with its two endpoints marked.

    As the ray slope rho tends to 0 or infinity the curve meets the axes
    at the single-tree critical density 1/(d-1); those limits are drawn as
    open markers from the d column, not from the data.
    """
    pts = [r for r in _need(rows, "curve_point") if r.p1 is not None]
    if not pts:
        raise SchemaError("every curve_point row is empty (all runs failed)")
    pts.sort(key=lambda r: r.rho)
    d = pts[0].d
    pc_tree = 1.0 / (d - 1)
    p1 = np.array([r.p1 for r in pts])
    p2 = np.array([r.p2 for r in pts])
    spread = np.array([r.stderr if r.stderr is not None else 0.0 for r in pts])

    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    ax.errorbar(p1, p2, xerr=spread, fmt="o-", ms=4, lw=1.2, capsize=2,
                color="tab:blue", label=f"{pts[0].graph}, d = {d}")
    ax.plot([pc_tree], [0.0], marker="*", ms=14, mfc="none",
            mec="tab:red", ls="none", label="endpoints 1/(d-1)")
    ax.plot([0.0], [pc_tree], marker="*", ms=14, mfc="none",
            mec="tab:red", ls="none")
    ax.annotate("rho -> 0", (pc_tree, 0.0), textcoords="offset points",
                xytext=(-8, 10), fontsize=8, ha="right")
    ax.annotate("rho -> inf", (0.0, pc_tree), textcoords="offset points",
                xytext=(10, -4), fontsize=8)
    ax.set_xlabel("p1")
    ax.set_ylabel("p2")
    ax.set_xlim(0, None)
    ax.set_ylim(0, None)
    ax.set_title("critical curve")
    ax.legend(loc="upper right", fontsize=8)
    ax.grid(alpha=0.25)
    _save(fig, out_path)


def plot_growth(rows: list[ResultRow], out_path: str):
    """Chemical ball volume against radius, with censoring brackets."""
    pts = sorted(_need(rows, "G"), key=lambda r: r.r)
    r = np.array([p.r for p in pts])
    lo = np.array([p.estimate_low for p in pts], dtype=float)
    hi = np.array([p.estimate_high if p.estimate_high is not None else np.nan
                   for p in pts])
    se = np.array([p.stderr if p.stderr is not None else 0.0 for p in pts])

    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    ax.errorbar(r, lo, yerr=se, fmt="o-", ms=3, lw=1.0, capsize=2,
                color="tab:blue", label="G(r) lower")
    if np.isnan(hi).any():
        ax.plot(r, lo, "r.", ms=2)
        ax.set_title("chemical ball growth (some radii censored)")
    else:
        ax.set_title("chemical ball growth")
    ax.set_xlabel("chemical radius r")
    ax.set_ylabel("mean ball volume")
    ax.grid(alpha=0.25)
    ax.legend(fontsize=8)
    _save(fig, out_path)


def plot_decay(rows: list[ResultRow], out_path: str):
    """Two-point function against |x| on a log axis, with the pure
    exponential (d-1)^-|x| drawn through the first point as a guide."""
    pts = [p for p in _need(rows, "connprob") if p.estimate_low]
    if not pts:
        raise SchemaError("every connprob row has zero hits, nothing to draw")
    pts.sort(key=lambda p: p.k1 + p.k2)
    n = np.array([p.k1 + p.k2 for p in pts])
    mid = np.array([(p.estimate_low + p.estimate_high) / 2.0 for p in pts])
    d = pts[0].d

    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    ax.semilogy(n, mid, "o-", ms=4, lw=1.0, color="tab:blue", label="g(x)")
    guide = mid[0] * (d - 1.0) ** (-(n - n[0]))
    ax.semilogy(n, guide, "--", lw=1.0, color="tab:gray",
                label="(d-1)^-|x| guide")
    ax.set_xlabel("|x|")
    ax.set_ylabel("connection probability")
    ax.set_title("two-point decay")
    ax.grid(alpha=0.25, which="both")
    ax.legend(fontsize=8)
    _save(fig, out_path)


def plot_offpointa(rows: list[ResultRow], out_path: str):
    """Both sides of the off-method inequality with 3 sigma whiskers."""
    lhs = _need(rows, "offpointa_lhs")[0]
    rhs = _need(rows, "offpointa_rhs")[0]

    fig, ax = plt.subplots(figsize=(4.0, 4.0))
    ax.bar([0, 1], [lhs.estimate_low, rhs.estimate_low],
           yerr=[3 * (lhs.stderr or 0.0), 3 * (rhs.stderr or 0.0)],
           color=["tab:blue", "tab:orange"], capsize=6, width=0.6)
    ax.set_xticks([0, 1])
    ax.set_xticklabels(["observed pairs", "G^2 (1 - nabla)"])
    ax.set_title(f"off-method inequality, r = {lhs.r}, "
                 f"w = ({lhs.k1}, {lhs.k2})")
    ax.grid(alpha=0.25, axis="y")
    _save(fig, out_path)


KINDS = {
    "curve": ("curve_point", plot_curve),
    "growth": ("G", plot_growth),
    "decay": ("connprob", plot_decay),
    "offpointa": ("offpointa_lhs", plot_offpointa),
}
