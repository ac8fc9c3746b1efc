"""Figure rendering for sweep results (headless, no global pyplot state)."""

from __future__ import annotations

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .ising import SweepResult


def render_sweep_figure(result: SweepResult, path) -> None:
    """Two stacked panels: NEM versus coupling and its finite-difference slope."""
    lams = [row.lam for row in result.rows]
    nems = [row.nem for row in result.rows]
    slopes = [row.dnem_dlambda for row in result.rows]
    r = result.rows[0].r if result.rows else 0

    fig = Figure(figsize=(6.0, 6.4))
    FigureCanvasAgg(fig)
    ax_n, ax_d = fig.subplots(2, 1, sharex=True)

    ax_n.plot(lams, nems, lw=1.2, color="tab:blue")
    ax_n.set_ylabel("N")
    ax_n.set_title(f"two-site NEM, separation r = {r}")
    ax_n.axvline(1.0, color="0.7", ls="--", lw=0.8)

    ax_d.plot(lams, slopes, lw=1.2, color="tab:red")
    ax_d.set_ylabel(rf"dN/d$\lambda$  (h = {result.derivative_step:g})")
    ax_d.set_xlabel(r"coupling $\lambda$")
    ax_d.axvline(1.0, color="0.7", ls="--", lw=0.8)

    fig.tight_layout()
    fig.savefig(path, dpi=150)
