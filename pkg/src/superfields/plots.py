"""Report figures.  Agg backend, fixed style, no timestamps in the files."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_RC = {
    "figure.figsize": (5.0, 3.4),
    "figure.dpi": 100,
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "svg.hashsalt": "superfields",
}


def _save(fig, path: Path) -> str:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path.name


def graded_dims(dims: dict, title: str, path: Path, other: dict | None = None, labels=("dim", "")) -> str:
    """Bar chart of graded dimensions; ``other`` is drawn alongside for comparison."""
    with plt.style.context("default"), matplotlib.rc_context(_RC):
        fig, ax = plt.subplots()
        ks = sorted(dims)
        w = 0.38 if other else 0.7
        ax.bar([k - (w / 2 if other else 0) for k in ks], [dims[k] for k in ks], width=w, label=labels[0], color="#4477aa")
        if other:
            ko = sorted(other)
            ax.bar([k + w / 2 for k in ko], [other[k] for k in ko], width=w, label=labels[1], color="#ee6677")
            ax.legend(frameon=False)
        ax.set_xticks(ks)
        ax.set_xlabel("degree")
        ax.set_ylabel("dimension")
        ax.set_title(title)
        fig.tight_layout()
        return _save(fig, path)


def sweep_counts(rows: list, path: Path) -> str:
    """``rows`` of ``(N, checked, structural, failures)``; log-scale counts."""
    with plt.style.context("default"), matplotlib.rc_context(_RC):
        fig, ax = plt.subplots()
        xs = range(len(rows))
        ax.bar([x - 0.2 for x in xs], [max(r[1], 1) for r in rows], width=0.4, label="checked", color="#4477aa")
        ax.bar([x + 0.2 for x in xs], [max(r[3], 0.5) for r in rows], width=0.4, label="failures", color="#ee6677")
        ax.set_yscale("log")
        ax.set_xticks(list(xs), [f"N={r[0]}" for r in rows])
        ax.set_ylabel("Jacobi triples")
        ax.legend(frameon=False)
        fig.tight_layout()
        return _save(fig, path)


def cubic_match(ms: list, raw: list, shifted: list, target: list, path: Path) -> str:
    """S_0 coefficient of [L_m, L_-m] before and after the L_0 shift."""
    with plt.style.context("default"), matplotlib.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.plot(ms, [float(v) for v in raw], "o-", label="direct", color="#4477aa")
        ax.plot(ms, [float(v) for v in shifted], "s", label="after shift", color="#228833")
        ax.plot(ms, [float(v) for v in target], "--", label="c (m^3 - m)", color="#aa3377")
        ax.set_xlabel("m")
        ax.set_ylabel("coefficient of c (c = -(c1+c2))")
        ax.legend(frameon=False)
        fig.tight_layout()
        return _save(fig, path)


def block_pattern(indices: list, blocks: set, path: Path, title: str) -> str:
    """Occupied ``(n, m)`` blocks of a jet matrix."""
    with plt.style.context("default"), matplotlib.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(4.2, 4.0))
        pos = {m: i for i, m in enumerate(indices)}
        grid = [[0] * len(indices) for _ in indices]
        for n, m in blocks:
            grid[pos[n]][pos[m]] = 1
        ax.imshow(grid, cmap="Greys", vmin=0, vmax=1, interpolation="nearest")
        names = ["".join(map(str, m)) for m in indices]
        ax.set_xticks(range(len(names)), names, rotation=90, fontsize=7)
        ax.set_yticks(range(len(names)), names, fontsize=7)
        ax.set_xlabel("m (source jet)")
        ax.set_ylabel("n (target jet)")
        ax.set_title(title)
        fig.tight_layout()
        return _save(fig, path)


def cohomology_grid(per_degree: dict, path: Path, title: str) -> str:
    with plt.style.context("default"), matplotlib.rc_context(_RC):
        fig, ax = plt.subplots()
        gs = sorted(per_degree)
        ws = sorted({w for row in per_degree.values() for w in row})
        grid = [[per_degree[g].get(w, 0) for w in ws] for g in gs]
        im = ax.imshow(grid, cmap="Blues", aspect="auto", interpolation="nearest", origin="lower")
        for i, row in enumerate(grid):
            for j, v in enumerate(row):
                ax.text(j, i, str(v), ha="center", va="center", fontsize=8)
        ax.set_xticks(range(len(ws)), [str(w) for w in ws])
        ax.set_yticks(range(len(gs)), [str(g) for g in gs])
        ax.set_xlabel("polynomial degree")
        ax.set_ylabel("antifield number g")
        ax.set_title(title)
        fig.colorbar(im, ax=ax, label="dim H")
        fig.tight_layout()
        return _save(fig, path)


def charge_chart(rows: list, path: Path) -> str:
    """Electric charge against hypercharge for each table multiplet."""
    with plt.style.context("default"), matplotlib.rc_context(_RC):
        fig, ax = plt.subplots()
        for rec in rows:
            y = Fraction(rec["multiplet"].strip("()").split(";")[-1])
            qs = [Fraction(c) for c in rec["charges"].split(", ")]
            color = "#ee6677" if rec["discrepancy"] else "#4477aa"
            ax.plot([float(y)] * len(qs), [float(q) for q in qs], "o-", color=color)
        ax.axhline(0, color="#bbbbbb", lw=0.6)
        ax.set_xlabel("hypercharge y")
        ax.set_ylabel("electric charge")
        ax.set_title("fermion multiplets (red: form label disagrees)")
        fig.tight_layout()
        return _save(fig, path)
