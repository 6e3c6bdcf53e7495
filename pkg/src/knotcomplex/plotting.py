"""Static figures for verification reports (written to files, never shown)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .construction import Spine  # noqa: E402
from .cuboid import CuboidComplex  # noqa: E402
from .knots import KnotDiagram, _project_array  # noqa: E402
from .verify import VerificationReport  # noqa: E402

_SEGMENT_COLORS = {"P1": "tab:gray", "P2": "tab:blue", "P3": "tab:green", "P4": "tab:orange", "P5": "tab:purple"}


def plot_spine(c: CuboidComplex, spine: Spine, path: str | Path) -> Path:
    """3D polyline of the spine, one colour per segment, markers labelled."""
    fig = plt.figure(figsize=(7, 6))
    ax = fig.add_subplot(projection="3d")
    for name, seg in spine.segments.items():
        pts = [c.coords_of(v) for v in seg.vertices]
        xs, ys, zs = zip(*pts)
        ax.plot(xs, ys, zs, color=_SEGMENT_COLORS.get(name, "black"), label=name, linewidth=1.5)
    for label, v in spine.markers.items():
        x, y, z = c.coords_of(v)
        ax.scatter([x], [y], [z], color="black", s=12)
        ax.text(x, y, z, f" {label}", fontsize=8)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    ax.legend(loc="upper left", fontsize=8)
    ax.set_title(f"Spine at n={spine.n}")
    return _save(fig, path)


def plot_knot_diagram(diagram: KnotDiagram, path: str | Path, title: str = "") -> Path:
    """Projected polyline with crossings marked (over strand in black)."""
    xy, _ = _project_array(diagram.cycle, diagram.direction)
    fig, ax = plt.subplots(figsize=(6, 6))
    closed = list(xy) + [xy[0]]
    ax.plot([p[0] for p in closed], [p[1] for p in closed], color="tab:blue", linewidth=1)
    if diagram.crossings:
        ax.scatter([float(c.point[0]) for c in diagram.crossings], [float(c.point[1]) for c in diagram.crossings],
                   c=["tab:red" if c.sign > 0 else "tab:green" for c in diagram.crossings], s=18, zorder=3)
    ax.set_aspect("equal")
    ax.set_title(title or f"direction {tuple(diagram.direction)}, {len(diagram.crossings)} crossings")
    ax.set_xticks([])
    ax.set_yticks([])
    return _save(fig, path)


def plot_check_times(report: VerificationReport, path: str | Path) -> Path:
    """Wall time per check, green for pass and red for fail."""
    names = [c.name for c in report.checks]
    secs = [c.seconds for c in report.checks]
    colors = ["tab:green" if c.passed else "tab:red" for c in report.checks]
    fig, ax = plt.subplots(figsize=(7, 0.35 * len(names) + 1))
    ax.barh(names, secs, color=colors)
    ax.invert_yaxis()
    ax.set_xlabel("seconds")
    ax.set_title(f"Checks at n={report.params.get('n')}, seed={report.params.get('seed')}")
    fig.tight_layout()
    return _save(fig, path)


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path
