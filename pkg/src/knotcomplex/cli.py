"""Command-line entry point: ``knotcomplex {generate,build,verify,knot}``.

Every run is reproducible from ``(n, seed)``; both are written into the
header of every JSON output. Exit codes: 0 success, 1 a check failed,
2 invalid input or construction error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .complex import complex_to_json
from .construction import (
    N_MIN,
    ConstructionError,
    Pipeline,
    build_Cprime,
    build_tree,
    fundamental_cycle,
    spine_to_json,
    tree_to_json,
)
from .cuboid import WHITE, Diagonal, build_cuboid, to_obj, to_off, two_color
from .graphs import Multigraph

log = logging.getLogger("knotcomplex")

EXIT_OK, EXIT_FAIL, EXIT_CONSTRUCTION, EXIT_IO = 0, 1, 2, 3
FORMATS = ("json", "off", "obj", "dot")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    n: int = N_MIN
    seed: int = 0
    scope: str = "sampled:100"
    out: Path = Path("out")
    formats: list[str] = field(default_factory=lambda: ["json"])
    primes: list[int] = field(default_factory=lambda: [3])
    inject_negative: bool = False
    figures: bool = True
    edge: int | None = None
    knot_samples: int = 100
    contraction_samples: int = 10
    forest_trials: int = 1000
    jobs: int = 1

    def header(self) -> dict:
        return {"tool": "knotcomplex", "version": __version__, "n": self.n, "seed": self.seed}


def _write_json(path: Path, obj: dict) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")
    return path


def _write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def _cuboid(n: int):
    c = build_cuboid(2 * n + 1, n, n)
    return c, two_color(c, (n - 1, 0, 0), WHITE)


def _pipeline(cfg: RunConfig) -> Pipeline:
    return build_Cprime(build_tree(cfg.n, cfg.seed))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_generate(cfg: RunConfig) -> list[Path]:
    """The cuboid complex C with its colouring and coordinates."""
    c, coloring = _cuboid(cfg.n)
    written = []
    if "json" in cfg.formats:
        data = {"header": cfg.header(), "complex": complex_to_json(c.complex),
                "dims": list(c.dims), "coloring": {"white_parity": coloring.white_parity}}
        written.append(_write_json(cfg.out / "complex.json", data))
    if "off" in cfg.formats:
        written.append(_write_text(cfg.out / "complex.off", to_off(c)))
    if "obj" in cfg.formats:
        written.append(_write_text(cfg.out / "complex.obj", to_obj(c)))
    if "dot" in cfg.formats:
        written.append(_write_text(cfg.out / "complex.dot", Multigraph(c.complex.vertices, c.complex.edges).to_dot("C")))
    return written


def cmd_build(cfg: RunConfig) -> list[Path]:
    """Spine, T', C' and C'' as JSON (byte-identical for equal (n, seed))."""
    pipe = _pipeline(cfg)
    plan = pipe.plan
    c = plan.cuboid
    written = [
        _write_json(cfg.out / "spine.json", {"header": cfg.header(), "spine": spine_to_json(c, plan.spine)}),
        _write_json(cfg.out / "tree.json", {"header": cfg.header(), "tree": tree_to_json(plan)}),
        _write_json(cfg.out / "cprime.json", {"header": cfg.header(), "complex": complex_to_json(pipe.cprime)}),
        _write_json(cfg.out / "cdoubleprime.json",
                    {"header": cfg.header(), "complex": complex_to_json(pipe.cdoubleprime)}),
    ]
    split = {t.ref: Diagonal(min(t.u, t.v), max(t.u, t.v), t.ref) for t in plan.diagonal_edges()}
    if "off" in cfg.formats:
        written.append(_write_text(cfg.out / "cprime.off", to_off(c, split)))
    if "obj" in cfg.formats:
        lines = [plan.spine.vertices] + [[t.u, t.v] for t in plan.tree_edges]
        written.append(_write_text(cfg.out / "tree.obj", to_obj(c, None, lines)))
    if "dot" in cfg.formats:
        g = Multigraph(pipe.cprime.vertices, {e: pipe.cprime.edges[e] for e in pipe.tree_ids})
        written.append(_write_text(cfg.out / "tree.dot", g.to_dot("T")))
    return written


def cmd_verify(cfg: RunConfig) -> tuple[int, list[Path]]:
    from .verify import VerifyConfig, run_verification

    pipe = _pipeline(cfg)
    vcfg = VerifyConfig(n=cfg.n, seed=cfg.seed, scope=cfg.scope, p=cfg.primes[0],
                        knot_samples=cfg.knot_samples, contraction_samples=cfg.contraction_samples,
                        forest_trials=cfg.forest_trials, inject_negative=cfg.inject_negative,
                        jobs=cfg.jobs)
    report = run_verification(pipe, vcfg, log.info)
    data = report.to_json()
    data["header"] = cfg.header()
    written = [_write_json(cfg.out / "report.json", data), _write_text(cfg.out / "report.tsv", report.to_tsv())]
    if cfg.figures:
        from .plotting import plot_check_times, plot_spine

        written.append(plot_check_times(report, cfg.out / "figures" / "check_times.png"))
        written.append(plot_spine(pipe.plan.cuboid, pipe.plan.spine, cfg.out / "figures" / "spine.png"))
    sys.stdout.write(report.to_tsv())
    return (EXIT_OK if report.passed else EXIT_FAIL), written


def cmd_knot(cfg: RunConfig) -> list[Path]:
    """Certificate, Gauss code and colouring counts for one fundamental cycle."""
    from .knots import coloring_kernel_dim, is_certified_nontrivial, project
    from .verify import expected_segment, realize_cycle_geometry

    pipe = _pipeline(cfg)
    e = cfg.edge
    if e is None or e not in pipe.cprime.edges:
        raise UsageError(f"unknown edge {e}")
    if e in pipe.tree_id_set:
        raise UsageError(f"edge {e} is a tree edge and has no fundamental cycle")
    cyc = fundamental_cycle(pipe, e)
    geom = realize_cycle_geometry(pipe, cyc)
    cert = is_certified_nontrivial(geom, seed=cfg.seed, p=cfg.primes[0])
    diagram = project(geom, cert.direction)
    counts = {str(p): p ** coloring_kernel_dim(diagram, p) for p in cfg.primes}
    data = {
        "header": cfg.header(),
        "edge": e,
        "segment": expected_segment(pipe, e),
        "cycle_vertices": cyc.vertices,
        "cycle_edges": cyc.edges,
        "polyline_vertices": len(geom.points),
        "certificate": cert.to_json(),
        "colorings": counts,
        "gauss_code": diagram.gauss_string(),
    }
    written = [_write_json(cfg.out / f"knot_{e}.json", data)]
    if cfg.figures:
        from .plotting import plot_knot_diagram

        written.append(plot_knot_diagram(diagram, cfg.out / "figures" / f"knot_{e}.png", f"edge {e}"))
    sys.stdout.write("prime\tcolorings\n" + "".join(f"{p}\t{k}\n" for p, k in counts.items()))
    return written


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _n(text: str) -> int:
    n = int(text)
    if n < N_MIN:
        raise argparse.ArgumentTypeError(f"n must be at least {N_MIN}")
    return n


def _positive(text: str) -> int:
    k = int(text)
    if k < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return k


def _seed(text: str) -> int:
    s = int(text)
    if not -(2 ** 63) <= s < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return s


def _formats(text: str) -> list[str]:
    out = [f.strip().lower() for f in text.split(",") if f.strip()]
    bad = [f for f in out if f not in FORMATS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown format(s) {bad}; choose from {FORMATS}")
    return out


def _primes(text: str) -> list[int]:
    out = [int(p) for p in text.split(",")]
    if not out or any(p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)) for p in out):
        raise argparse.ArgumentTypeError("--p takes primes, comma separated")
    return out


def _scope(text: str) -> str:
    from .verify import parse_scope

    try:
        parse_scope(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    return text


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=_n, default=N_MIN, help=f"cuboid size parameter (>= {N_MIN})")
    common.add_argument("--seed", type=_seed, default=0, help="seed of the single run generator (default 0)")
    common.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    common.add_argument("--format", type=_formats, default=["json"], dest="formats",
                        help="comma-separated subset of json,off,obj,dot")
    common.add_argument("--no-figures", action="store_false", dest="figures", help="skip matplotlib figures")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="knotcomplex", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("generate", parents=[common], help="write the cuboid complex C")
    sub.add_parser("build", parents=[common], help="build the spine, T', C' and C''")
    pv = sub.add_parser("verify", parents=[common], help="run all checks and write report.json / report.tsv")
    pv.add_argument("--scope", type=_scope, default="sampled:100", help="full or sampled:K")
    pv.add_argument("--p", type=_primes, default=[3], dest="primes", help="prime for Fox colourings")
    pv.add_argument("--inject-negative", action="store_true", help="append deliberately broken inputs")
    pv.add_argument("--knot-samples", type=_positive, default=100, help="fundamental cycles to certify")
    pv.add_argument("--contraction-samples", type=_positive, default=10, help="cycles and loops to contract")
    pv.add_argument("--forest-trials", type=_positive, default=1000, help="random forests for the white-graph check")
    pv.add_argument("--jobs", type=_positive, default=1, help="worker processes for independent checks")
    pk = sub.add_parser("knot", parents=[common], help="certify one fundamental cycle")
    pk.add_argument("--edge", type=int, required=True, help="non-tree edge id of C'")
    pk.add_argument("--p", type=_primes, default=[3], dest="primes", help="primes, comma separated")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    cfg = RunConfig(**fields)
    try:
        if args.command == "generate":
            written = cmd_generate(cfg)
            code = EXIT_OK
        elif args.command == "build":
            written = cmd_build(cfg)
            code = EXIT_OK
        elif args.command == "verify":
            code, written = cmd_verify(cfg)
        else:
            written = cmd_knot(cfg)
            code = EXIT_OK
    except (UsageError, ConstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    for p in written:
        log.info("wrote %s", p)
    return code


if __name__ == "__main__":
    sys.exit(main())
