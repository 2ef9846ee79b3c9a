"""Command-line driver: ``fpkspace --preset sasakian --c 5 --n 2 --s 1 --suite all``.

Exit codes: 0 every check passed, 1 a check failed or a runtime error
occurred, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .curvature import (
    CurvatureParams,
    PresetKind,
    model_curvature,
    phi_sectional_curvature,
    preset_params,
    random_horizontal_unit,
    symmetry_audit,
)
from .errors import FpkError
from .hypersurface import (
    make_hypersurface,
    normal_components,
    parallel_obstruction_witness,
    random_normal,
    semi_parallel_kernel,
    tangent_span_residuals,
)
from .parallel import (
    Outcome,
    Subspace,
    assemble_action_matrix,
    classify_symmetric_kernel,
    nullspace,
    ricci_report,
)
from .oracle import brute_force_nullity
from .structure import canonical_structure, random_adapted_frame, validate_structure

SCHEMA_VERSION = 1
SUITES = ("axioms", "curvature", "symmetric_kernel", "skew_kernel", "hypersurface", "ricci", "all")
PRESET_CHOICES = ("s-space-form", "sasakian", "kenmotsu", "cosymplectic", "generalized-sasakian")
PHI_SECTIONAL_SAMPLES = 100
PHI_SECTIONAL_TOL = 1e-9
RICCI_TOL = 1e-10

# (preset, c, s) cells of the sweep; every cell is run for n = 1, 2, 3
SWEEP_CELLS = (
    [("sasakian", c, 1) for c in (-3.0, 1.0, 5.0)]
    + [("kenmotsu", c, 1) for c in (-1.0, 1.0)]
    + [("cosymplectic", c, 1) for c in (-2.0, 2.0)]
    + [("s-space-form", c, s) for c in (-1.0, 1.0, 5.0) for s in (2, 3)]
)
SWEEP_N = (1, 2, 3)


@dataclass
class SuiteConfig:
    n: int = 1
    s: int = 1
    preset: str | None = None
    c: float | None = None
    f1: float | None = None
    f2: float | None = None
    fij: list[list[float]] | None = None
    gsf: list[float] | None = None
    suite: str = "all"
    seed: int = 0
    tol: float = 1e-10
    rank_tol: float = 1e-9
    normal: str = "random"
    format: str = "text"
    sweep: bool = False
    out: str | None = None
    timing: bool = False

    def params(self) -> CurvatureParams:
        if self.preset is not None:
            extra = self.gsf if PresetKind.parse(self.preset) is PresetKind.GENERALIZED_SASAKIAN else None
            return preset_params(self.preset, self.c or 0.0, self.s, extra)
        return CurvatureParams(self.f1, self.f2, self.fij)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("timing")
        return d


@dataclass
class SuiteReport:
    config: dict
    results: dict
    passed: bool
    duration_ms: float | None = None
    error: str | None = field(default=None)

    def to_dict(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "config": self.config,
            "results": self.results,
            "pass": self.passed,
            "duration_ms": self.duration_ms,
        }
        if self.error is not None:
            out["results"] = dict(self.results, error=self.error)
        return out


# ---------------------------------------------------------------- parsing

def _parse_matrix(text: str) -> list[list[float]]:
    rows = [r for r in text.split(";")]
    try:
        mat = [[float(x) for x in r.split(",")] for r in rows]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed matrix {text!r}") from None
    if len({len(r) for r in mat}) != 1:
        raise argparse.ArgumentTypeError(f"ragged matrix {text!r}")
    return mat


def _parse_triple(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed triple {text!r}") from None
    if len(vals) != 3:
        raise argparse.ArgumentTypeError("--gsf needs exactly three numbers f1,f2,f3")
    return vals


def _parse_normal(text: str) -> str:
    if text == "random":
        return text
    if text.startswith("index:"):
        try:
            if int(text[6:]) >= 0:
                return text
        except ValueError:
            pass
    raise argparse.ArgumentTypeError("--normal must be 'random' or 'index:K' with K >= 0")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fpkspace", description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--preset", choices=PRESET_CHOICES)
    p.add_argument("--c", type=float)
    p.add_argument("--f1", type=float)
    p.add_argument("--f2", type=float)
    p.add_argument("--fij", type=_parse_matrix, help="rows separated by ';', entries by ','")
    p.add_argument("--gsf", type=_parse_triple, help="generalized Sasakian f1,f2,f3")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--rank-tol", type=float, default=1e-9)
    p.add_argument("--normal", type=_parse_normal, default="random")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--sweep", action="store_true")
    p.add_argument("--out", metavar="DIR")
    p.add_argument("--timing", action="store_true",
                   help="record wall-clock duration in JSON (breaks byte-identical output)")
    return p


def parse_config(argv: list[str]) -> SuiteConfig:
    """Parse flags; usage problems exit with status 2 through argparse."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.n < 1 or ns.s < 1:
        parser.error("--n and --s must be >= 1")
    if ns.tol <= 0 or ns.rank_tol <= 0:
        parser.error("tolerances must be positive")
    explicit = [ns.f1, ns.f2, ns.fij]
    if ns.gsf is not None and ns.preset is None:
        ns.preset = "generalized-sasakian"
    if not ns.sweep:
        if ns.preset is not None and any(v is not None for v in explicit):
            parser.error("give either --preset or explicit --f1/--f2/--fij, not both")
        if ns.preset is None:
            if any(v is None for v in explicit):
                parser.error("need --preset, or all of --f1, --f2, --fij")
            if len(ns.fij) != ns.s or len(ns.fij[0]) != ns.s:
                parser.error(f"--fij must be {ns.s}x{ns.s}")
        else:
            kind = PresetKind.parse(ns.preset)
            if kind is PresetKind.GENERALIZED_SASAKIAN:
                if ns.gsf is None:
                    parser.error("generalized-sasakian needs --gsf f1,f2,f3")
            elif ns.gsf is not None:
                parser.error("--gsf applies only to generalized-sasakian")
            elif ns.c is None:
                parser.error(f"--preset {ns.preset} needs --c")
            if kind is not PresetKind.S_SPACE_FORM and ns.s != 1:
                parser.error(f"--preset {ns.preset} requires --s 1")
    return SuiteConfig(
        n=ns.n, s=ns.s, preset=ns.preset, c=ns.c, f1=ns.f1, f2=ns.f2, fij=ns.fij,
        gsf=ns.gsf, suite=ns.suite, seed=ns.seed, tol=ns.tol, rank_tol=ns.rank_tol,
        normal=ns.normal, format=ns.format, sweep=ns.sweep, out=ns.out, timing=ns.timing,
    )


# ---------------------------------------------------------------- suites

def _suite_axioms(cfg, F, P):
    canon = validate_structure(F, cfg.tol)
    rand = validate_structure(random_adapted_frame(F, cfg.seed), cfg.tol)
    return {"canonical": canon.to_dict(), "random_frame": rand.to_dict()}, canon.passed and rand.passed


def _suite_curvature(cfg, F, P):
    R = model_curvature(F, P)
    audit = symmetry_audit(R, cfg.tol)
    rng = np.random.default_rng(cfg.seed)
    target = P.phi_sectional
    dev = max(abs(phi_sectional_curvature(F, R, random_horizontal_unit(F, rng)) - target)
              for _ in range(PHI_SECTIONAL_SAMPLES))
    ok = audit.flags["skew_12"] and dev < PHI_SECTIONAL_TOL
    return {
        "symmetry_audit": audit.to_dict(),
        "phi_sectional": {"expected": target, "max_deviation": dev,
                          "samples": PHI_SECTIONAL_SAMPLES},
    }, ok


def _kernel(F, P, subspace, rank_tol):
    return nullspace(assemble_action_matrix(model_curvature(F, P), subspace), rank_tol)


def _suite_symmetric(cfg, F, P):
    R = model_curvature(F, P)
    K = nullspace(assemble_action_matrix(R, Subspace.SYMMETRIC), cfg.rank_tol)
    cls = classify_symmetric_kernel(F, K, 1e-8, R=R, P=P)
    Fr = random_adapted_frame(F, cfg.seed)
    dim_frame = _kernel(Fr, P, Subspace.SYMMETRIC, cfg.rank_tol).dimension
    oracle = brute_force_nullity(F, P, "symmetric", cfg.rank_tol)
    if not P.has_nonzero_family:
        outcome = Outcome.HYPOTHESIS_NOT_MET
    else:
        outcome = Outcome.CONFIRMED if cls.verdict.value == "contained_in_span" else Outcome.REFUTED
    ok = (oracle == K.dimension and dim_frame == K.dimension
          and outcome is not Outcome.REFUTED)
    return {
        "outcome": outcome.value,
        "dimension": K.dimension,
        "oracle_dimension": oracle,
        "random_frame_dimension": dim_frame,
        "classification": cls.to_dict(),
    }, ok


def _suite_skew(cfg, F, P):
    K = _kernel(F, P, Subspace.SKEW, cfg.rank_tol)
    dim_frame = _kernel(random_adapted_frame(F, cfg.seed), P, Subspace.SKEW,
                             cfg.rank_tol).dimension
    oracle = brute_force_nullity(F, P, "skew", cfg.rank_tol)
    if not P.has_nonzero_family:
        outcome = Outcome.HYPOTHESIS_NOT_MET
    else:
        outcome = Outcome.CONFIRMED if K.dimension == 0 else Outcome.REFUTED
    ok = oracle == K.dimension and dim_frame == K.dimension and outcome is not Outcome.REFUTED
    return {
        "outcome": outcome.value,
        "dimension": K.dimension,
        "oracle_dimension": oracle,
        "random_frame_dimension": dim_frame,
    }, ok


def _normal_vector(cfg, F):
    if cfg.normal == "random":
        return random_normal(F, np.random.default_rng(cfg.seed))
    k = int(cfg.normal.split(":")[1])
    if k >= F.dim:
        raise FpkError(f"normal index {k} out of range for dim {F.dim}")
    e = np.eye(F.dim)[k]
    return e / np.sqrt(F.inner(e, e))


def _suite_hypersurface(cfg, F, P):
    R = model_curvature(F, P)
    Hs = make_hypersurface(F, _normal_vector(cfg, F), cfg.tol)
    witness = parallel_obstruction_witness(Hs, R, P, cfg.tol, seed=cfg.seed)
    comps = normal_components(Hs, R)
    K = semi_parallel_kernel(Hs, R, cfg.rank_tol)
    if F.n < 2:
        obstruction = Outcome.HYPOTHESIS_NOT_MET
    elif P.F2 != 0.0:
        ok = witness is not None and abs(abs(witness.value) - 2 * abs(P.F2)) < 1e-9
        obstruction = Outcome.CONFIRMED if ok else Outcome.REFUTED
    else:
        obstruction = Outcome.CONFIRMED if witness is None else Outcome.REFUTED
    result = {
        "normal": Hs.normal.tolist(),
        "obstruction": obstruction.value,
        "witness": None if witness is None else {
            "X": witness.X.tolist(), "Y": witness.Y.tolist(), "Z": witness.Z.tolist(),
            "value": witness.value,
        },
        "expected_magnitude": 2 * abs(P.F2),
        "max_normal_component": float(np.abs(comps).max(initial=0.0)),
        "semi_parallel": {
            "dimension": K.dimension,
            "span_residuals": tangent_span_residuals(Hs, K),
        },
    }
    return result, obstruction is not Outcome.REFUTED and K.dimension >= 1


def _suite_ricci(cfg, F, P):
    rep = ricci_report(F, model_curvature(F, P))
    return rep.to_dict(), rep.membership_residual < RICCI_TOL and rep.symmetric


SUITE_RUNNERS = {
    "axioms": _suite_axioms,
    "curvature": _suite_curvature,
    "symmetric_kernel": _suite_symmetric,
    "skew_kernel": _suite_skew,
    "hypersurface": _suite_hypersurface,
    "ricci": _suite_ricci,
}


def run_suite(cfg: SuiteConfig) -> SuiteReport:
    start = time.perf_counter()
    names = list(SUITE_RUNNERS) if cfg.suite == "all" else [cfg.suite]
    results: dict = {}
    passed = True
    error = None
    try:
        F = canonical_structure(cfg.n, cfg.s)
        P = cfg.params()
        results["params"] = P.to_dict()
        for name in names:
            res, ok = SUITE_RUNNERS[name](cfg, F, P)
            res["pass"] = bool(ok)
            results[name] = res
            passed = passed and ok
    except FpkError as exc:
        passed = False
        error = f"{type(exc).__name__}: {exc}"
    elapsed = (time.perf_counter() - start) * 1e3
    return SuiteReport(cfg.to_dict(), results, passed, elapsed if cfg.timing else None, error)


# ---------------------------------------------------------------- output

def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    return format(x, ".17g")


def dump_json(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dump_json(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [f"{pad}{dump_json(v, indent, _level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def render_text(report: SuiteReport) -> str:
    cfg = report.config
    head = (f"n={cfg['n']} s={cfg['s']} preset={cfg['preset']} c={cfg['c']} "
            f"suite={cfg['suite']} seed={cfg['seed']}")
    lines = [head]
    for name, res in report.results.items():
        if name == "params":
            lines.append(f"  params: F1={res['F1']:.6g} F2={res['F2']:.6g} Fij={res['Fij']}")
            continue
        status = "PASS" if res.get("pass") else "FAIL"
        detail = ""
        if "dimension" in res:
            detail = f" dim={res['dimension']} outcome={res.get('outcome')}"
        elif name == "hypersurface":
            w = res["witness"]
            detail = (f" obstruction={res['obstruction']} witness="
                      f"{'none' if w is None else format(w['value'], '.6g')}"
                      f" semi_parallel_dim={res['semi_parallel']['dimension']}")
        elif name == "ricci":
            detail = (f" membership={res['membership_residual']:.3g}"
                      f" R.S={res['semisymmetry_residual']:.3g}")
        elif name == "curvature":
            detail = f" phi_sectional_dev={res['phi_sectional']['max_deviation']:.3g}"
        lines.append(f"  {name}: {status}{detail}")
    if report.error:
        lines.append(f"  error: {report.error}")
    lines.append(f"overall: {'PASS' if report.passed else 'FAIL'}")
    return "\n".join(lines)


def _cell_config(base: SuiteConfig, n: int, preset: str, c: float, s: int) -> SuiteConfig:
    return SuiteConfig(n=n, s=s, preset=preset, c=c, suite=base.suite, seed=base.seed,
                       tol=base.tol, rank_tol=base.rank_tol, normal=base.normal,
                       format="json", timing=base.timing)


def run_sweep(cfg: SuiteConfig, stream=sys.stdout) -> int:
    out_dir = Path(cfg.out) if cfg.out else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    cells = []
    all_ok = True
    for n in SWEEP_N:
        for preset, c, s in SWEEP_CELLS:
            cell_cfg = _cell_config(cfg, n, preset, c, s)
            report = run_suite(cell_cfg)
            name = f"n{n}_{preset}_c{c:g}_s{s}"
            if out_dir is not None:
                (out_dir / f"{name}.json").write_text(dump_json(report.to_dict()) + "\n",
                                                      encoding="utf-8")
            cells.append({"cell": name, "pass": report.passed})
            all_ok = all_ok and report.passed
            if cfg.format == "text":
                stream.write(f"{'PASS' if report.passed else 'FAIL'} {name}\n")
    summary = SuiteReport(cfg.to_dict(), {"cells": cells}, all_ok,
                          (time.perf_counter() - start) * 1e3 if cfg.timing else None)
    text = dump_json(summary.to_dict()) + "\n"
    if out_dir is not None:
        (out_dir / "summary.json").write_text(text, encoding="utf-8")
    if cfg.format == "json":
        stream.write(text)
    else:
        failed = sum(not c["pass"] for c in cells)
        stream.write(f"sweep: {len(cells) - failed}/{len(cells)} cells pass\n")
    return 0 if all_ok else 1


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if cfg.sweep:
        return run_sweep(cfg)
    report = run_suite(cfg)
    if cfg.format == "json":
        text = dump_json(report.to_dict()) + "\n"
    else:
        text = render_text(report) + "\n"
    if cfg.out:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(dump_json(report.to_dict()) + "\n", encoding="utf-8")
    sys.stdout.write(text)
    return 0 if report.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
