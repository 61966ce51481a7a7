"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import logging
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import __version__
from .campaigns import (
    SWEEP_COLUMNS,
    experiment_campaign,
    free_web,
    run_acceptance,
    sweep,
)
from .dimension import dimension_report, forced_zero_set
from .errors import GraphSchroError, ParseError, ToleranceOutOfRange
from .evolution import DEFAULT_GUARD_SITES, DEFAULT_N, canonical_channel_data, evolve, evolve_web, uncertainty_experiment
from .extension import decompose, maximal_extension
from .io import load_document, web_from_dict
from .scattering import DEFAULT_GUARD, eigenfunction, eigenfunction_residual, scattering_at
from .spectral import DEFAULT_GROUP_TOL, DEFAULT_KERNEL_TOL, check_tol

log = logging.getLogger("graphschro")

SUBCOMMANDS = ("extend", "dimension", "sweep", "scatter", "evolve", "experiment", "verify")


@dataclass
class RunConfig:
    subcommand: str
    input: Optional[str] = None
    tol_group: float = DEFAULT_GROUP_TOL
    tol_kernel: float = DEFAULT_KERNEL_TOL
    guard: float = DEFAULT_GUARD
    seed: int = 7
    format: Optional[str] = None
    out: Optional[str] = None
    subset: Optional[str] = None
    channel_zeros: Optional[str] = None
    theta: Optional[str] = None
    t: Optional[float] = None
    N: int = DEFAULT_N
    guard_sites: int = DEFAULT_GUARD_SITES
    count: int = 500
    runs: Optional[int] = None
    symmetrize: bool = False

    def validate(self):
        check_tol(self.tol_group, "--tol-group")
        check_tol(self.tol_kernel, "--tol-kernel")
        if not 0 < self.guard <= 1e-2:
            raise ToleranceOutOfRange(f"--guard={self.guard!r} must lie in (0, 1e-2]")

    def header(self, digest: Optional[str] = None) -> dict:
        h = {
            "tool": "graphschro",
            "version": __version__,
            "subcommand": self.subcommand,
            "tol_group": self.tol_group,
            "tol_kernel": self.tol_kernel,
            "guard": self.guard,
            "seed": self.seed,
        }
        if digest is not None:
            h["input_sha256"] = digest
        return h


def _parse_ints(text: Optional[str]) -> Optional[list[int]]:
    if text is None:
        return None
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise ParseError(f"expected comma-separated vertex indices, got {text!r}") from exc


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise ParseError(f"cannot read {text!r} as a complex number") from exc


def _complex_vector(obj, where: str) -> np.ndarray:
    try:
        vals = [complex(x[0], x[1]) if isinstance(x, (list, tuple)) else complex(x) for x in obj]
    except (TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"{where}: entries must be numbers or [re, im] pairs") from exc
    return np.array(vals, dtype=complex)


def _cjson(z) -> list:
    z = np.asarray(z, dtype=complex)
    return np.stack([z.real, z.imag], axis=-1).tolist()


def _load(cfg: RunConfig):
    if cfg.input is None:
        raise ParseError(f"`{cfg.subcommand}` needs an input file")
    doc, digest = load_document(cfg.input)
    return doc, web_from_dict(doc, cfg.symmetrize), digest


def _working_graph(web):
    # with channels, finite analysis runs on the core plus every nu(1)
    if web.channels:
        return web.finite_part()[0]
    return web.core


def _subset(cfg: RunConfig, doc: dict) -> list[int]:
    B = _parse_ints(cfg.subset)
    if B is None:
        B = doc.get("B", [])
        if not isinstance(B, list) or not all(isinstance(b, int) for b in B):
            raise ParseError("key 'B' must be a list of vertex indices")
    return B


def cmd_extend(cfg: RunConfig):
    doc, web, digest = _load(cfg)
    g = _working_graph(web)
    B = _subset(cfg, doc)
    try:
        ext = maximal_extension(g, B)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    dec = decompose(g, ext.closure)
    return 0, {
        "header": cfg.header(digest),
        "B": sorted(B),
        "closure": sorted(ext.closure),
        "chain": list(ext.chain),
        "steps": [list(s) for s in ext.steps],
        "clusters": {str(b): sorted(v) for b, v in dec.clusters.items()},
        "branches": [sorted(b) for b in dec.branches],
        "orders": list(dec.orders),
    }


def cmd_dimension(cfg: RunConfig):
    doc, web, digest = _load(cfg)
    g = _working_graph(web)
    B = _subset(cfg, doc)
    try:
        rep = dimension_report(g, B, cfg.tol_group, cfg.tol_kernel)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    out = {"header": cfg.header(digest), "B": sorted(B), "report": rep.to_dict()}
    if web.channels:
        zeros = _parse_ints(cfg.channel_zeros) or []
        fz = forced_zero_set(web, B, zeros)
        out["forced_zero"] = {
            "finite": sorted(fz.finite),
            "channels": sorted(fz.channels),
            "everything": fz.everything,
        }
    status = 0 if rep.match and rep.sandwiched else 1
    return status, out


def cmd_sweep(cfg: RunConfig):
    rows = sweep(cfg.seed, cfg.count, cfg.tol_group, cfg.tol_kernel)
    ok = all(r.match and r.sandwiched and r.closure_insensitive for r in rows)
    table = [SWEEP_COLUMNS] + [r.csv_fields() for r in rows]
    summary = {
        "instances": len(rows),
        "sandwiched": sum(r.sandwiched for r in rows),
        "match": sum(r.match for r in rows),
        "closure_insensitive": sum(r.closure_insensitive for r in rows),
    }
    return (0 if ok else 1), {"header": cfg.header(), "summary": summary, "table": table}


def cmd_scatter(cfg: RunConfig):
    doc, web, digest = _load(cfg)
    if not web.channels:
        raise ParseError("`scatter` needs at least one channel")
    if cfg.theta is None:
        raise ParseError("`scatter` needs --theta")
    theta = _parse_complex(cfg.theta)
    sc = scattering_at(web, theta, cfg.guard, cfg.tol_group)
    sc_ref = scattering_at(web, 1 / theta, cfg.guard, cfg.tol_group)
    nch = len(web.channels)
    depth = web.K0 + 3
    residuals = []
    for c in range(nch):
        phi = eigenfunction(web, theta, np.eye(nch)[c], depth, scat=sc)
        residuals.append(eigenfunction_residual(web, phi))
    return 0, {
        "header": cfg.header(digest),
        "theta": _cjson(theta),
        "T": _cjson(sc.T),
        "T_reflected": _cjson(sc.T_reflected),
        "S": _cjson(sc.S),
        "cond_T": sc.cond,
        "cond_T_reflected": sc_ref.cond,
        "SS_reflected_defect": float(np.max(np.abs(sc.S @ sc_ref.S - np.eye(nch)))),
        "unitarity_defect": sc.unitarity_defect(),
        "eigenfunction_residuals": residuals,
    }


def cmd_evolve(cfg: RunConfig):
    doc, web, digest = _load(cfg)
    u0 = _complex_vector(_need_key(doc, "u0"), "u0")
    t = cfg.t if cfg.t is not None else float(doc.get("t", 1.0))
    if web.channels:
        st = evolve_web(web, u0, t, cfg.N, cfg.guard_sites)
    else:
        st = evolve(web.core, u0, t)
    return 0, {
        "header": cfg.header(digest),
        "t": st.t,
        "N": st.N,
        "u": _cjson(st.u),
        "norm0": float(np.linalg.norm(u0)),
        "norm": st.norm,
        "leakage": st.leakage,
    }


def _need_key(doc, key):
    if key not in doc:
        raise ParseError(f"missing key {key!r}")
    return doc[key]


def cmd_experiment(cfg: RunConfig):
    if cfg.runs is not None:
        reports = experiment_campaign(cfg.seed, cfg.runs, cfg.N, cfg.guard_sites)
        table = [["run_id", "channel", "eps", "holds_t0", "holds_t1", "nontrivial", "type_t0", "type_t1", "verdict"]]
        for i, r in enumerate(reports):
            table.append([i, r.channel, f"{r.eps:.6g}", r.check0.holds, r.check1.holds, r.nontrivial, f"{r.type0.sigma:.6g}", f"{r.type1.sigma:.6g}", r.verdict])
        bad = sum(r.verdict == "VIOLATION" for r in reports)
        return (1 if bad else 0), {"header": cfg.header(), "summary": {"runs": len(reports), "violations": bad}, "table": table}

    digest = None
    if cfg.input is None:
        web, channel, eps, C, u0 = free_web(), 0, 1.0, 1.0, "canonical"
    else:
        doc, digest = load_document(cfg.input)
        web = web_from_dict(doc["graph"]) if "graph" in doc else free_web()
        channel = int(doc.get("channel", 0))
        eps = float(doc.get("eps", 1.0))
        C = float(doc.get("C", 1.0))
        u0 = doc.get("u0", "canonical")
    if isinstance(u0, str):
        if u0 != "canonical":
            raise ParseError("u0 must be 'canonical' or a list of values")
        u0 = canonical_channel_data(web, channel, eps, cfg.N, cfg.N - cfg.guard_sites)
    else:
        u0 = _complex_vector(u0, "u0")
    rep = uncertainty_experiment(web, channel, eps, u0, cfg.N, cfg.guard_sites, C)
    table = [["k", "margin_t0", "margin_t1"]] + [[k, f"{m0:.6g}", f"{m1:.6g}"] for k, m0, m1 in rep.margin_rows()]
    summary = {
        "verdict": rep.verdict,
        "holds_t0": rep.check0.holds,
        "holds_t1": rep.check1.holds,
        "type_t0": rep.type0.sigma,
        "type_t1": rep.type1.sigma,
        "leakage": rep.leakage,
        "resolved_break": rep.resolved_break,
        "grid_worst_margin": [[t, round(m, 6)] for t, m in rep.grid],
    }
    return (1 if rep.verdict == "VIOLATION" else 0), {"header": cfg.header(digest), "summary": summary, "table": table}


def cmd_verify(cfg: RunConfig):
    results = run_acceptance(cfg.seed)
    ok = all(c.passed for c in results)
    return (0 if ok else 1), {
        "header": cfg.header(),
        "passed": ok,
        "criteria": [{"number": c.number, "name": c.name, "passed": c.passed, "detail": c.detail} for c in results],
    }


COMMANDS = {
    "extend": cmd_extend,
    "dimension": cmd_dimension,
    "sweep": cmd_sweep,
    "scatter": cmd_scatter,
    "evolve": cmd_evolve,
    "experiment": cmd_experiment,
    "verify": cmd_verify,
}
CSV_DEFAULT = {"sweep", "experiment"}


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=False) + "\n"
    buf = _io.StringIO()
    for key, val in report["header"].items():
        buf.write(f"# {key}={val}\n")
    for key, val in report.get("summary", {}).items():
        buf.write(f"# {key}={val}\n")
    if "table" in report:
        csv.writer(buf, lineterminator="\n").writerows(report["table"])
    elif "criteria" in report:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["number", "name", "passed", "detail"])
        for c in report["criteria"]:
            w.writerow([c["number"], c["name"], c["passed"], c["detail"]])
    else:
        raise ParseError("this report has no tabular form; use --format json")
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="graphschro", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-group", type=float, default=DEFAULT_GROUP_TOL, help="relative eigenvalue grouping tolerance")
    common.add_argument("--tol-kernel", type=float, default=DEFAULT_KERNEL_TOL, help="relative singular value cutoff")
    common.add_argument("--guard", type=float, default=DEFAULT_GUARD, help="minimum distance of theta from the singular set")
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=["json", "csv"])
    common.add_argument("--symmetrize", action="store_true", help="replace L by (L + L^T)/2 instead of rejecting it")

    for name in SUBCOMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name in ("extend", "dimension", "scatter", "evolve"):
            sp.add_argument("input")
        if name == "experiment":
            sp.add_argument("input", nargs="?")
            sp.add_argument("--runs", type=int, help="run a randomized campaign of this many experiments")
        if name in ("extend", "dimension"):
            sp.add_argument("--subset", help="comma-separated vertex indices (overrides key 'B')")
        if name == "dimension":
            sp.add_argument("--channel-zeros", help="channels known to vanish (web graphs)")
        if name == "scatter":
            sp.add_argument("--theta", required=True, help="spectral parameter, e.g. 0.6+0.8i")
        if name == "evolve":
            sp.add_argument("--t", type=float)
        if name in ("evolve", "experiment"):
            sp.add_argument("--N", type=int, default=DEFAULT_N, help="channel truncation length")
            sp.add_argument("--guard-sites", type=int, default=DEFAULT_GUARD_SITES)
        if name == "sweep":
            sp.add_argument("--count", type=int, default=500)
    return p


def run(cfg: RunConfig) -> tuple[int, str]:
    cfg.validate()
    status, report = COMMANDS[cfg.subcommand](cfg)
    fmt = cfg.format or ("csv" if cfg.subcommand in CSV_DEFAULT else "json")
    return status, render(report, fmt)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__})
    try:
        status, text = run(cfg)
    except (GraphSchroError, OSError) as exc:
        print(f"graphschro {cfg.subcommand}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
