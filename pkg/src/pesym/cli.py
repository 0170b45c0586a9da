"""``pesym``: batch front end for the verification runs.

Every subcommand computes named metrics, compares each with a tolerance
from :data:`TOLERANCES` (overridable with ``--tol key=value``) and writes a
JSON report. Exit status: 0 all verdicts pass, 1 a verdict fails, 2 bad
configuration, 3 domain error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import generators as gen
from .errors import DomainError, VerificationError
from .fields import DEFAULT_PROFILES, PhysConsts, StateField, field_from_config, sample_points
from .functions import Poly, Sine
from .residual import defect_scaling, residual_norms

OUTPUT_ENV = "PESYM_OUTPUT_DIR"

# name: (value, relation). "lt": metric < value passes; "gt": metric > value passes.
TOLERANCES = {
    "residual_exact": (1e-10, "lt"),      # closed-form fields, exact partials
    "residual_fd": (1e-6, "lt"),          # closed-form fields, central differences
    "transport": (1e-8, "lt"),            # residual of transported solutions
    "roundtrip": (1e-12, "lt"),           # forward(inverse(z)) - z
    "involution": (1e-10, "lt"),          # residual after a discrete involution
    "negative_control": (1e-3, "gt"),     # perturbed maps must break solutions
    "isomorphism": (1e-6, "lt"),
    "isomorphism_corrupt": (1e-2, "gt"),
    "reduced": (1e-7, "lt"),              # reduced (t, p) system
    "reduction_field": (1e-6, "lt"),      # assembled full field
    "convergence": (8.0, "gt"),           # error ratio when the step is quartered
    "g_inverse": (1e-10, "lt"),
    "liouville": (1e-8, "lt"),
    "frame_equivalence": (1e-9, "lt"),    # extra residual added by the frame change
}

FIELD_NAMES = tuple(DEFAULT_PROFILES)
COMMANDS = ("residual", "derotate", "symmetry-check", "megaideals", "isomorphism", "reduce",
            "group-verify")

DEFAULTS = {
    "residual": {"field": "stratified", "f": None, "points": 1000, "mode": "exact"},
    "derotate": {"f": 1.0, "fields": ["stratified", "manufactured-polynomial", "reduction:rotating-shear"],
                 "points": 1000},
    "symmetry-check": {"points": 100, "eps": [1e-2, 1e-3, 1e-4], "f": 1.0,
                       "fields": ["stratified", "manufactured-polynomial"]},
    "megaideals": {"degree": 4, "compare": 6, "kappa": "2/7", "exactness": [2, 3, 4]},
    "isomorphism": {"f": 1.0, "points": 100, "N": 3, "corrupt": False},
    "reduce": {"spec": "general", "f": 0.0, "verify": True, "points": 300, "grid": 50,
               "steps_per_unit": 200},
    # stratified has omega = 0, so omega-scale controls need the advected field
    "group-verify": {"samples": 20, "points": 1000, "fields": ["stratified", "manufactured-polynomial"],
                     "control_fields": ["manufactured-polynomial"],
                     "involution_fields": ["stratified", "manufactured-polynomial", "reduction:rotating-shear"], "perturb": {}},
}


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    report: Optional[str] = None
    emit_samples: Optional[str] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}; known: {COMMANDS}")
        unknown = set(self.params) - set(DEFAULTS[self.command])
        if unknown:
            raise ValueError(f"unknown parameters for {self.command}: {sorted(unknown)}")
        self.params = {**DEFAULTS[self.command], **self.params}
        bad = set(self.tolerances) - set(TOLERANCES)
        if bad:
            raise ValueError(f"unknown tolerance names: {sorted(bad)}")
        for name, value in self.tolerances.items():
            if not (isinstance(value, (int, float)) and value > 0 and math.isfinite(value)):
                raise ValueError(f"tolerance {name} must be a positive number, got {value!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed!r}")

    @classmethod
    def from_dict(cls, cfg: dict) -> "RunConfig":
        cfg = dict(cfg)
        unknown = set(cfg) - {"command", "params", "seed", "tolerances", "report", "emit_samples"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "command" not in cfg:
            raise ValueError("config needs a 'command'")
        return cls(**cfg)

    def tol(self, name: str) -> float:
        return float(self.tolerances.get(name, TOLERANCES[name][0]))


class Report:
    def __init__(self, config: RunConfig):
        self.config = config
        self.metrics: dict = {}
        self.verdicts: dict = {}
        self.tables: dict = {}
        self.wall_time = 0.0

    def metric(self, name: str, value):
        self.metrics[name] = _clean(value)

    def check(self, name: str, value: float, tol_name: str) -> bool:
        tol = self.config.tol(tol_name)
        relation = TOLERANCES[tol_name][1]
        value = float(value)
        ok = value < tol if relation == "lt" else value > tol
        self.metric(name, value)
        self.verdicts[name] = {"metric": _clean(value), "tolerance": tol, "relation": relation,
                               "tolerance_name": tol_name, "pass": bool(ok)}
        return ok

    def flag(self, name: str, ok: bool, detail=None):
        self.verdicts[name] = {"pass": bool(ok)}
        if detail is not None:
            self.verdicts[name]["detail"] = _clean(detail)

    @property
    def passed(self) -> bool:
        return all(v["pass"] for v in self.verdicts.values())

    def as_dict(self, include_time: bool = True) -> dict:
        out = {
            "command": self.config.command,
            "settings": {"params": _clean(self.config.params), "seed": self.config.seed,
                         "tolerances": {k: self.config.tol(k) for k in sorted(TOLERANCES)}},
            "metrics": self.metrics,
            "tables": _clean(self.tables),
            "verdicts": self.verdicts,
            "passed": self.passed,
        }
        if include_time:
            out["wall_time"] = self.wall_time
        return out

    def to_json(self, include_time: bool = True) -> str:
        return json.dumps(self.as_dict(include_time), indent=2, sort_keys=True)

    def human(self) -> str:
        lines = [f"pesym {self.config.command}  seed={self.config.seed}"]
        for name, table in self.tables.items():
            lines.append(f"\n{name}")
            lines += _format_table(table)
        rows = [[name, _fmt(v.get("metric", "")), _relation(v), "PASS" if v["pass"] else "FAIL"]
                for name, v in self.verdicts.items()]
        lines.append("")
        lines += _format_table([["check", "metric", "tolerance", "verdict"]] + rows)
        lines.append(f"\n{'PASS' if self.passed else 'FAIL'}  ({self.wall_time:.1f} s)")
        return "\n".join(lines)


def _relation(v: dict) -> str:
    if "tolerance" not in v:
        return ""
    return ("< " if v["relation"] == "lt" else "> ") + f"{v['tolerance']:.1e}"


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.3e}"
    return str(x)


def _format_table(rows) -> list[str]:
    rows = [[_fmt(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]


def _clean(x):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, Fraction):
        return str(x)
    return x


# -- field registry ------------------------------------------------------------
def build_field(name, consts: PhysConsts) -> StateField:
    """Closed-form field by name or config block, or ``reduction:<preset>``."""
    if isinstance(name, str) and name.startswith("reduction:"):
        from .reduction import assemble_solution, spec_from_preset
        return assemble_solution(spec_from_preset(name.split(":", 1)[1], consts.with_f(0.0)))
    return field_from_config(name, consts)


def _field_label(name) -> str:
    return name if isinstance(name, str) else name.get("name", "field")


# -- commands ------------------------------------------------------------------
def run_residual(cfg: RunConfig, rep: Report):
    prm = cfg.params
    spec = prm["field"]
    label = _field_label(spec)
    reduced = isinstance(spec, str) and spec.startswith("reduction:")
    if not reduced:
        spec = {"name": spec} if isinstance(spec, str) else dict(spec)
    f = prm["f"]
    if f is None:
        f = 0.0 if reduced else spec.get("f", DEFAULT_PROFILES.get(spec.get("name"), {}).get("f", 0.0))
    consts = PhysConsts(f=float(f))
    if reduced:
        fld = build_field(spec, consts)
        fld = fld.with_fd() if prm["mode"] == "fd" else fld
    else:
        fld = build_field({**spec, "mode": prm["mode"]}, consts)
    pts = sample_points(cfg.seed, int(prm["points"]))
    norms = residual_norms(fld, consts, pts)
    rep.tables["residual by equation"] = [["equation", "linf", "rms"]] + [
        [k, norms.linf[i], norms.rms[i]] for i, k in enumerate(("r_u", "r_v", "r_hyd", "r_cont", "r_T"))]
    rep.metric("residual", norms.as_dict())
    tol = "residual_exact" if fld.derivative_mode == "exact" else "residual_fd"
    rep.check(f"residual/{label}/{fld.derivative_mode}", norms.max_linf, tol)


def run_derotate(cfg: RunConfig, rep: Report):
    from .liealg import sample_states
    from .transforms import derotation, invert, pushforward_field
    prm = cfg.params
    f = float(prm["f"])
    c0, cf = PhysConsts(), PhysConsts(f=f)
    pts = sample_points(cfg.seed, int(prm["points"]))
    g = derotation(f)
    to_rot = invert(g)
    rows = [["field", "f=0 residual", f"rotated residual (f={f:g})", "back-transformed residual"]]
    for name in prm["fields"]:
        label = _field_label(name)
        fld = build_field(name, c0)
        base = residual_norms(fld, c0, pts).max_linf
        rotated = pushforward_field(to_rot, fld)
        r_rot = residual_norms(rotated, cf, pts).max_linf
        back = residual_norms(pushforward_field(g, rotated), c0, pts).max_linf
        rows.append([label, base, r_rot, back])
        rep.check(f"inverse-direction/{label}", r_rot, "transport")
        rep.check(f"round-trip-field/{label}", back, "transport")
    inertial = field_from_config({"name": "inertial", "f": f}, cf)
    fwd = residual_norms(pushforward_field(g, inertial), c0, pts).max_linf
    rows.append([f"inertial(f={f:g}) forward", residual_norms(inertial, cf, pts).max_linf, "", fwd])
    rep.tables["transport"] = rows
    rep.check("forward-direction/inertial", fwd, "transport")
    z = sample_states(cfg.seed, int(prm["points"]))
    rt = max(float(np.max(np.abs(g.inverse(g.forward(z)) - z))),
             float(np.max(np.abs(g.forward(g.inverse(z)) - z))))
    rep.check("round-trip-coordinates", rt, "roundtrip")


def _gf_generators(consts: PhysConsts) -> dict:
    gamma = (Poly([0.0, 0.0, 1.0, 0.3]), Sine(1.0, 2.0))
    f = consts.f
    return {"D1": gen.D1(f), "D2": gen.D2(), "D3": gen.D3(), "J": gen.J(), "P": gen.P(),
            "S": gen.S(consts), "X": gen.X(gamma, f), "Z": gen.Z(Poly([1.0, 2.0, 3.0]))}


def run_symmetry_check(cfg: RunConfig, rep: Report):
    prm = cfg.params
    eps = tuple(float(e) for e in prm["eps"])
    pts = sample_points(cfg.seed, int(prm["points"]))
    rows = [["field", "generator", "defects", "ratios", "quadratic"]]

    def sweep(label, fld, consts, gens, expect=True):
        for name, vf in gens.items():
            sc = defect_scaling(vf, fld, consts, pts, eps)
            rows.append([label, name, " ".join(f"{d:.2e}" for d in sc.defects),
                         " ".join(f"{r:.1f}" for r in sc.ratios), str(sc.quadratic)])
            rep.metric(f"defects/{label}/{name}", sc.as_dict())
            key = "quadratic" if expect else "not-quadratic"
            rep.flag(f"{key}/{label}/{name}", sc.quadratic == expect, list(sc.ratios))

    c0 = PhysConsts()
    for name in prm["fields"]:
        sweep(_field_label(name), build_field(name, c0), c0, _gf_generators(c0))
    f = float(prm["f"])
    if f:
        cf = PhysConsts(f=f)
        sweep(f"inertial(f={f:g})", field_from_config({"name": "inertial", "f": f}, cf), cf,
              _gf_generators(cf))
    extras = lambda c: {"R": gen.R_time(Poly([0.2, 0.0, 0.5, 1.0])), "Ppsi": gen.P_boost(Poly([0.3, 1.0, 0.5]))}
    c1 = PhysConsts(R=1.0, c_p=1.0, allow_kappa_one=True)
    sweep("manufactured-polynomial(kappa=1)", field_from_config("manufactured-polynomial", c1), c1, extras(c1))
    sweep("manufactured-polynomial", field_from_config("manufactured-polynomial", c0), c0, extras(c0),
          expect=False)
    rep.tables["defect scaling"] = rows


def run_megaideals(cfg: RunConfig, rep: Report):
    from .liealg import TruncatedAlgebra, antisymmetry_defect, compare_truncations, jacobi_check, megaideal_chain
    from .liealg.subspace import Subspace
    prm = cfg.params
    kappa = Fraction(str(prm["kappa"]))
    N = int(prm["degree"])
    chain = megaideal_chain(N, kappa, strict=False)
    window = chain.entries[0].degree_window
    rows = [["#", "entry", "dim", f"agrees (deg<={window})", "low-degree generators"]]
    for i, e in enumerate(chain.entries, 1):
        rows.append([i, e.label, e.dim, str(e.agrees), ", ".join(e.low_degree(min(window, 1)))])
        rep.flag(f"entry-{i:02d}/{e.label}", e.agrees)
    rep.tables[f"megaideal chain (N={N})"] = rows
    rep.metric("chain", chain.as_dict())
    rep.metric("printed_last_entry_matches", chain.printed_last_matches)
    alg = chain.alg
    z_labels = [lab for lab in alg.labels if lab.startswith("Z(")]
    z_ok = all(space == Subspace.of_labels(alg, z_labels[:k + 1]) for k, space in enumerate(chain.z_series))
    rep.flag("z-series", z_ok, [s.dim for s in chain.z_series])
    cmp_n = prm.get("compare")
    if cmp_n:
        other = megaideal_chain(int(cmp_n), kappa, strict=False)
        same = compare_truncations(chain, other, degree=2)
        rep.flag(f"truncation-stable/N={N}-vs-N={cmp_n}", all(same), same)
    for n in prm["exactness"]:
        a = TruncatedAlgebra(int(n), kappa)
        anti, jac = antisymmetry_defect(a), jacobi_check(a)
        rep.flag(f"exact-antisymmetry/N={n}", anti == 0, str(anti))
        rep.flag(f"exact-jacobi/N={n}", jac == 0, str(jac))


def run_isomorphism(cfg: RunConfig, rep: Report):
    from .liealg import isomorphism_check
    prm = cfg.params
    kw = dict(f=float(prm["f"]), n_points=int(prm["points"]), seed=cfg.seed, N=int(prm["N"]))
    defect = isomorphism_check(corrupt=bool(prm["corrupt"]), **kw)
    rep.check("commutator-defect" + ("/corrupt" if prm["corrupt"] else ""), defect, "isomorphism")
    if not prm["corrupt"]:
        rep.check("negative-control/corrupt", isomorphism_check(corrupt=True, **kw), "isomorphism_corrupt")


def _reduction_spec(spec_cfg):
    from .reduction import ReductionSpec, spec_from_preset
    if isinstance(spec_cfg, str):
        path = Path(spec_cfg)
        if path.suffix == ".json" or path.exists():
            with open(path) as fh:
                spec_cfg = json.load(fh)
        else:
            return spec_from_preset(spec_cfg), spec_cfg
    label = spec_cfg.get("preset", "custom") if isinstance(spec_cfg, dict) else "custom"
    return ReductionSpec.from_config(spec_cfg), label


def run_reduce(cfg: RunConfig, rep: Report):
    from . import reduction as red
    from .transforms import derotation, invert, pushforward_field
    prm = cfg.params
    spec, label = _reduction_spec(prm["spec"])
    f = float(prm["f"])
    sol = red.ReducedSolution(spec, int(prm["steps_per_unit"]))
    fld = sol.field()
    if f:
        fld_out = pushforward_field(invert(derotation(f)), fld)
        consts_out = spec.consts.with_f(f)
    else:
        fld_out, consts_out = fld, spec.consts
    pts = sample_points(cfg.seed, int(prm["points"]), spec.box)
    compat = red.check_compatibility(spec)
    rep.metric("compatibility", compat.as_dict())
    if prm["verify"]:
        tg, pg = red.reduced_grid(spec, int(prm["grid"]))
        reduced = np.max(np.abs(sol.reduced_residual(tg, pg)), axis=1)
        rep.tables["reduced system L-inf"] = [["row", "linf"]] + [
            [k, v] for k, v in zip(("momentum-1", "momentum-2", "hydrostatic", "continuity", "energy"), reduced)]
        rep.check("reduced-system", float(np.max(reduced)), "reduced")
        base = residual_norms(fld, spec.consts, pts)
        rep.metric("field_residual", base.as_dict())
        rep.check("full-field-residual", base.max_linf, "reduction_field")
        errs, ratio = red.convergence_study(spec, pts[:, :100])
        rep.metric("convergence_errors", list(errs))
        if math.isinf(ratio):
            rep.flag("step-quartering", True, "integrands time-independent; RK4 exact to roundoff")
        else:
            rep.check("step-quartering", ratio, "convergence")
        G = red.solve_G(spec)
        rep.check("G-inverse", G.inverse_defect(), "g_inverse")
        det = np.linalg.det(G.values)
        rep.check("liouville", float(np.max(np.abs(det - spec.delta(spec.t0) / spec.delta(G.nodes)))),
                  "liouville")
        if f:
            rot = residual_norms(fld_out, consts_out, pts).max_linf
            rep.check(f"rotating-family(f={f:g})", rot, "transport")
            rep.check("frame-equivalence", max(0.0, rot - base.max_linf), "frame_equivalence")
    rep.metric("spec", label)
    if cfg.emit_samples:
        write_samples(cfg.emit_samples, pts, fld_out.value(pts))
        rep.metric("samples_path", str(cfg.emit_samples))


def write_samples(path, pts, values):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "x", "y", "p", "u", "v", "omega", "phi", "T"])
        for row in np.vstack([pts, values]).T:
            w.writerow([repr(float(v)) for v in row])


def run_group_verify(cfg: RunConfig, rep: Report):
    from .liealg import sample_states
    from .transforms import SymmetryParams, discrete_involutions, pushforward_field, symmetry_map
    prm = cfg.params
    perturb = {k: float(v) for k, v in dict(prm["perturb"]).items()}
    c0 = PhysConsts()
    rng = np.random.default_rng(cfg.seed)
    pts = sample_points(cfg.seed, int(prm["points"]))
    z = sample_states(cfg.seed, 200)
    params = [SymmetryParams.random(rng) for _ in range(int(prm["samples"]))]
    worst, worst_rt = 0.0, 0.0
    rows = [["sample", "eps1", "reflect", "residual"]]
    for name in prm["fields"]:
        fld = build_field(name, c0)
        for i, sp in enumerate(params):
            g = symmetry_map(sp, c0, perturb)
            r = residual_norms(pushforward_field(g, fld), c0, pts).max_linf
            worst = max(worst, r)
            rows.append([f"{_field_label(name)}#{i}", sp.eps1, str(sp.reflect), r])
            worst_rt = max(worst_rt, float(np.max(np.abs(g.inverse(g.forward(z)) - z))))
    rep.tables["symmetry samples"] = rows
    tag = "" if not perturb else "/perturbed"
    rep.check("symmetry-transport" + tag, worst, "transport")
    rep.check("round-trip-coordinates" + tag, worst_rt, "roundtrip")
    rep.metric("sampled_eps1_signs", sorted({int(np.sign(p.eps1)) for p in params}))
    rep.metric("sampled_reflections", sorted({bool(p.reflect) for p in params}))
    if not perturb:
        sp = params[0]
        for key in ("omega-scale", "T-scale"):
            g = symmetry_map(sp, c0, {key: 1.01})
            for name in prm["control_fields"]:
                r = residual_norms(pushforward_field(g, build_field(name, c0)), c0, pts).max_linf
                rep.check(f"negative-control/{key}/{_field_label(name)}", r, "negative_control")
    inv_fields = {_field_label(name): build_field(name, c0) for name in prm["involution_fields"]}
    for g in discrete_involutions():
        sq = float(np.max(np.abs(g.forward(g.forward(z)) - z)))
        rep.flag(f"involution-squared/{g.name}", sq == 0.0, sq)
        for label, fld in inv_fields.items():
            r = residual_norms(pushforward_field(g, fld), c0, pts).max_linf
            rep.check(f"involution/{g.name}/{label}", r, "involution")


RUNNERS: dict[str, Callable[[RunConfig, Report], None]] = {
    "residual": run_residual,
    "derotate": run_derotate,
    "symmetry-check": run_symmetry_check,
    "megaideals": run_megaideals,
    "isomorphism": run_isomorphism,
    "reduce": run_reduce,
    "group-verify": run_group_verify,
}


def run(config: RunConfig) -> tuple[Report, int]:
    """Execute one command; returns the report and the exit code (0 or 1)."""
    rep = Report(config)
    start = time.perf_counter()
    RUNNERS[config.command](config, rep)
    rep.wall_time = time.perf_counter() - start
    return rep, 0 if rep.passed else 1


def report_path(config: RunConfig) -> Path:
    if config.report:
        return Path(config.report)
    out = Path(os.environ.get(OUTPUT_ENV, "pesym-reports"))
    return out / f"{config.command}-seed{config.seed}.json"


# -- argument parsing ------------------------------------------------------------
def _parse_tol(items) -> dict:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise ValueError(f"--tol expects name=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k] = float(v)
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration; flags given here override it")
    common.add_argument("--seed", type=int)
    common.add_argument("--tol", action="append", metavar="NAME=VALUE", help="override a tolerance")
    common.add_argument("--report", help=f"report path (default: ${OUTPUT_ENV} or ./pesym-reports)")
    common.add_argument("--quiet", action="store_true", help="suppress the text table")

    parser = argparse.ArgumentParser(prog="pesym", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("residual", parents=[common], help="residual of a named solution")
    p.add_argument("--field", help=f"one of {FIELD_NAMES} or reduction:<preset>")
    p.add_argument("--f", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--mode", choices=("exact", "fd"))

    p = sub.add_parser("derotate", parents=[common], help="transport between resting and rotating frames")
    p.add_argument("--f", type=float)
    p.add_argument("--fields", nargs="+")
    p.add_argument("--points", type=int)

    p = sub.add_parser("symmetry-check", parents=[common], help="infinitesimal defect sweep of the generators")
    p.add_argument("--points", type=int)
    p.add_argument("--eps", type=float, nargs="+")
    p.add_argument("--f", type=float)

    p = sub.add_parser("megaideals", parents=[common], help="megaideal chain of the truncated algebra")
    p.add_argument("--degree", type=int, help="truncation degree N")
    p.add_argument("--compare", type=int, help="second truncation for the stability check (0 to skip)")
    p.add_argument("--kappa")

    p = sub.add_parser("isomorphism", parents=[common], help="rotating vs resting algebra commutators")
    p.add_argument("--f", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--corrupt", action="store_true", default=None)

    p = sub.add_parser("reduce", parents=[common], help="group-invariant solution family")
    p.add_argument("--spec", help="preset name or path to a JSON spec")
    p.add_argument("--f", type=float)
    p.add_argument("--verify", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--points", type=int)
    p.add_argument("--grid", type=int)
    p.add_argument("--steps-per-unit", dest="steps_per_unit", type=int)
    p.add_argument("--emit-samples", dest="emit_samples", help="CSV of t,x,y,p,u,v,omega,phi,T")

    p = sub.add_parser("group-verify", parents=[common], help="finite symmetries and discrete involutions")
    p.add_argument("--samples", type=int)
    p.add_argument("--points", type=int)
    p.add_argument("--perturb", nargs=2, action="append", metavar=("COMPONENT", "FACTOR"))
    return parser


_COMMON = {"config", "seed", "tol", "report", "quiet", "command", "emit_samples"}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    base = {}
    if args.config:
        with open(args.config) as fh:
            base = json.load(fh)
        if base.get("command", args.command) != args.command:
            raise ValueError(f"config is for {base['command']!r}, not {args.command!r}")
    base["command"] = args.command
    params = dict(base.get("params", {}))
    for key, value in vars(args).items():
        if key in _COMMON or value is None:
            continue
        if key == "perturb":
            value = {k: float(v) for k, v in value}
        params[key] = value
    base["params"] = params
    if args.seed is not None:
        base["seed"] = args.seed
    tolerances = dict(base.get("tolerances", {}))
    tolerances.update(_parse_tol(args.tol))
    base["tolerances"] = tolerances
    if args.report:
        base["report"] = args.report
    if getattr(args, "emit_samples", None):
        base["emit_samples"] = args.emit_samples
    return RunConfig.from_dict(base)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except (OSError, ValueError, TypeError, json.JSONDecodeError) as exc:
        print(f"pesym: configuration error: {exc}", file=sys.stderr)
        return 2
    try:
        rep, code = run(config)
    except DomainError as exc:
        print(f"pesym: domain error: {exc}", file=sys.stderr)
        return 3
    except VerificationError as exc:
        print(f"pesym: verification failed: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"pesym: configuration error: {exc}", file=sys.stderr)
        return 2
    path = report_path(config)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(rep.to_json() + "\n")
    if not args.quiet:
        print(rep.human())
        print(f"report: {path}")
    return code


if __name__ == "__main__":
    sys.exit(main())
