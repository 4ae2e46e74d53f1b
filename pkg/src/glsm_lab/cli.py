"""``glsm-lab`` command line interface."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import git
from .analyzer import (
    Epsilon,
    ModelInput,
    StructureError,
    central_charge_of,
    critical_components,
    fixed_loci,
    locus_string,
    lookup_sector,
    nondegeneracy_check,
    normalize_beta,
    sectors,
    validate_model,
    virtual_dimension,
)
from .gamma import good_lifts
from .linalg import as_fraction, columns, farkas_certificate, cone_coefficients
from .modelfile import ModelDocument, ModelFileError, parse_model_text
from .qmaps import (
    check_stability,
    classify_infty_lg,
    degree_balance,
    enumerate_lg_configs,
    is_dm_stable,
    omega_log_degrees,
)
from .report import Report, digest, emit

COMMANDS = (
    "validate", "phases", "analyze", "lifts", "sectors", "vdim",
    "qmap-check", "qmap-enumerate", "fixed-loci",
)
STRUCTURAL_CHECKS = (
    "dimensions", "gauge_rank", "r_charge_gcd", "r_degree_positive", "superpotential_nonzero",
    "superpotential_gauge_invariant", "superpotential_r_degree", "compatibility",
)
BUNDLED_FIXTURES = Path(__file__).resolve().parent / "fixtures"
EXIT_OK, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2


class CommandError(ValueError):
    """Semantic problem with the request (reported with exit status 1)."""


def resolve_model_path(name: str) -> Path:
    """A path as given, else a file in $GLSM_LAB_FIXTURES or the bundled fixtures."""
    p = Path(name)
    if p.is_file():
        return p
    dirs = []
    if os.environ.get("GLSM_LAB_FIXTURES"):
        dirs.append(Path(os.environ["GLSM_LAB_FIXTURES"]))
    dirs.append(BUNDLED_FIXTURES)
    for d in dirs:
        for cand in (d / name, d / f"{name}.toml"):
            if cand.is_file():
                return cand
    raise ModelFileError(f"model file not found: {name}")


def bundled_fixtures() -> list[str]:
    return sorted(p.stem for p in BUNDLED_FIXTURES.glob("*.toml"))


# --------------------------------------------------------------------------
# option parsing helpers


def parse_rational_list(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(as_fraction(x) for x in text.replace(" ", "").split(",") if x != "")
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise CommandError(f"bad rational list {text!r}: {exc}") from exc


def parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError as exc:
        raise CommandError(f"bad integer list {text!r}") from exc


def _names(model: ModelInput, S) -> list[str]:
    return model.names(S)


def _apply_overrides(model: ModelInput, opts: dict) -> ModelInput:
    changes = {}
    if opts.get("theta_override") is not None:
        theta = parse_rational_list(opts["theta_override"])
        if len(theta) != model.m:
            raise CommandError(f"--theta-override needs {model.m} entries")
        changes["theta"] = theta
    if opts.get("epsilon") is not None:
        changes["epsilon"] = Epsilon.parse(opts["epsilon"])
    if opts.get("lift") is not None:
        changes["lift_r_level"] = parse_rational_list(opts["lift"])[0]
    return replace(model, **changes) if changes else model


def _echo(command: str, opts: dict) -> str:
    parts = [command]
    for key in sorted(opts):
        val = opts[key]
        if val is None or key in ("format", "model"):
            continue
        parts.append(f"--{key.replace('_', '-')} {val}")
    return " ".join(parts)


# --------------------------------------------------------------------------
# commands


def _cmd_validate(model, doc, opts, rep: Report):
    v = validate_model(model)
    rep.result = {"checks": [{"name": c.name, "status": c.status, "detail": c.detail} for c in v.checks]}
    rep.certificates = [{"check": c.name, **c.certificate} for c in v.checks if c.certificate]
    rep.warnings = [f"{c.name}: {c.detail}" for c in v.checks if c.status == "unknown"]
    rep.ok = v.ok
    if not v.ok:
        rep.result["failed_checks"] = [c.name for c in v.failures]


def _support_certificates(model: ModelInput, tau, minimal, unstable) -> list[dict]:
    cols = columns(model.gauge)
    certs = []
    for S in minimal:
        coeffs = cone_coefficients([cols[j] for j in sorted(S)], tau)
        certs.append({
            "claim": f"support {_names(model, S)} is semistable",
            "level": list(tau),
            "cone_coefficients": dict(zip(_names(model, S), coeffs)),
        })
    for S in unstable:
        y = farkas_certificate([cols[j] for j in sorted(S)], tau)
        certs.append({
            "claim": f"support {_names(model, S)} is unstable",
            "level": list(tau),
            "separating_functional": list(y),
            "check": "functional is >= 0 on every weight in the support and negative on the level",
        })
    return certs


def _phase_payload(model: ModelInput, tau) -> dict:
    minimal = git.semistable_supports(model.gauge, tau)
    unstable = git.unstable_subspaces(model.gauge, tau)
    reg = git.is_strongly_regular(model.gauge, tau)
    return {
        "level": list(tau),
        "theta": list(git.theta_of_level(tau)),
        "strongly_regular": reg.regular,
        "regularity": reg.reason,
        "minimal_semistable_supports": [_names(model, S) for S in minimal],
        "maximal_unstable_supports": [_names(model, S) for S in unstable],
        "unstable_locus": [locus_string(model, S) for S in unstable],
    }


def _cmd_phases(model, doc, opts, rep: Report):
    tau = model.tau
    chs = git.chambers(model.gauge, candidates=[tau])
    model_fam = git.semistable_supports(model.gauge, tau)
    out = []
    for i, ch in enumerate(chs):
        payload = _phase_payload(model, ch.representative)
        payload = {"index": i, "walls": [list(w) for w in ch.walls], **payload,
                   "contains_model_level": ch.minimal_semistable == model_fam}
        out.append(payload)
        for cert in _support_certificates(model, ch.representative, ch.minimal_semistable, ch.maximal_unstable):
            rep.certificates.append({"chamber": i, **cert})
    rep.result = {"chamber_count": len(chs), "chambers": out}
    if not any(c["contains_model_level"] for c in out):
        rep.warnings.append("the model's theta lies on a wall or outside every chamber")


def _lift_payload(model, gamma, rep: Report) -> dict:
    an = good_lifts(gamma, model.theta)
    lo, hi = an.good_interval if an.good_interval else (None, None)
    for cert in an.certificates:
        names = _names(model, cert["support"])
        rep.certificates.append({
            **cert,
            "support": names,
            "statement": f"support {names} is G-semistable but not Gamma-semistable for {cert['direction']}",
        })
    r = model.lift.r_level
    return {
        "theta": list(model.theta),
        "trivial_lift_good": an.is_good(0),
        "good_lift_exists": an.good_interval is not None,
        "good_r_level_min": lo if an.good_interval else None,
        "good_r_level_max": hi if an.good_interval else None,
        "unique_good_r_level": an.unique_good_level,
        "per_support_r_interval": [
            {"support": _names(model, S), "r_min": a, "r_max": b} for S, (a, b) in an.per_support
        ],
        "queried_lift": {"r_level": r, "good": an.is_good(r)},
    }


def _cmd_lifts(model, doc, opts, rep: Report):
    rep.result = _lift_payload(model, model.gamma(), rep)


def _sector_payload(model) -> list[dict]:
    return [
        {
            "label": s.label,
            "phases": list(s.gamma),
            "age": s.age,
            "degree_shift": s.degree_shift,
            "fixed_support": _names(model, s.fixed_support),
            "gauge_element": list(s.gauge_element),
        }
        for s in sectors(model)
    ]


def _cmd_sectors(model, doc, opts, rep: Report):
    secs = _sector_payload(model)
    rep.result = {"sector_count": len(secs), "q": model.q, "sectors": secs}


def _components_payload(model, rep: Report) -> dict:
    try:
        comps = critical_components(model)
    except StructureError as exc:
        rep.warnings.append(str(exc))
        return {"overall": "unknown", "components": []}
    verdict = nondegeneracy_check(model, comps)
    items = []
    for c, v in verdict.per_component:
        items.append({
            "kind": c.kind,
            "locus": locus_string(model, c.support, c.equations),
            "support": _names(model, c.support),
            "equations": list(c.equations),
            "survives_semistability": c.survives_semistability,
            "quotient_compact": v,
        })
        if c.certificate is not None and c.certificate.get("invariant_monomial") is not None:
            mono = c.certificate["invariant_monomial"]
            rep.certificates.append({
                "claim": f"component {locus_string(model, c.support, c.equations)} has a noncompact quotient",
                "invariant_monomial_exponents": dict(zip(model.variables, mono)),
            })
    if verdict.overall.value == "unknown":
        rep.warnings.append("compactness of the critical locus is not certified (unstructured W or no transversality)")
    return {"overall": verdict.overall, "components": items}


def _cmd_analyze(model, doc, opts, rep: Report):
    v = validate_model(model)
    gamma = model.gamma()
    result = {
        "checks": {c.name: c.status for c in v.checks},
        "n": model.n,
        "gauge_rank": model.m,
        "q": model.q,
        "central_charge": central_charge_of(model),
        "J": list(gamma.J),
        "J_order": gamma.d,
        "J_gauge_element": list(gamma.J_gauge),
        "phase": _phase_payload(model, model.tau),
    }
    if v["strongly_regular"].status == "pass":
        result["critical_locus"] = _components_payload(model, rep)
        result["sectors"] = _sector_payload(model)
        result["lifts"] = _lift_payload(model, gamma, rep)
    else:
        rep.warnings.append("theta is not strongly regular; phase-dependent analyses skipped")
    rep.warnings.extend(f"{c.name}: {c.detail}" for c in v.checks if c.status in ("fail", "unknown"))
    rep.ok = v.ok
    rep.result = result


def _cmd_vdim(model, doc, opts, rep: Report):
    ins_text = opts.get("insertions") or ""
    labels = [x.strip() for x in ins_text.split(",") if x.strip()]
    marks = opts.get("marks")
    marks = len(labels) if marks is None else marks
    genus = opts.get("genus") or 0
    beta_text = opts.get("beta") or "0"
    beta = 0 if beta_text.strip() == "0" else parse_rational_list(beta_text)
    try:
        beta = normalize_beta(model, beta)
        secs = [lookup_sector(model, x) for x in labels]
    except (KeyError, ValueError) as exc:
        raise CommandError(str(exc).strip('"')) from exc
    try:
        vd = virtual_dimension(model, genus, marks, beta, secs)
    except ValueError as exc:
        raise CommandError(str(exc)) from exc
    rep.result = {
        "genus": genus,
        "marks": marks,
        "beta": list(beta),
        "insertions": [{"label": s.label, "age": s.age} for s in secs],
        "central_charge": central_charge_of(model),
        "q": model.q,
        "virtual_dimension": vd,
    }


def _graph_doc(doc: ModelDocument):
    if doc.graph is None:
        raise CommandError("this command needs a [graph] section in the model file")
    return doc.graph


def _cmd_qmap_check(model, doc, opts, rep: Report):
    gspec = _graph_doc(doc)
    G = gspec.graph
    data = gspec.data()
    try:
        verdict = check_stability(G, data, model.epsilon)
    except ValueError as exc:
        raise CommandError(str(exc)) from exc
    result = {
        "epsilon": model.epsilon,
        "stable": verdict.stable,
        "total_genus": G.total_genus,
        "marks": G.n_marks,
        "dm_stable_graph": is_dm_stable(G),
        "global_reasons": list(verdict.global_reasons),
        "vertices": [
            {"vertex": d.vertex, "genus": d.genus, "special_points": d.special_points, "wlog": d.wlog,
             "base_degree": d.base_degree, "lift_degree": d.lift_degree, "ok": d.ok, "reasons": list(d.reasons)}
            for d in verdict.vertices
        ],
    }
    if verdict.stable and model.epsilon is Epsilon.INFINITY:
        result["stable_curve"] = classify_infty_lg(G, data)
    rep.result = result


def _cmd_qmap_enumerate(model, doc, opts, rep: Report):
    gspec = _graph_doc(doc)
    if gspec.b is None:
        raise CommandError("qmap-enumerate needs b in the [graph] section")
    max_d = opts.get("max_degree")
    max_d = 2 if max_d is None else max_d
    try:
        configs = enumerate_lg_configs(gspec.graph, gspec.b, model.epsilon, max_d)
    except ValueError as exc:
        raise CommandError(str(exc)) from exc
    rep.result = {
        "epsilon": model.epsilon,
        "b": gspec.b,
        "max_degree": max_d,
        "wlog": list(omega_log_degrees(gspec.graph)),
        "count": len(configs),
        "configurations": [
            {"base_degrees": list(c.base_degrees), "a_degrees": list(c.a_degrees),
             "lift_degrees": list(c.lift_degrees), "degree_total": degree_balance(gspec.graph, c)[0]}
            for c in configs
        ],
    }


def _cmd_fixed_loci(model, doc, opts, rep: Report):
    if opts.get("extra_action") is not None:
        action = parse_int_list(opts["extra_action"])
    elif model.extra_action is not None:
        action = model.extra_action
    else:
        raise CommandError("fixed-loci needs --extra-action or extra_action in the model file")
    try:
        loci = fixed_loci(model, action)
    except (StructureError, ValueError) as exc:
        raise CommandError(str(exc)) from exc
    rep.result = {
        "extra_action": dict(zip(model.variables, action)),
        "count": len(loci),
        "fixed_loci": [
            {"locus": locus_string(model, L.support, L.equations), "support": _names(model, L.support),
             "equations": list(L.equations), "component": L.component}
            for L in loci
        ],
    }


_DISPATCH = {
    "validate": _cmd_validate,
    "phases": _cmd_phases,
    "analyze": _cmd_analyze,
    "lifts": _cmd_lifts,
    "sectors": _cmd_sectors,
    "vdim": _cmd_vdim,
    "qmap-check": _cmd_qmap_check,
    "qmap-enumerate": _cmd_qmap_enumerate,
    "fixed-loci": _cmd_fixed_loci,
}


def run(command: str, model_path, **opts) -> Report:
    """Run one command on a model file and return its report.

    Raises ModelFileError / CommandError for bad input.
    """
    if command not in _DISPATCH:
        raise CommandError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
    path = resolve_model_path(str(model_path))
    raw = path.read_bytes()
    doc = parse_model_text(raw.decode("utf-8"))
    model = _apply_overrides(doc.model, opts)
    rep = Report(_echo(command, opts), digest(raw), model.name or path.stem, {})
    if command != "validate":
        v = validate_model(model)
        bad = [c for c in v.checks if c.name in STRUCTURAL_CHECKS and c.status == "fail"]
        if bad:
            rep.ok = False
            rep.result = {"failed_checks": [c.name for c in bad]}
            rep.warnings = [f"{c.name}: {c.detail}" for c in bad]
            return rep
    try:
        _DISPATCH[command](model, doc, opts, rep)
    except StructureError as exc:
        raise CommandError(str(exc)) from exc
    return rep


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="glsm-lab", description="Exact combinatorics of abelian GLSMs.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("model", help="model TOML file, or a fixture name")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--theta-override", help="comma separated rationals replacing theta")
    p.add_argument("--epsilon", choices=("0+", "infinity"))
    p.add_argument("--lift", help="r_level of the lift of theta (rational)")
    p.add_argument("--max-degree", type=int, help="base-point degree bound for qmap-enumerate")
    p.add_argument("--genus", type=int)
    p.add_argument("--marks", type=int)
    p.add_argument("--beta", help="'0' or comma separated rationals (gauge characters, then R)")
    p.add_argument("--insertions", help="comma separated sector labels, e.g. J,J,J")
    p.add_argument("--extra-action", help="comma separated weights of the extra C* action")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    opts = {k: v for k, v in vars(args).items() if k not in ("command", "model", "format")}
    try:
        rep = run(args.command, args.model, **opts)
    except (ModelFileError, CommandError) as exc:
        print(f"glsm-lab: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        print(f"glsm-lab: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    sys.stdout.buffer.write(emit(rep, args.format))
    sys.stdout.flush()
    if not rep.ok:
        failed = rep.result.get("failed_checks", [])
        print(f"glsm-lab: model invalid: failing check(s): {', '.join(failed)}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
