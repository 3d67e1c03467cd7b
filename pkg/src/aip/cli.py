"""``aip run <config.json>``: build the coefficient matrix and run analyses in batch.

Exit codes: 0 when every requested check passes, 1 when some check
fails (the failures are listed in ``report.json``), 2 on invalid input.
"""
import argparse
import os
import sys

import numpy as np

from . import __version__, circle
from .boundary import angular_derivative, boundary_residual_details, boundary_residual_detect
from .colligation import build_coefficient_matrix, eval_S, restriction_residual
from .errors import AipError, DimensionMismatch, NotContractive, NotHermitian, NotPsd
from .io import ConfigError, atomic_write, dumps, grid_csv, parse_complex, parse_cmatrix
from .io import parse_problem, read_json, to_plain
from .parametrization import SchurParameter, lft_solution, solution_fn, verify_solution
from .problems import check_fundamental_identity
from .suites import mobius_parameter, random_constant_parameter

ANALYSES = ("solve", "verify", "boundary", "residual", "properties", "sarason")

DEFAULT_TOLERANCES = {
    "interp": 1e-7,
    "contractivity": 1e-9,
    "identity": 1e-8,
    "norm_inequality": 5e-3,
    "hardy": 1e-6,
    "defect_psd": 1e-6,
    "defect_zero": 2e-3,
    "norm_equality": 5e-3,
    "angular_consistency": 1e-2,
    "angular_bound": 1e-3,
    "property_2prime": 1e-6,
    "rank": 1e-6,
    "naak": 1e-7,
    "s2_mass": 1e-6,
    "theta_division": 1e-6,
    "outer": 1e-3,
    "criterion": 1e-3,
    "denseness": 2e-3,
}

DEFAULT_GRID = {"disk_points": 64, "circle_points": 64, "radius": 0.9}
DEFECT_POINTS = (0.0, 0.3 + 0.2j, -0.4j, 0.5, -0.2 - 0.3j)
CONFIG_KEYS = {"problem", "parameters", "analyses", "grid", "tolerances", "output", "quad_n", "seed"}
INVALID_INPUT = (ConfigError, NotPsd, NotContractive, NotHermitian, DimensionMismatch, ValueError, TypeError)


class Checks:
    def __init__(self, tols):
        self.tols = tols
        self.items = []

    def le(self, name, value, tol_key, scale=1.0):
        tol = self.tols[tol_key] * scale
        self.items.append({"name": name, "value": float(value), "tol": tol,
                           "passed": bool(np.isfinite(value) and value <= tol)})

    def flag(self, name, ok, detail=None):
        item = {"name": name, "passed": bool(ok)}
        if detail is not None:
            item["detail"] = detail
        self.items.append(item)

    def failures(self):
        return [c["name"] for c in self.items if not c["passed"]]


# -- configuration -----------------------------------------------------------

def load_config(path, quad=None, seed=None, checks=None, out=None):
    cfg = read_json(path)
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    extra = set(cfg) - CONFIG_KEYS
    if extra:
        raise ConfigError(f"unknown config keys: {sorted(extra)}")
    if "problem" not in cfg:
        raise ConfigError("config needs a 'problem' entry")
    prob = cfg["problem"]
    if isinstance(prob, str):
        prob_path = prob if os.path.isabs(prob) else os.path.join(os.path.dirname(os.path.abspath(path)), prob)
        prob = read_json(prob_path)
    analyses = list(checks) if checks else cfg.get("analyses", ["solve", "verify"])
    bad = [a for a in analyses if a not in ANALYSES]
    if bad or not isinstance(analyses, list):
        raise ConfigError(f"unknown analyses {bad}; choose from {list(ANALYSES)}")
    grid = dict(DEFAULT_GRID)
    grid.update(cfg.get("grid", {}))
    if set(grid) != set(DEFAULT_GRID):
        raise ConfigError(f"grid keys must be {sorted(DEFAULT_GRID)}")
    for key in ("disk_points", "circle_points"):
        if not isinstance(grid[key], int) or grid[key] < 16:
            raise ConfigError(f"grid.{key} must be an integer >= 16")
    if not 0 < float(grid["radius"]) < 1:
        raise ConfigError("grid.radius must lie in (0, 1)")
    tols = dict(DEFAULT_TOLERANCES)
    for k, v in cfg.get("tolerances", {}).items():
        if k not in tols or not isinstance(v, (int, float)) or v < 0:
            raise ConfigError(f"bad tolerance override {k!r}")
        tols[k] = float(v)
    quad_n = int(quad if quad is not None else cfg.get("quad_n", 4096))
    if quad_n < 256:
        raise ConfigError("quad_n must be at least 256")
    params = cfg.get("parameters", [{"type": "constant", "value": 0}])
    if not isinstance(params, list) or not params:
        raise ConfigError("parameters must be a non-empty list")
    return {
        "problem": prob,
        "parameters": params,
        "analyses": [a for a in ANALYSES if a in analyses],
        "grid": grid,
        "tolerances": tols,
        "quad_n": quad_n,
        "seed": int(seed if seed is not None else cfg.get("seed", 0)),
        "output": out or cfg.get("output") or "aip_out",
    }


def build_parameters(specs, cm, rng):
    n1, n2 = cm.dimN1, cm.dimN2
    out = []
    for spec in specs:
        if not isinstance(spec, dict) or "type" not in spec:
            raise ConfigError(f"parameter spec needs a 'type': {spec!r}")
        kind = spec["type"]
        if kind == "constant":
            v = spec.get("value", 0)
            if isinstance(v, list) and v and isinstance(v[0], list) and isinstance(v[0][0], list):
                val = parse_cmatrix(v)
            else:
                c = parse_complex(v)
                if c != 0 and (n1, n2) != (1, 1):
                    raise ConfigError("scalar constant parameters need one-dimensional N1 and N2")
                val = np.full((n2, n1), c)
            if val.shape != (n2, n1):
                raise ConfigError(f"parameter must be {n2}x{n1}")
            out.append(SchurParameter(value=val))
        elif kind == "random":
            for _ in range(int(spec.get("count", 1))):
                out.append(random_constant_parameter(rng, n1, n2, float(spec.get("radius", 0.95))))
        elif kind == "mobius":
            if (n1, n2) != (1, 1):
                raise ConfigError("mobius parameters need one-dimensional N1 and N2")
            out.append(mobius_parameter(parse_complex(spec["a"]), parse_complex(spec.get("phase", 1))))
        elif kind == "boundary_critical":
            if cm.problem.kind != "boundary" or (n1, n2) != (1, 1):
                raise ConfigError("boundary_critical needs a boundary problem with one-dimensional N")
            s_t0 = cm.blocks(eval_S(cm, cm.problem.data.t0))[3][0, 0]
            out.append(SchurParameter.constant(np.conj(s_t0) / abs(s_t0)))
        else:
            raise ConfigError(f"unknown parameter type {kind!r}")
    return out


# -- analyses ----------------------------------------------------------------

def _grid_points(grid):
    return np.concatenate([circle.disk_grid(grid["disk_points"], grid["radius"]),
                           circle.circle_grid(grid["circle_points"])])


def _solve(cm, params, grid, outdir, files):
    z = _grid_points(grid)
    S = eval_S(cm, z)
    atomic_write(os.path.join(outdir, "S_grid.csv"), grid_csv(z, list(cm.blocks(S)), ["s0", "s1", "s2", "s"]))
    files.append("S_grid.csv")
    ws, idx, zs, info = [], [], [], []
    for k, om in enumerate(params):
        w = lft_solution(cm, om, z)
        ws.append(w)
        idx += [k] * z.size
        zs.append(z)
        info.append({"w0": lft_solution(cm, om, 0.0)})
    atomic_write(os.path.join(outdir, "w_grid.csv"),
                 grid_csv(np.concatenate(zs), [np.concatenate(ws)], ["w"], lead=("param", idx)))
    files.append("w_grid.csv")
    return info


def _verify(p, cm, om, quad_n, checks, tag):
    rep = verify_solution(p, cm, om, quad_n=quad_n)
    checks.le(f"{tag}.interp_residual", rep.interp_residual, "interp")
    checks.le(f"{tag}.contractivity_margin", rep.contractivity_margin, "contractivity")
    checks.le(f"{tag}.identity_residual", rep.identity_residual, "identity")
    checks.le(f"{tag}.hardy_membership_residual", rep.hardy_membership_residual, "hardy")
    excess = max([n - f for n, f in zip(rep.norm_squares, rep.form_values)] + [0.0])
    scale = max(rep.form_values + [1.0])
    checks.le(f"{tag}.norm_inequality_excess", excess, "norm_inequality", scale)
    return rep


def _boundary(p, cm, om, quad_n, checks, tag):
    d = p.data
    fn = solution_fn(cm, om)
    w = lambda z: fn(z)[:, 0, 0]  # noqa: E731
    est = angular_derivative(w, d.t0, d.w0, quad_n=max(quad_n, 2048))
    out = {"D_liminf": est.D_liminf, "D_integral": est.D_integral, "w0_limit": est.w0_limit,
           "converged": est.converged}
    checks.le(f"{tag}.angular_derivative_excess", max(est.D_liminf - d.Dbound, 0.0), "angular_bound")
    if np.isfinite(est.D_integral):
        checks.le(f"{tag}.angular_estimator_gap", abs(est.D_liminf - est.D_integral), "angular_consistency")
    if cm.dimN1 == 1 and cm.dimN2 == 1:
        det = boundary_residual_details(cm, om, d.t0)
        if abs(abs(det["s_t0"]) - 1) <= 1e-6:
            out["residual_detect"] = boundary_residual_detect(cm, om, d.t0)
            out["residual_details"] = det
    return out


def _residual(cm, om, quad_n, rep, checks, tag):
    from .residual import eval_defect
    z = np.array(DEFECT_POINTS)
    if cm.dimN1 + cm.dimN2 == 0:
        return {"applicable": False}
    defects = eval_defect(cm, om, z, quad_n)
    norms = [float(np.linalg.norm(d, 2)) for d in defects]
    min_eig = float(min(np.linalg.eigvalsh(d).min() for d in defects))
    checks.le(f"{tag}.defect_negativity", max(-min_eig, 0.0), "defect_psd")
    out = {"points": z, "defect_norms": norms, "defect_min_eigenvalue": min_eig}
    if rep is not None:
        trivial = max(norms) <= checks.tols["defect_zero"]
        equal = rep.relative_norm_gap <= checks.tols["norm_equality"]
        out["residual_trivial"] = trivial
        checks.flag(f"{tag}.equality_bridge", trivial == equal,
                    {"defect_trivial": trivial, "norm_equality": equal})
    return out


def _properties(cm, params, quad_n, checks):
    from .residual import (check_property_1prime, check_property_2doubleprime,
                           check_property_2prime, naak_defect, property_2doubleprime_ranks)
    t = circle.circle_grid(512)
    out = {"property_2prime": check_property_2prime(cm, t)}
    checks.le("properties.property_2prime", out["property_2prime"], "property_2prime")
    ok = check_property_2doubleprime(cm, t, checks.tols["rank"])
    lhs, rhs = property_2doubleprime_ranks(cm, t, checks.tols["rank"])
    out["property_2doubleprime"] = {"holds": ok, "lhs_ranks": sorted(set(lhs.tolist())),
                                    "rhs_ranks": sorted(set(rhs.tolist()))}
    checks.flag("properties.property_2doubleprime", ok)
    out["inner_defect"] = naak_defect(cm, t)
    if cm.dimN1 == cm.dimE1:
        checks.le("properties.inner_defect", out["inner_defect"], "naak")
    if cm.dimN1 == 1 and cm.dimN2 == 1:
        out["property_1prime"] = [list(check_property_1prime(cm, om, quad_n)) for om in params]
    return out


def _sarason(p, cm, quad_n, checks):
    from .circle import wrong_sign_mass
    from .sarason import (check_criterion_66, check_outer, denseness_projection_residual,
                          eval_FS, factor_s2_through_theta, normalize_sarason, star_outer_gap)
    t = circle.circle_grid(quad_n)
    zeros = p.data.zeros
    mass = max(wrong_sign_mass(eval_FS(cm, p, e, t).FS_values[:, -cm.dimN2:], "minus")
               for e in np.eye(p.dimX))
    st, theta_res = factor_s2_through_theta(cm, zeros, t)
    s1 = cm.blocks(eval_S(cm, t))[1][:, 0, 0]
    s1_0 = cm.blocks(eval_S(cm, 0.0))[1][0, 0]
    _, norm_info = normalize_sarason(cm, zeros, quad_n)
    out = {
        "s2_adjoint_x_mass": mass,
        "theta_division_residual": theta_res,
        "s1_outer_gap": check_outer(s1, s1_0),
        "stilde2_star_outer_gap": star_outer_gap(st),
        "criterion_infimum": check_criterion_66(cm, p, quad_n),
        "denseness_residual": denseness_projection_residual(cm, p, 3, quad_n),
        "normalization": norm_info,
    }
    checks.le("sarason.s2_adjoint_x_mass", out["s2_adjoint_x_mass"], "s2_mass")
    checks.le("sarason.theta_division_residual", theta_res, "theta_division")
    checks.le("sarason.s1_outer_gap", out["s1_outer_gap"], "outer")
    checks.le("sarason.stilde2_star_outer_gap", out["stilde2_star_outer_gap"], "outer")
    checks.le("sarason.criterion_infimum", out["criterion_infimum"], "criterion")
    checks.le("sarason.denseness_residual", out["denseness_residual"], "denseness")
    return out


def _problem_summary(p):
    s = {"type": p.kind, "dimX": p.dimX, "dimE1": p.dimE1, "dimE2": p.dimE2,
         "fundamental_identity_residual": check_fundamental_identity(p)}
    d = p.data
    if p.kind == "np":
        s.update(nodes=d.nodes, values=d.values)
    elif p.kind == "boundary":
        s.update(t0=d.t0, w0=d.w0, D=d.Dbound)
    elif p.kind == "sarason":
        s.update(zeros=d.blaschke_zeros, Wstar=d.Wstar)
    return s


def execute(cfg):
    """Run a parsed configuration.  Returns ``(report, exit_code)``."""
    outdir = cfg["output"]
    p = parse_problem(cfg["problem"])
    cm = build_coefficient_matrix(p)
    rng = np.random.default_rng(cfg["seed"])
    params = build_parameters(cfg["parameters"], cm, rng)
    checks = Checks(cfg["tolerances"])
    analyses = cfg["analyses"]
    quad_n = cfg["quad_n"]
    checks.le("colligation.restriction_residual", restriction_residual(cm), "identity")
    report = {
        "format": "aip-report/1",
        "version": __version__,
        "config": {k: cfg[k] for k in ("analyses", "grid", "quad_n", "seed")},
        "problem": _problem_summary(p),
        "dims": {"H0": cm.dimH0, "N1": cm.dimN1, "N2": cm.dimN2},
        "normalization": cm.normalization,
        "solution_unique": cm.dimN1 * cm.dimN2 == 0,
    }
    files = []
    runs = [{"index": k, "parameter": om.describe()} for k, om in enumerate(params)]
    try:
        if "solve" in analyses:
            os.makedirs(outdir, exist_ok=True)
            for r, info in zip(runs, _solve(cm, params, cfg["grid"], outdir, files)):
                r.update(info)
        for k, om in enumerate(params):
            tag = f"omega[{k}]"
            rep = None
            if "verify" in analyses or "residual" in analyses:
                rep = _verify(p, cm, om, quad_n, checks, tag)
                runs[k]["solution"] = rep.as_dict()
            if "boundary" in analyses and p.kind == "boundary":
                runs[k]["boundary"] = _boundary(p, cm, om, quad_n, checks, tag)
            if "residual" in analyses:
                runs[k]["residual"] = _residual(cm, om, quad_n, rep, checks, tag)
        if "properties" in analyses:
            report["properties"] = _properties(cm, params, quad_n, checks)
        if "sarason" in analyses:
            if p.kind != "sarason":
                raise ConfigError("the sarason analysis needs a sarason problem")
            report["sarason"] = _sarason(p, cm, quad_n, checks)
    except AipError as exc:
        checks.flag("analysis_error", False, f"{type(exc).__name__}: {exc}")
    report["parameters"] = runs
    report["checks"] = checks.items
    report["failures"] = checks.failures()
    report["status"] = "pass" if not report["failures"] else "fail"
    report["files"] = files
    return report, (0 if not report["failures"] else 1)


def run(config_path, out=None, quad=None, seed=None, checks=None):
    """Entry point behind ``aip run``; returns the process exit code."""
    outdir = out
    try:
        cfg = load_config(config_path, quad, seed, checks, out)
        outdir = cfg["output"]
        report, code = execute(cfg)
    except INVALID_INPUT as exc:
        err = {"format": "aip-report/1", "version": __version__, "status": "invalid_input",
               "error": {"type": type(exc).__name__, "message": str(exc)}}
        print(f"aip: invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        if outdir:
            atomic_write(os.path.join(outdir, "report.json"), dumps(to_plain(err)) + "\n")
        return 2
    atomic_write(os.path.join(outdir, "report.json"), dumps(to_plain(report)) + "\n")
    for name in report["failures"]:
        print(f"aip: check failed: {name}", file=sys.stderr)
    return code


def main(argv=None):
    parser = argparse.ArgumentParser(prog="aip", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a configuration file")
    r.add_argument("config")
    r.add_argument("--out", help="output directory (overrides the config)")
    r.add_argument("--quad", type=int, help="circle quadrature nodes")
    r.add_argument("--seed", type=int, help="seed for random parameters")
    r.add_argument("--check", nargs="+", choices=ANALYSES, help="analyses to run instead of the config's")
    args = parser.parse_args(argv)
    return run(args.config, args.out, args.quad, args.seed, args.check)


if __name__ == "__main__":
    sys.exit(main())
