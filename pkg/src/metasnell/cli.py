"""Batch front-end: trace, audit, weakcheck, admit, and design workflows.

Input is a TOML config plus dotted-path overrides; output is a report.json
and plot-ready CSV tables in the chosen directory.  All floats are written
with 17 significant digits so identical runs produce byte-identical files.
Exit status: 0 on success (audit and admit are report-only), 2 when a checked
tolerance fails, 1 on usage or config errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

try:
    import tomllib as _toml
except ModuleNotFoundError:
    import tomli as _toml

from .admissibility import admissibility_report
from .errors import ConfigError, MetasnellError
from .fields import Medium, ModulatedWave
from .geometry import make_surface, surface_from_csv
from .gridio import write_grid_csv
from .phase import focus_gradient_field, integrate_phase, make_phase
from .snell import refract, trace_bundle
from .weakform import (QuadSpec, TestFunction, PiecewiseField, boundary_audit,
                       decomposition_suite, dist_divergence, surface_integral,
                       tangential_match)


def _fmt(x) -> str:
    return format(float(x), ".17g")


def format_json(obj, indent: int = 0) -> str:
    """Deterministic JSON: insertion order kept, floats at 17 digits."""
    pad = "  " * (indent + 1)
    end = "\n" + "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (f"{json.dumps(str(k))}: {format_json(v, indent + 1)}" for k, v in obj.items())
        return "{\n" + ",\n".join(pad + it for it in items) + end + "}"
    if isinstance(obj, np.ndarray):
        return format_json(obj.tolist(), indent)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = (format_json(v, indent + 1) for v in obj)
        return "[\n" + ",\n".join(pad + it for it in items) + end + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return format_json({"re": float(obj.real), "im": float(obj.imag)}, indent)
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _write_report(outdir: Path, report: dict) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "report.json").write_text(format_json(report) + "\n")


def _write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for v in row:
            if v is None:
                cells.append("")
            elif isinstance(v, str):
                cells.append(v.replace(",", ";"))
            else:
                cells.append(_fmt(v))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")


def _apply_override(cfg: dict, dotted: str, raw: str) -> None:
    try:
        value = _toml.loads(f"v = {raw}")["v"]
    except _toml.TOMLDecodeError:
        value = raw
    parts = dotted.split(".")
    node = cfg
    for p in parts[:-1]:
        node = node.setdefault(p, {})
        if not isinstance(node, dict):
            raise ConfigError(f"override path {dotted!r} crosses a non-table key")
    node[parts[-1]] = value


def _load_config(path, overrides) -> dict:
    cfg = {}
    if path is not None:
        try:
            cfg = _toml.loads(Path(path).read_text())
        except FileNotFoundError as e:
            raise ConfigError(f"config file not found: {path}") from e
        except _toml.TOMLDecodeError as e:
            raise ConfigError(f"config parse error: {e}") from e
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not KEY.PATH=VALUE")
        key, _, raw = item.partition("=")
        _apply_override(cfg, key.strip(), raw.strip())
    return cfg


def _build_surface(cfg: dict):
    sc = dict(cfg.get("surface", {}))
    if "csv" in sc:
        return surface_from_csv(sc["csv"])
    domain = sc.pop("domain", [[-1.0, 1.0], [-1.0, 1.0]])
    name = sc.pop("catalog", "flat")
    return make_surface(name, sc, domain)


def _build_media(cfg: dict):
    mc = cfg.get("media", {})

    def one(side, default_eps):
        d = mc.get(side, {})
        return Medium(eps=float(d.get("eps", default_eps)),
                      mu=float(d.get("mu", 1.0)), c=float(d.get("c", 1.0)))

    m1, m2 = one("below", 1.0), one("above", 2.25)
    if m1.c != m2.c:
        raise ConfigError("media.below.c and media.above.c must agree")
    return m1, m2


def _build_phase(cfg: dict):
    pc = dict(cfg.get("phase", {}))
    name = pc.pop("catalog", "zero")
    return make_phase(name, pc)


def _wave_params(cfg: dict, table: str = "wave"):
    wc = cfg.get(table, {})
    A = np.asarray(wc.get("amplitude_re", [1.0, 0.0, 0.0]), dtype=float) \
        + 1j * np.asarray(wc.get("amplitude_im", [0.0, 0.0, 0.0]), dtype=float)
    k = np.asarray(wc.get("direction", [0.0, 0.0, 1.0]), dtype=float)
    norm = np.linalg.norm(k)
    if norm == 0:
        raise ConfigError(f"{table}.direction must be nonzero")
    omega = float(wc.get("omega", 2 * np.pi))
    return A, k / norm, omega


def _result_dict(res, verbose: bool) -> dict:
    d = {"k_out": res.k_out, "lambda": res.lam, "branch": res.branch}
    if verbose:
        d["lambda_roots"] = list(res.lam_roots)
    return d


def _cmd_trace(cfg, outdir, args):
    surface = _build_surface(cfg)
    m1, m2 = _build_media(cfg)
    phi = _build_phase(cfg)
    _, k_default, omega = _wave_params(cfg)
    tc = cfg.get("trace", {})
    if "origins" in tc:
        origins = [np.asarray(o, dtype=float) for o in tc["origins"]]
        dirs = [np.asarray(d, dtype=float) for d in tc.get("directions", [k_default] * len(origins))]
    else:
        n = int(tc.get("rays", 11))
        half = np.deg2rad(float(tc.get("half_angle_deg", 30.0)))
        origin = np.asarray(tc.get("origin", [0.0, 0.0, -0.5]), dtype=float)
        angles = np.linspace(-half, half, n)
        origins = [origin] * n
        dirs = [np.array([np.sin(a), 0.0, np.cos(a)]) for a in angles]
    dirs = [d / np.linalg.norm(d) for d in dirs]
    traced = trace_bundle(list(zip(origins, dirs)), surface, phi, m1, m2, omega)

    rows, ray_reports = [], []
    for i, r in enumerate(traced):
        tr, rf = r.transmitted, r.reflected
        rows.append([i, r.status, *r.origin, *r.k_i, r.t_hit,
                     *(r.hit_point if r.hit_point is not None else [None] * 3),
                     *(tr.k_out if tr else [None] * 3), tr.lam if tr else None,
                     *(rf.k_out if rf else [None] * 3), rf.lam if rf else None,
                     r.error])
        rep = {"origin": r.origin, "k_i": r.k_i, "status": r.status}
        if r.hit_point is not None:
            rep["hit_point"] = r.hit_point
            rep["t_hit"] = r.t_hit
        if tr:
            rep["transmitted"] = _result_dict(tr, args.verbose)
        if rf:
            rep["reflected"] = _result_dict(rf, args.verbose)
        if r.error:
            rep["error"] = r.error
        ray_reports.append(rep)
    header = ["ray", "status", "origin1", "origin2", "origin3", "k_i1", "k_i2", "k_i3",
              "t_hit", "hit1", "hit2", "hit3", "k_r1", "k_r2", "k_r3", "lambda",
              "k_b1", "k_b2", "k_b3", "lambda_prime", "error"]
    _write_csv(outdir / "rays.csv", header, rows)
    n_hit = sum(1 for r in traced if r.status == "hit")
    report = {"subcommand": "trace", "rays": ray_reports,
              "summary": {"count": len(traced), "hit": n_hit,
                          "escaped": sum(1 for r in traced if r.status == "escaped"),
                          "errors": sum(1 for r in traced if r.error)}}
    return 0, report


def _cmd_audit(cfg, outdir, args):
    surface = _build_surface(cfg)
    m1, m2 = _build_media(cfg)
    phi = _build_phase(cfg)
    A_i, k_i, omega = _wave_params(cfg)
    ac = cfg.get("audit", {})
    t = float(ac.get("time", 0.0))
    match_p12 = np.asarray(ac.get("match_point", [0.0, 0.0]), dtype=float)
    res = refract(k_i, match_p12, surface, phi, m1, m2, omega)
    P = surface.point(match_p12)
    if "transmitted" in cfg:
        A_r, k_r, _ = _wave_params(cfg, "transmitted")
    else:
        k_r = res.k_out
        A_r = tangential_match(A_i, k_i, k_r, m1.v, m2.v, omega, phi, P, surface)
    scale = complex(ac.get("scale_re", 1.0), ac.get("scale_im", 0.0))
    Ei = ModulatedWave(A=A_i, k_dir=k_i, omega=omega, medium=m1)
    Er = ModulatedWave(A=scale * A_r, k_dir=k_r, omega=omega, medium=m2, phi=phi)
    samples = ac.get("samples", [list(match_p12)])
    if isinstance(samples, int):
        rep = boundary_audit(Ei, Er, None, m1, m2, surface, t, samples)
    else:
        rep = boundary_audit(Ei, Er, None, m1, m2, surface, t,
                             np.asarray(samples, dtype=float))
    rows = []
    for j in range(rep.points.shape[0]):
        row = list(rep.points[j])
        for val in (*rep.e_cross_n[j], rep.b_dot_n[j], rep.mu_density[j], *rep.nu_density[j]):
            row += [val.real, val.imag]
        rows.append(row)
    header = ["x1", "x2", "x3"]
    for name in ["e_cross_n_1", "e_cross_n_2", "e_cross_n_3", "b_dot_n", "mu_density",
                 "nu_density_1", "nu_density_2", "nu_density_3"]:
        header += [name + "_re", name + "_im"]
    _write_csv(outdir / "jumps.csv", header, rows)
    report = {"subcommand": "audit",
              "match_point": P, "k_r": k_r, "lambda": res.lam,
              "sup": {"e_cross_n": rep.sup_e_cross_n, "b_dot_n": rep.sup_b_dot_n,
                      "mu_density": rep.sup_mu_density, "nu_density": rep.sup_nu_density},
              "samples": rep.points.shape[0]}
    return 0, report


def _cmd_weakcheck(cfg, outdir, args):
    wc = cfg.get("weakcheck", {})
    tol = args.tol if args.tol is not None else float(wc.get("tol", 1e-5))
    cases = int(wc.get("cases", 50))
    quad = QuadSpec(base_cells=int(wc.get("base_cells", 12)),
                    points=int(wc.get("points", 3)),
                    tol=float(wc.get("quad_tol", 5e-5)),
                    max_refinements=int(wc.get("max_refinements", 1)))
    checks = []

    surface = make_surface("flat", {}, ((-1.0, 1.0), (-1.0, 1.0)))
    tf = TestFunction(center=(0.0, 0.0, 0.0), radius=0.6)
    zero = lambda X: np.zeros(X.shape, dtype=complex)
    ez = lambda X: np.broadcast_to(np.array([0, 0, 1.0 + 0j]), X.shape).copy()
    G = PiecewiseField(g_minus=zero, g_plus=ez, surface=surface,
                       div_minus=lambda X: np.zeros(X.shape[:-1], complex),
                       div_plus=lambda X: np.zeros(X.shape[:-1], complex),
                       curl_minus=zero, curl_plus=zero)
    lhs = dist_divergence(G, tf, QuadSpec(base_cells=int(wc.get("benchmark_cells", 32))))
    oracle = surface_integral(tf.value, surface, ((-0.6, 0.6), (-0.6, 0.6)))
    bench_gap = abs(lhs - complex(oracle))
    checks.append({"name": "piecewise-constant benchmark", "gap": bench_gap,
                   "tol": 1e-6, "passed": bench_gap < 1e-6})

    records = decomposition_suite(n_cases=cases, seed=args.seed, quad=quad)
    worst = max(max(r["div_gap"], r["curl_gap"]) for r in records)
    checks.append({"name": f"decomposition suite ({cases} cases)", "gap": worst,
                   "tol": tol, "passed": worst < tol})

    print(f"{'check':<38} {'gap':>12} {'tol':>9} verdict")
    for c in checks:
        print(f"{c['name']:<38} {c['gap']:>12.3e} {c['tol']:>9.0e} "
              f"{'pass' if c['passed'] else 'FAIL'}")
    if args.verbose:
        for r in records:
            print(f"  case {r['case']:2d}: div {r['div_gap']:.3e} "
                  f"curl {r['curl_gap']:.3e} at {r['cells']} cells")
    ok = all(c["passed"] for c in checks)
    report = {"subcommand": "weakcheck", "checks": checks, "cases": records,
              "passed": ok}
    return (0 if ok else 2), report


def _cmd_admit(cfg, outdir, args):
    m1, m2 = _build_media(cfg)
    phi = _build_phase(cfg)
    A, k, omega = _wave_params(cfg)
    ac = cfg.get("admit", {})
    if "samples" in ac:
        samples = np.asarray(ac["samples"], dtype=float)
    else:
        start = np.asarray(ac.get("line_start", [0.05, 0.05, 0.2]), dtype=float)
        stop = np.asarray(ac.get("line_stop", [0.25, 0.25, 0.8]), dtype=float)
        count = int(ac.get("count", 20))
        samples = start + np.linspace(0, 1, count)[:, None] * (stop - start)
    wave = ModulatedWave(A=A, k_dir=k, omega=omega, medium=m2, phi=phi)
    rep = admissibility_report(wave, samples, t=float(ac.get("time", 0.0)),
                               h=float(ac.get("h", 1e-3)))
    report = {"subcommand": "admit",
              "orthogonality_sup": rep.orthogonality_sup,
              "div_h_sup": rep.div_h_sup,
              "residual_sup": {"div_e": rep.residual_sup.div_e,
                               "div_h": rep.residual_sup.div_h,
                               "curl_e": rep.residual_sup.curl_e,
                               "curl_h": rep.residual_sup.curl_h},
              "multiplier": [{"x": rep.points[i], "m": complex(rep.multiplier_samples[i])}
                             for i in range(rep.points.shape[0])],
              "ohmic": {"compatible": rep.ohmic.compatible,
                        "max_laplacian": rep.ohmic.max_laplacian,
                        "max_modulus_dev": rep.ohmic.max_modulus_dev,
                        "linear_fit_residual": rep.ohmic.linear_fit_residual}}
    print(f"orthogonality sup {rep.orthogonality_sup:.3e}; "
          f"residuals {tuple(round(v, 10) for v in rep.residual_sup)}; "
          f"ohmic compatible: {rep.ohmic.compatible}")
    return 0, report


def _cmd_design(cfg, outdir, args):
    surface = _build_surface(cfg)
    m1, m2 = _build_media(cfg)
    _, k_i, omega = _wave_params(cfg)
    dc = cfg.get("design", {})
    focus = np.asarray(dc.get("focus", [0.0, 0.0, 1.0]), dtype=float)
    grid = int(dc.get("grid", 64))
    # the gate separates integrable targets (discretization-level residual)
    # from rotational ones (O(1)); 1e-4 covers wide apertures at 64x64
    tol = args.tol if args.tol is not None else float(dc.get("tol", 1e-4))
    lambda0 = 2 * np.pi * m1.c / omega
    g = focus_gradient_field(focus, k_i, (m1, m2), surface)
    phase, curl_residual = integrate_phase(g, surface, grid=grid, lambda0=lambda0)
    write_grid_csv(outdir / "phase.csv", phase.x1_nodes, phase.x2_nodes, phase.values,
                   value_name="phi")

    # spot-check the round trip on an interior subgrid
    worst = 0.0
    idx = np.linspace(2, grid - 3, min(5, grid - 4)).astype(int)
    for i in idx:
        for j in idx:
            p12 = np.array([phase.x1_nodes[i], phase.x2_nodes[j]])
            got = refract(k_i, p12, surface, phase, m1, m2, omega).k_out
            P = surface.point(p12)
            target = focus - P
            target = target / np.linalg.norm(target)
            worst = max(worst, float(np.linalg.norm(got - target)))
    ok = curl_residual < tol
    report = {"subcommand": "design", "focus": focus, "grid": grid,
              "curl_residual": curl_residual, "curl_tol": tol,
              "roundtrip_max_error": worst, "passed": ok}
    print(f"designed phase on {grid}x{grid} grid: curl residual {curl_residual:.3e} "
          f"(tol {tol:.0e}), round-trip error {worst:.3e}")
    return (0 if ok else 2), report


_COMMANDS = {"trace": _cmd_trace, "audit": _cmd_audit, "weakcheck": _cmd_weakcheck,
             "admit": _cmd_admit, "design": _cmd_design}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="metasnell",
                description="Refraction with phase discontinuities: trace rays, "
                            "audit interface jumps, verify weak forms, check "
                            "admissibility, design phases.")
    p.add_argument("subcommand", choices=sorted(_COMMANDS))
    p.add_argument("--config", help="TOML config file")
    p.add_argument("--out", default="out", help="output directory (default: out)")
    p.add_argument("--seed", type=int, default=42, help="seed for randomized suites")
    p.add_argument("--tol", type=float, default=None, help="override check tolerance")
    p.add_argument("--verbose", action="store_true")
    p.add_argument("--set", action="append", metavar="KEY.PATH=VALUE", dest="overrides",
                   help="override a config key (repeatable)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    outdir = Path(args.out)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        cfg = _load_config(args.config, args.overrides)
        code, report = _COMMANDS[args.subcommand](cfg, outdir, args)
    except MetasnellError as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    _write_report(outdir, report)
    if args.verbose:
        print(f"report written to {outdir / 'report.json'}")
    return code


if __name__ == "__main__":
    sys.exit(main())
