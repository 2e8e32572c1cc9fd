"""Command-line driver: spectra, force curves, convergence studies, sampler
verification.

Subcommands: spectrum | force | converge | sample.  Output is CSV (default)
or JSON; CSV output written to a file gets a JSON mirror with full
provenance next to it.  Numbers are printed in shortest round-trip form, so
the CSV and the mirror agree to all 17 significant digits.  Files are
written to a temporary name and atomically renamed.

Default units are natural (hbar = c = k_B = 1); pass --hbar/--c/--kB for
dimensional output.  For a circle, lengths are naturally read in units of R
and the dimensionless combination F R^2/(hbar c) is emitted alongside the
force (converge reproduces the force-vs-distance study as -F R^2/(hbar c)
against L/R).

An optional plain-text config file supplies "key = value" defaults that
flags override; the geometry, regime and distance-grid option groups
override as groups.
"""

import argparse
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, backend
from .force_engine import (
    ThermalState,
    ToleranceUnreachable,
    asymptote_far_classical,
    asymptote_far_t0,
    asymptote_near_classical,
    asymptote_near_t0,
    force_classical,
    force_finite_t,
    force_zero_t,
    fluctuation_variance,
)
from .langevin_sampler import (
    SamplerConfig,
    matsubara_channels,
    moment_ratio_checks,
    run_chains,
)
from .spectrum import (
    BoundaryCondition,
    Circle,
    CrossSection,  # noqa: F401
    RasterMask,
    Rectangle,
    SpectrumError,
    combined_spectrum,
    raster_spectrum,
    circle_spectrum,
    rectangle_spectrum,
    smallest_mode,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_TOL = 4
EXIT_STAT = 5

_GEOMETRY_KEYS = ("circle", "rect", "mask", "h")
_REGIME_KEYS = ("zero_t", "classical", "temperature", "beta")
_LGRID_KEYS = ("length", "l_grid", "log")


class ConfigError(ValueError):
    pass


def _parse_bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _parse_floats(n):
    def conv(text):
        parts = str(text).split()
        if len(parts) != n:
            raise ConfigError(f"expected {n} values, got {text!r}")
        return [float(p) for p in parts]
    return conv


def _parse_l_grid(text):
    parts = str(text).split()
    if len(parts) != 3:
        raise ConfigError(f"L-grid needs MIN MAX COUNT, got {text!r}")
    return [float(parts[0]), float(parts[1]), int(parts[2])]


def _parse_int_list(text):
    try:
        return [int(p) for p in str(text).replace(",", " ").split()]
    except ValueError as exc:
        raise ConfigError(f"bad integer list {text!r}") from exc


# dest -> (converter for config-file values)
_CONVERTERS = {
    "circle": float, "rect": _parse_floats(2), "mask": str, "h": float,
    "modes": int, "bc": str,
    "zero_t": _parse_bool, "classical": _parse_bool,
    "temperature": float, "beta": float,
    "length": float, "l_grid": _parse_l_grid, "log": _parse_bool,
    "tol": float, "seed": int, "out": str, "format": str, "workers": int,
    "hbar": float, "c": float, "kb": float,
    "n_list": _parse_int_list,
    "chains": int, "steps": int, "burn_in": int, "ds": float, "m_max": int,
    "dump_trace": str,
}

_DEFAULTS = {
    "spectrum": {"modes": 100, "bc": "both", "format": "csv"},
    "force": {"modes": 100, "tol": 1e-2, "format": "csv", "workers": 1,
              "hbar": 1.0, "c": 1.0, "kb": 1.0, "log": False},
    "converge": {"n_list": [10, 100, 1000], "l_grid": [0.05, 5.0, 33],
                 "log": True, "tol": math.inf, "format": "csv", "workers": 1,
                 "hbar": 1.0, "c": 1.0, "kb": 1.0},
    "sample": {"modes": 4, "m_max": 3, "beta": 1.0, "seed": 42, "ds": 0.5,
               "steps": 120000, "burn_in": 1000, "chains": 2, "format": "csv",
               "hbar": 1.0, "c": 1.0, "kb": 1.0},
}


def _build_parser():
    sup = argparse.SUPPRESS
    top = argparse.ArgumentParser(
        prog="casimir-piston",
        description="Casimir forces on the plates of a conducting cylindrical "
                    "piston, from 2D Laplacian spectra.")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True)

    def add_geometry(p):
        p.add_argument("--circle", type=float, default=sup, metavar="R",
                       help="circular cross section of radius R")
        p.add_argument("--rect", type=float, nargs=2, default=sup,
                       metavar=("A", "B"), help="rectangular cross section")
        p.add_argument("--mask", type=str, default=sup, metavar="FILE",
                       help="raster mask file (rows of 0/1 characters)")
        p.add_argument("--h", type=float, default=sup, metavar="H",
                       help="raster grid spacing")

    def add_output(p):
        p.add_argument("--out", type=str, default=sup, metavar="PATH")
        p.add_argument("--format", choices=("csv", "json"), default=sup)
        p.add_argument("--config", type=str, default=sup, metavar="FILE",
                       help="key = value defaults, overridden by flags")

    def add_units(p):
        p.add_argument("--hbar", type=float, default=sup)
        p.add_argument("--c", type=float, default=sup)
        p.add_argument("--kB", dest="kb", type=float, default=sup)

    p_spec = sub.add_parser("spectrum", help="write the eigenvalue table")
    add_geometry(p_spec)
    p_spec.add_argument("--modes", type=int, default=sup, metavar="N",
                        help="eigenvalues per boundary-condition set, "
                             "counting degeneracy")
    p_spec.add_argument("--bc", choices=("dirichlet", "neumann", "both"),
                        default=sup)
    add_output(p_spec)

    p_force = sub.add_parser("force", help="force curve over a distance grid")
    add_geometry(p_force)
    p_force.add_argument("--modes", type=int, default=sup, metavar="N")
    p_force.add_argument("--zero-T", dest="zero_t", action="store_true",
                         default=sup, help="T = 0 (Bessel image sum)")
    p_force.add_argument("--classical", action="store_true", default=sup,
                         help="classical limit (m = 0 term); requires --beta")
    p_force.add_argument("--temperature", type=float, default=sup, metavar="T")
    p_force.add_argument("--beta", type=float, default=sup, metavar="B")
    p_force.add_argument("--L", dest="length", type=float, default=sup,
                         metavar="X", help="single plate separation")
    p_force.add_argument("--L-grid", dest="l_grid", type=float, nargs=3,
                         default=sup, metavar=("MIN", "MAX", "COUNT"))
    p_force.add_argument("--log", action="store_true", default=sup,
                         help="logarithmic distance grid")
    p_force.add_argument("--tol", type=float, default=sup)
    p_force.add_argument("--seed", type=int, default=sup,
                         help="recorded in provenance; force curves are "
                              "deterministic")
    p_force.add_argument("--workers", type=int, default=sup)
    add_units(p_force)
    add_output(p_force)

    p_conv = sub.add_parser("converge",
                            help="T = 0 curves for several mode counts, with "
                                 "near/far asymptote columns")
    add_geometry(p_conv)
    p_conv.add_argument("--N-list", dest="n_list", type=int, nargs="+",
                        default=sup, metavar="N")
    p_conv.add_argument("--L-grid", dest="l_grid", type=float, nargs=3,
                        default=sup, metavar=("MIN", "MAX", "COUNT"))
    p_conv.add_argument("--log", action="store_true", default=sup)
    p_conv.add_argument("--tol", type=float, default=sup)
    p_conv.add_argument("--seed", type=int, default=sup,
                        help="recorded in provenance")
    p_conv.add_argument("--workers", type=int, default=sup)
    add_units(p_conv)
    add_output(p_conv)

    p_samp = sub.add_parser("sample",
                            help="Langevin sampler calibration report")
    add_geometry(p_samp)
    p_samp.add_argument("--modes", type=int, default=sup, metavar="N")
    p_samp.add_argument("--m-max", dest="m_max", type=int, default=sup)
    p_samp.add_argument("--temperature", type=float, default=sup)
    p_samp.add_argument("--beta", type=float, default=sup)
    p_samp.add_argument("--seed", type=int, default=sup)
    p_samp.add_argument("--ds", type=float, default=sup)
    p_samp.add_argument("--steps", type=int, default=sup)
    p_samp.add_argument("--burn-in", dest="burn_in", type=int, default=sup)
    p_samp.add_argument("--chains", type=int, default=sup)
    p_samp.add_argument("--dump-trace", dest="dump_trace", type=str,
                        default=sup, metavar="PATH",
                        help="write a step/channel/phi trace of chain 0 "
                             "(large output)")
    add_units(p_samp)
    add_output(p_samp)
    return top


def _read_config_file(path, command):
    values = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key = value")
                key, _, val = line.partition("=")
                dest = key.strip().lower().replace("-", "_")
                if dest == "l":
                    dest = "length"
                if dest == "n_modes":
                    dest = "modes"
                if dest not in _CONVERTERS:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key.strip()!r}")
                values[dest] = _CONVERTERS[dest](val.strip())
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    del command
    return values


def _group_override(config_vals, cli_vals):
    """Drop whole config option groups that the command line overrides."""
    merged = dict(config_vals)
    for group in (_GEOMETRY_KEYS, _REGIME_KEYS, _LGRID_KEYS):
        if any(k in cli_vals for k in group):
            for k in group:
                merged.pop(k, None)
    merged.update(cli_vals)
    return merged


def _effective_options(ns):
    cli_vals = {k: v for k, v in vars(ns).items() if k not in ("command",)}
    config_vals = {}
    if "config" in cli_vals:
        config_vals = _read_config_file(cli_vals.pop("config"), ns.command)
    opts = dict(_DEFAULTS[ns.command])
    opts.update(_group_override(config_vals, cli_vals))
    return opts


def _read_mask_file(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read mask file: {exc}") from exc
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if set(line) - {"0", "1"}:
            raise ConfigError(f"{path}:{lineno}: mask rows must be 0/1 characters")
        rows.append([ch == "1" for ch in line])
    if not rows:
        raise ConfigError(f"{path}: empty mask")
    if len({len(r) for r in rows}) != 1:
        raise ConfigError(f"{path}: mask rows have unequal lengths")
    return np.array(rows, dtype=bool)


def _cross_section(opts):
    given = [k for k in ("circle", "rect", "mask") if k in opts]
    if len(given) != 1:
        raise ConfigError("choose exactly one of --circle, --rect, --mask")
    if "circle" in opts:
        if opts["circle"] <= 0.0:
            raise ConfigError("circle radius must be positive")
        return Circle(opts["circle"])
    if "rect" in opts:
        a, b = opts["rect"]
        if a <= 0.0 or b <= 0.0:
            raise ConfigError("rectangle sides must be positive")
        return Rectangle(a, b)
    if "h" not in opts:
        raise ConfigError("--mask requires --h")
    if opts["h"] <= 0.0:
        raise ConfigError("grid spacing must be positive")
    return RasterMask(_read_mask_file(opts["mask"]), opts["h"])


def _regime(opts):
    chosen = [k for k in ("zero_t", "classical", "temperature") if opts.get(k)]
    if "beta" in opts and chosen not in ([], ["classical"]):
        raise ConfigError("--beta combines only with --classical")
    if not chosen and "beta" in opts:
        chosen = ["beta"]
    if len(chosen) != 1:
        raise ConfigError(
            "choose exactly one of --zero-T, --classical, --temperature, --beta")
    hbar, c, kb = opts["hbar"], opts["c"], opts["kb"]
    if chosen[0] == "zero_t":
        return "zero-T", ThermalState.zero_temperature(hbar, c)
    if chosen[0] == "classical":
        if "beta" not in opts:
            raise ConfigError("--classical requires --beta")
        return "classical", ThermalState.from_beta(opts["beta"], hbar, c)
    if chosen[0] == "temperature":
        if opts["temperature"] <= 0.0:
            raise ConfigError("temperature must be positive (use --zero-T for T = 0)")
        return "finite-T", ThermalState.from_temperature(opts["temperature"],
                                                         hbar, c, kb)
    if opts["beta"] <= 0.0:
        raise ConfigError("beta must be positive")
    return "finite-T", ThermalState.from_beta(opts["beta"], hbar, c)


def _l_values(opts):
    has_single = "length" in opts
    has_grid = "l_grid" in opts
    if has_single == has_grid:
        raise ConfigError("choose exactly one of --L and --L-grid")
    if has_single:
        if opts["length"] <= 0.0:
            raise ConfigError("L must be positive")
        return np.array([opts["length"]])
    lo, hi, count = opts["l_grid"]
    count = int(count)
    if lo <= 0.0 or hi < lo or count < 1:
        raise ConfigError("L grid must be positive, ordered, nonempty")
    if opts.get("log", False):
        return np.geomspace(lo, hi, count)
    return np.linspace(lo, hi, count)


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _rows_to_csv(columns, rows):
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _json_value(v):
    if v is None or isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    return float(v)


def _mirror_doc(columns, rows, provenance):
    return {
        "provenance": provenance,
        "columns": list(columns),
        "rows": [[_json_value(v) for v in row] for row in rows],
    }


def _atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".casimir-piston-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _emit(columns, rows, provenance, opts):
    fmt = opts.get("format", "csv")
    doc = _mirror_doc(columns, rows, provenance)
    if "out" not in opts:
        if fmt == "json":
            sys.stdout.write(json.dumps(doc, indent=1) + "\n")
        else:
            sys.stdout.write(_rows_to_csv(columns, rows))
        return
    out = opts["out"]
    if fmt == "json":
        _atomic_write(out, json.dumps(doc, indent=1) + "\n")
        return
    _atomic_write(out, _rows_to_csv(columns, rows))
    root, _ = os.path.splitext(out)
    mirror = root + ".json"
    if mirror != out:
        _atomic_write(mirror, json.dumps(doc, indent=1) + "\n")


def _provenance(opts, cs, extra=None):
    doc = {
        "tool": "casimir-piston",
        "version": __version__,
        "backend": backend.active_name(),
        "options": {k: _json_value(v) if not isinstance(v, (list, tuple))
                    else list(v) for k, v in sorted(opts.items())},
    }
    if cs is not None:
        doc["cross_section"] = cs.describe()
    if extra:
        doc.update(extra)
    return doc


def _single_bc(cs, n, bc):
    if isinstance(cs, Circle):
        return circle_spectrum(cs.radius, n, bc)
    if isinstance(cs, Rectangle):
        return rectangle_spectrum(cs.a, cs.b, n, bc)
    return raster_spectrum(cs.mask, cs.h, n, bc)


def cmd_spectrum(opts):
    cs = _cross_section(opts)
    n = opts["modes"]
    if n < 1:
        raise ConfigError("--modes must be >= 1")
    bc_choice = opts["bc"]
    if bc_choice == "both":
        spec = combined_spectrum(cs, n)
        sets = (BoundaryCondition.DIRICHLET, BoundaryCondition.NEUMANN)
    else:
        spec = _single_bc(cs, n, BoundaryCondition(bc_choice))
        sets = (BoundaryCondition(bc_choice),)
    # one row per eigenvalue copy, exactly n per BC set
    rows = []
    for bc in sets:
        emitted = 0
        for m in spec.modes:
            if m.bc is not bc:
                continue
            for _ in range(m.degeneracy):
                if emitted == n:
                    break
                rows.append((m.lam, m.lam_sq, m.degeneracy, m.bc.value))
                emitted += 1
    rows.sort(key=lambda r: (r[0], r[3]))
    columns = ("lambda", "lambda_sq", "degeneracy", "bc")
    _emit(columns, rows, _provenance(opts, cs, {"n_per_set": n}), opts)
    return EXIT_OK


def _force_at(spec, length, regime, th, tol, opts):
    if regime == "zero-T":
        return force_zero_t(spec, length, tol, hbar=opts["hbar"], c=opts["c"])
    if regime == "classical":
        return force_classical(spec, length, th.beta, tol)
    return force_finite_t(spec, length, th, tol)


def cmd_force(opts):
    cs = _cross_section(opts)
    regime, th = _regime(opts)
    lengths = _l_values(opts)
    tol = opts["tol"]
    if tol <= 0.0:
        raise ConfigError("--tol must be positive")
    spec = combined_spectrum(cs, opts["modes"])
    lam1, g1 = smallest_mode(spec)
    radius = cs.radius if isinstance(cs, Circle) else None
    hbar, c = opts["hbar"], opts["c"]

    unreachable = []

    def compute(length):
        try:
            return _force_at(spec, float(length), regime, th, tol, opts), None
        except ToleranceUnreachable as exc:
            return exc.result, str(exc)

    with ThreadPoolExecutor(max_workers=max(1, opts["workers"])) as pool:
        results = list(pool.map(compute, lengths))

    columns = ["L"]
    if radius is not None:
        columns.append("L_over_R")
    columns += ["force"]
    if radius is not None:
        columns.append("force_times_R2")
    columns += ["sigma2", "n_modes", "tail_estimate", "regime"]
    with_asym = regime in ("zero-T", "classical")
    if with_asym:
        columns += ["asym_near", "asym_far"]

    rows = []
    for length, (res, err) in zip(lengths, results):
        if err is not None:
            unreachable.append((float(length), err))
        row = [float(length)]
        if radius is not None:
            row.append(float(length) / radius)
        row.append(res.force)
        if radius is not None:
            row.append(res.force * radius**2)
        row += [fluctuation_variance(res.force), res.n_modes_used,
                res.tail_estimate, res.regime]
        if with_asym:
            if regime == "zero-T":
                row += [asymptote_near_t0(spec.area, float(length), hbar=hbar, c=c),
                        asymptote_far_t0(g1, lam1, float(length), hbar=hbar, c=c)]
            else:
                row += [asymptote_near_classical(spec.area, float(length), th.beta),
                        asymptote_far_classical(g1, lam1, float(length), th.beta)]
        rows.append(row)

    _emit(columns, rows, _provenance(opts, cs, {"regime": regime}), opts)
    if unreachable:
        for length, err in unreachable:
            print(f"tolerance unreachable at L = {length}: {err}", file=sys.stderr)
        return EXIT_TOL
    return EXIT_OK


def cmd_converge(opts):
    cs = _cross_section(opts)
    lengths = _l_values({"l_grid": opts["l_grid"], "log": opts.get("log", True)})
    n_list = opts["n_list"]
    if not n_list or any(n < 1 for n in n_list):
        raise ConfigError("--N-list must contain positive integers")
    tol = opts["tol"]
    radius = cs.radius if isinstance(cs, Circle) else None
    hbar, c = opts["hbar"], opts["c"]

    columns = ["N", "L"]
    if radius is not None:
        columns += ["L_over_R"]
    columns += ["force"]
    if radius is not None:
        columns += ["force_times_R2"]
    columns += ["asym_near", "asym_far"]

    rows = []
    unreachable = False
    for n in n_list:
        spec = combined_spectrum(cs, n)
        lam1, g1 = smallest_mode(spec)

        def compute(length):
            try:
                return force_zero_t(spec, float(length), tol,
                                    hbar=hbar, c=c), None
            except ToleranceUnreachable as exc:
                return exc.result, str(exc)

        with ThreadPoolExecutor(max_workers=max(1, opts["workers"])) as pool:
            results = list(pool.map(compute, lengths))
        for length, (res, err) in zip(lengths, results):
            if err is not None:
                unreachable = True
                print(f"tolerance unreachable at N = {n}, L = {float(length)}",
                      file=sys.stderr)
            row = [n, float(length)]
            if radius is not None:
                row.append(float(length) / radius)
            row.append(res.force)
            if radius is not None:
                row.append(res.force * radius**2)
            row += [asymptote_near_t0(cs.area, float(length), hbar=hbar, c=c),
                    asymptote_far_t0(g1, lam1, float(length), hbar=hbar, c=c)]
            rows.append(row)

    _emit(columns, rows, _provenance(opts, cs, {"regime": "zero-T"}), opts)
    return EXIT_TOL if unreachable else EXIT_OK


def cmd_sample(opts):
    if not any(k in opts for k in ("circle", "rect", "mask")):
        opts = {**opts, "circle": 1.0}
    cs = _cross_section(opts)
    if "temperature" in opts:
        th = ThermalState.from_temperature(opts["temperature"], opts["hbar"],
                                           opts["c"], opts["kb"])
    else:
        th = ThermalState.from_beta(opts["beta"], opts["hbar"], opts["c"])
    if math.isinf(th.beta):
        raise ConfigError("sampler needs a finite temperature")
    cfg = SamplerConfig(seed=opts["seed"], ds=opts["ds"], n_steps=opts["steps"],
                        burn_in=opts["burn_in"], n_chains=opts["chains"])
    spec = combined_spectrum(cs, opts["modes"])
    channels = matsubara_channels(spec, th, opts["m_max"])

    trace_fh = None
    if "dump_trace" in opts:
        trace_fh = open(opts["dump_trace"], "w")
        trace_fh.write("# step channel phi\n")
    try:
        run = run_chains(channels, 1.0, cfg, trace_writer=trace_fh)
    finally:
        if trace_fh is not None:
            trace_fh.close()

    checks = []
    s = run.stats
    v_exact = channels.k_b_t / channels.kappa
    z_var = (s.second_moment - v_exact) / s.second_err
    i = int(np.argmax(np.abs(z_var)))
    checks.append(("channel_variance", float(s.second_moment[i]),
                   float(v_exact[i]), float(z_var[i])))
    _, z4 = moment_ratio_checks(run)
    i = int(np.argmax(np.abs(z4)))
    ratio = s.fourth_moment / s.second_moment**2
    checks.append(("fourth_moment_ratio", float(ratio[i]), 3.0, float(z4[i])))
    z_odd = s.mean / s.mean_err
    i = int(np.argmax(np.abs(z_odd)))
    checks.append(("odd_moment", float(s.mean[i]), 0.0, float(z_odd[i])))
    mode_sum_exact = float(np.sum(v_exact))
    z_ms = (run.diagonal_mean - mode_sum_exact) / run.diagonal_mean_err
    checks.append(("mode_sum", run.diagonal_mean, mode_sum_exact, float(z_ms)))
    # variance/mean^2 of the coherent piston functional -> 2
    r = run.coherent_var / run.coherent_mean**2
    r_err = math.hypot(run.coherent_var_err / run.coherent_mean**2,
                       2.0 * run.coherent_var * run.coherent_mean_err
                       / run.coherent_mean**3)
    checks.append(("piston_variance_ratio", float(r), 2.0, float((r - 2.0) / r_err)))

    columns = ("check", "value", "expected", "z")
    rows = [(name, val, exp, z) for name, val, exp, z in checks]
    all_ok = all(abs(z) <= 3.0 for _, _, _, z in checks)
    for name, val, exp, z in checks:
        status = "PASS" if abs(z) <= 3.0 else "FAIL"
        print(f"{status} {name}: value={val!r} expected={exp!r} z={z:+.2f}")
    if "out" in opts:
        _emit(columns, rows, _provenance(
            opts, cs, {"n_channels": channels.n_channels,
                       "samples_per_channel": s.n_samples}), opts)
    return EXIT_OK if all_ok else EXIT_STAT


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "force": cmd_force,
    "converge": cmd_converge,
    "sample": cmd_sample,
}


def main(argv=None):
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_OK
    try:
        opts = _effective_options(ns)
        return _COMMANDS[ns.command](opts)
    except (ConfigError, SpectrumError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
