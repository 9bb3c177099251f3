"""Command-line experiment runner.

Every subcommand reads an optional JSON config (``--config``), applies
command-line overrides on top, writes one CSV and a JSON manifest next to
it (same stem, ``.json`` suffix).  Exit status is 0 on success, 1 for an
invalid configuration, 2 for a failure while running.

CSV columns
-----------
dof-table  csi,M,alpha1,alpha2,ds_lower,ds_upper
plan       csi,M,alphas,scheme,fraction,scheme_ds,usage
simulate   scheme,P,delta,L,M,Q,a,seed,n_fades,n_trials,I_dest,I_eve,rate_lb,ser
slope      scheme,delta,quantity,n_points,P_min,P_max,slope
oracle     instance,h1,h2,g1,g2,H_Y2,H_Y2_given_X2,H_X1_given_X2,H_X1_given_floor,slack,violation

Floats are written with 12 significant digits; multi-valued cells
(``alphas``, ``usage``) are ``;``-separated.
"""
import argparse
import csv
import io
import json
import subprocess
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, _rng
from .analysis import error_prob_mc, estimate_rate, fit_dof_slope, parse_scheme
from .channel import sample_fading
from .dof import FULL, NO_EVE, plan_timeshare, plan_timeshare_multi, region_sweep
from .oracle import det_entropy_check, floor_preimage_bound, random_joint_pmf
from .signal import Scheme

COLUMNS = {
    "dof-table": ["csi", "M", "alpha1", "alpha2", "ds_lower", "ds_upper"],
    "plan": ["csi", "M", "alphas", "scheme", "fraction", "scheme_ds", "usage"],
    "simulate": ["scheme", "P", "delta", "L", "M", "Q", "a", "seed", "n_fades",
                 "n_trials", "I_dest", "I_eve", "rate_lb", "ser"],
    "slope": ["scheme", "delta", "quantity", "n_points", "P_min", "P_max", "slope"],
    "oracle": ["instance", "h1", "h2", "g1", "g2", "H_Y2", "H_Y2_given_X2",
               "H_X1_given_X2", "H_X1_given_floor", "slack", "violation"],
}

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


class ConfigError(Exception):
    """Invalid configuration; the message names the offending field."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


# ---------------------------------------------------------------------------
# config handling
# ---------------------------------------------------------------------------

def _floats(text):
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(v) for v in str(text).replace(";", ",").split(",") if v.strip()]


def _ints(text):
    if isinstance(text, (list, tuple)):
        return [int(v) for v in text]
    return [int(v) for v in str(text).replace(";", ",").split(",") if v.strip()]


DEFAULTS = {
    "dof-table": dict(csi=FULL, M=2, alphas=None, grid=None, symmetric=False),
    "plan": dict(csi=FULL, M=2, alpha1=None, alpha2=None, alpha=None, mimo_scheme="S3"),
    "simulate": dict(scheme="S5", P_list=[1e3, 1e4, 1e5, 1e6], delta=0.1, L=2.0, M=2,
                     relays=[], n_fades=50, trials=10000, seed=0, fixed_fading=False,
                     jobs=1),
    "slope": dict(input=None),
    "oracle": dict(instances=1000, Pmax=49, L=2.0, seed=0, g_values=[1.0, 0.5, 1 / 3],
                   preimage_L=3.0),
}


def _field(cfg, name, conv, check=None, msg=""):
    try:
        value = conv(cfg[name])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"field '{name}': cannot interpret {cfg[name]!r} ({exc})") from None
    if check is not None and not check(value):
        raise ConfigError(f"field '{name}': {msg} (got {value!r})")
    return value


def _bool(v):
    if isinstance(v, bool):
        return v
    if str(v).lower() in ("1", "true", "yes"):
        return True
    if str(v).lower() in ("0", "false", "no"):
        return False
    raise ValueError("expected a boolean")


def _csi(cfg):
    return _field(cfg, "csi", str, lambda c: c in (FULL, NO_EVE),
                  f"must be '{FULL}' or '{NO_EVE}'")


def _M(cfg):
    return _field(cfg, "M", int, lambda m: m >= 2, "must be >= 2")


def validate(command, cfg):
    """Coerce and check ``cfg`` for ``command``; raise ConfigError on failure."""
    out = {"out": cfg.get("out")}
    if command == "dof-table":
        out["csi"], out["M"] = _csi(cfg), _M(cfg)
        out["symmetric"] = _field(cfg, "symmetric", _bool)
        if cfg.get("alphas") is not None:
            out["alphas"] = _field(cfg, "alphas", _floats,
                                   lambda a: len(a) > 0 and min(a) >= 0,
                                   "must be a nonempty list of nonnegative values")
        elif cfg.get("grid") is not None:
            grid = cfg["grid"]
            if isinstance(grid, str):
                grid = dict(zip(("start", "stop", "step"), _floats(grid)))
            try:
                start, stop, step = (float(grid[k]) for k in ("start", "stop", "step"))
            except (KeyError, TypeError, ValueError):
                raise ConfigError("field 'grid': needs start, stop, step") from None
            if not step > 0 or stop < start or start < 0:
                raise ConfigError("field 'grid': need 0 <= start <= stop and step > 0")
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            out["alphas"] = [round(start + k * step, 12) for k in range(count)]
        else:
            raise ConfigError("field 'alphas': provide alphas or grid")
    elif command == "plan":
        out["csi"], out["M"] = _csi(cfg), _M(cfg)
        out["mimo_scheme"] = _field(cfg, "mimo_scheme", Scheme,
                                    lambda s: s in (Scheme.S2, Scheme.S3, Scheme.S5),
                                    "must be S2, S3 or S5")
        if out["M"] == 2 and cfg.get("alpha1") is not None:
            for k in ("alpha1", "alpha2"):
                if cfg.get(k) is None:
                    raise ConfigError(f"field '{k}': required")
                out[k] = _field(cfg, k, float, lambda a: a >= 0, "must be nonnegative")
        elif cfg.get("alpha") is not None:
            out["alpha"] = _field(cfg, "alpha", float, lambda a: a >= 0, "must be nonnegative")
        else:
            raise ConfigError("field 'alpha1': provide alpha1/alpha2 (M=2) or alpha")
    elif command == "simulate":
        try:
            kind, relays = parse_scheme(cfg["scheme"])
        except ValueError as exc:
            raise ConfigError(f"field 'scheme': {exc}") from None
        if kind in (Scheme.CJ, Scheme.SILENCE):
            raise ConfigError(f"field 'scheme': {kind.value} cannot be simulated")
        out["scheme"] = cfg["scheme"] if isinstance(cfg["scheme"], str) else kind.value
        out["P_list"] = _field(cfg, "P_list", _floats, lambda p: len(p) > 0,
                               "must contain at least one power")
        if min(out["P_list"]) <= 1:
            raise ConfigError("field 'P_list': every P must exceed 1")
        out["delta"] = _field(cfg, "delta", float, lambda d: 0 < d < 1, "must lie in (0, 1)")
        out["L"] = _field(cfg, "L", float, lambda v: v > 1, "must exceed 1")
        out["M"] = _M(cfg)
        out["relays"] = _field(cfg, "relays", _ints) or list(relays)
        out["n_fades"] = _field(cfg, "n_fades", int, lambda n: n >= 1, "must be >= 1")
        out["trials"] = _field(cfg, "trials", int, lambda n: n >= 0, "must be >= 0")
        out["seed"] = _field(cfg, "seed", int, lambda s: s >= 0, "must be >= 0")
        out["fixed_fading"] = _field(cfg, "fixed_fading", _bool)
        out["jobs"] = _field(cfg, "jobs", int, lambda n: n >= 1, "must be >= 1")
        from .signal import scheme_params
        for P in out["P_list"]:
            try:
                scheme_params(kind, P, out["delta"], out["L"], out["M"], out["relays"])
            except ValueError as exc:
                raise ConfigError(f"field 'P_list': {exc}") from None
    elif command == "slope":
        if not cfg.get("input"):
            raise ConfigError("field 'input': path to a simulate CSV is required")
        path = Path(cfg["input"])
        if not path.is_file():
            raise ConfigError(f"field 'input': no such file {path}")
        out["input"] = str(path)
    elif command == "oracle":
        out["instances"] = _field(cfg, "instances", int, lambda n: n >= 1, "must be >= 1")
        out["Pmax"] = _field(cfg, "Pmax", int, lambda p: 1 <= p and int(np.sqrt(p)) <= 31,
                             "need 1 <= Pmax and floor(sqrt(Pmax)) <= 31")
        out["L"] = _field(cfg, "L", float, lambda v: v > 1, "must exceed 1")
        out["seed"] = _field(cfg, "seed", int, lambda s: s >= 0, "must be >= 0")
        out["preimage_L"] = _field(cfg, "preimage_L", float, lambda v: v > 1, "must exceed 1")
        lp = out["preimage_L"]
        out["g_values"] = _field(cfg, "g_values", _floats,
                                 lambda gs: all(1 / lp <= abs(g) <= lp for g in gs),
                                 "every |g| must lie in [1/preimage_L, preimage_L]")
    return out


def load_config(command, args):
    cfg = dict(DEFAULTS[command])
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"field 'config': {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"field 'config': invalid JSON ({exc})") from None
        if not isinstance(data, dict):
            raise ConfigError("field 'config': top level must be an object")
        unknown = set(data) - set(cfg) - {"out"}
        if unknown:
            raise ConfigError(f"field '{sorted(unknown)[0]}': unknown for {command}")
        cfg.update(data)
    for key, value in vars(args).items():
        if key in ("command", "config") or value is None:
            continue
        cfg[key] = value
    return validate(command, cfg)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".12g")
    if isinstance(v, (tuple, list)):
        return ";".join(_fmt(x) for x in v)
    if v is None:
        return ""
    return str(v)


def run_dof_table(cfg):
    rows = region_sweep(cfg["alphas"], cfg["csi"], cfg["M"], cfg["symmetric"])
    return rows, {}


def run_plan(cfg):
    if "alpha1" in cfg:
        plan = plan_timeshare(cfg["alpha1"], cfg["alpha2"], cfg["csi"], cfg["mimo_scheme"])
    else:
        if cfg["M"] == 2:
            plan = plan_timeshare(cfg["alpha"], cfg["alpha"], cfg["csi"], cfg["mimo_scheme"])
        else:
            plan = plan_timeshare_multi(cfg["M"], cfg["alpha"], cfg["csi"])
    plan.validate()
    rows = [dict(csi=plan.csi, M=plan.M, alphas=plan.alphas, scheme=e.scheme,
                 fraction=float(e.fraction), scheme_ds=float(e.ds),
                 usage=tuple(float(u) for u in e.usage)) for e in plan.entries]
    summary = dict(achieved_ds=float(plan.achieved_ds), case=plan.case,
                   swapped=plan.swapped, total_fraction=float(plan.total_fraction()),
                   link_usage=[float(u) for u in plan.link_usage()])
    return rows, summary


def _simulate_point(args):
    cfg, P = args
    rec = estimate_rate(cfg["scheme"], P, cfg["delta"], cfg["n_fades"], cfg["seed"],
                        L=cfg["L"], M=cfg["M"], relays=tuple(cfg["relays"]),
                        fixed_fading=cfg["fixed_fading"])
    if cfg["trials"] > 0:
        rec.ser = error_prob_mc(cfg["scheme"], P, cfg["delta"], cfg["trials"], cfg["seed"],
                                L=cfg["L"], M=cfg["M"], relays=tuple(cfg["relays"]),
                                fixed_fading=cfg["fixed_fading"])
        rec.n_trials = cfg["trials"]
    row = rec.row()
    row["M"] = cfg["M"]
    return row


def run_simulate(cfg):
    work = [(cfg, P) for P in cfg["P_list"]]
    if cfg["jobs"] > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=cfg["jobs"]) as pool:
            rows = list(pool.map(_simulate_point, work))
    else:
        rows = [_simulate_point(w) for w in work]
    return rows, {}


def run_slope(cfg):
    with open(cfg["input"], newline="") as fh:
        reader = csv.DictReader(fh)
        missing = {"scheme", "P", "delta", "rate_lb", "I_dest", "I_eve"} - set(reader.fieldnames or [])
        if missing:
            raise ConfigError(f"field 'input': CSV lacks columns {sorted(missing)}")
        data = list(reader)
    groups = {}
    for r in data:
        groups.setdefault((r["scheme"], float(r["delta"])), []).append(r)
    rows = []
    for (scheme, delta), rs in groups.items():
        P = [float(r["P"]) for r in rs]
        for q in ("rate_lb", "I_dest", "I_eve"):
            pts = [(p, float(r[q])) for p, r in zip(P, rs)]
            rows.append(dict(scheme=scheme, delta=delta, quantity=q, n_points=len(pts),
                             P_min=min(P), P_max=max(P), slope=fit_dof_slope(pts)))
    return rows, {}


def run_oracle(cfg):
    rows = []
    violations = 0
    n = int(np.floor(np.sqrt(cfg["Pmax"])))
    for i in range(cfg["instances"]):
        f = sample_fading(_rng.generator(cfg["seed"], _rng.FADING, i), cfg["L"], 2)
        pmf = random_joint_pmf(_rng.generator(cfg["seed"], _rng.PMF, i), n)
        rep = det_entropy_check(f, cfg["Pmax"], pmf)
        violations += not rep.holds
        rows.append(dict(instance=i, h1=f.h[0], h2=f.h[1], g1=f.g[0], g2=f.g[1],
                         H_Y2=rep.H_Y2, H_Y2_given_X2=rep.H_Y2_given_X2,
                         H_X1_given_X2=rep.H_X1_given_X2,
                         H_X1_given_floor=rep.H_X1_given_floor, slack=rep.slack,
                         violation=not rep.holds))
    preimage = {}
    for g in cfg["g_values"]:
        mult, bound = floor_preimage_bound(g, cfg["Pmax"], cfg["preimage_L"])
        preimage[format(g, ".12g")] = dict(max_multiplicity=mult, H_bound=bound)
    return rows, dict(violations=violations, floor_preimage=preimage)


RUNNERS = {"dof-table": run_dof_table, "plan": run_plan, "simulate": run_simulate,
           "slope": run_slope, "oracle": run_oracle}


def version_string():
    """Package version plus ``git describe`` of the source tree when available."""
    try:
        desc = subprocess.run(["git", "describe", "--always", "--dirty", "--tags"],
                              cwd=Path(__file__).resolve().parent, capture_output=True,
                              text=True, timeout=5)
        if desc.returncode == 0 and desc.stdout.strip():
            return f"{__version__}+g{desc.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__


def render_csv(command, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    cols = COLUMNS[command]
    writer.writerow(cols)
    for r in rows:
        writer.writerow([_fmt(r.get(c)) for c in cols])
    return buf.getvalue()


def build_parser():
    p = _Parser(prog="diamond-wiretap", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp):
        sp.add_argument("--config", help="JSON config file; flags override it")
        sp.add_argument("--out", help="CSV output path (manifest written alongside)")

    sp = sub.add_parser("dof-table", help="secure d.o.f. over a grid of link d.o.f.")
    common(sp)
    sp.add_argument("--csi", choices=[FULL, NO_EVE])
    sp.add_argument("--M", type=int)
    sp.add_argument("--alphas", help="comma-separated grid values")
    sp.add_argument("--grid", help="start,stop,step")
    sp.add_argument("--symmetric", action="store_const", const=True)

    sp = sub.add_parser("plan", help="time-sharing plan for one operating point")
    common(sp)
    sp.add_argument("--csi", choices=[FULL, NO_EVE])
    sp.add_argument("--M", type=int)
    sp.add_argument("--alpha1", type=float)
    sp.add_argument("--alpha2", type=float)
    sp.add_argument("--alpha", type=float, help="symmetric link d.o.f.")
    sp.add_argument("--mimo-scheme", dest="mimo_scheme")

    sp = sub.add_parser("simulate", help="rates, leakage and SER over a power sweep")
    common(sp)
    sp.add_argument("--scheme")
    sp.add_argument("--P-list", dest="P_list", help="comma-separated powers")
    sp.add_argument("--delta", type=float)
    sp.add_argument("--L", type=float)
    sp.add_argument("--M", type=int)
    sp.add_argument("--relays", help="comma-separated 0-based relay indices")
    sp.add_argument("--n-fades", dest="n_fades", type=int)
    sp.add_argument("--trials", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--fixed-fading", dest="fixed_fading", action="store_const", const=True)
    sp.add_argument("--jobs", type=int)

    sp = sub.add_parser("slope", help="d.o.f. slopes from a simulate CSV")
    common(sp)
    sp.add_argument("--input")

    sp = sub.add_parser("oracle", help="entropy checks on the integer floor model")
    common(sp)
    sp.add_argument("--instances", type=int)
    sp.add_argument("--Pmax", type=int)
    sp.add_argument("--L", type=float)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--g-values", dest="g_values")
    sp.add_argument("--preimage-L", dest="preimage_L", type=float,
                    help="fading support used for the floor-preimage checks")
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args.command, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    command = args.command
    out = Path(cfg.get("out") or f"{command}.csv")
    try:
        rows, summary = RUNNERS[command](cfg)
        text = render_csv(command, rows)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
        manifest = dict(command=command, config=cfg, seed=cfg.get("seed"),
                        version=version_string(), rows=len(rows), csv=str(out),
                        columns=COLUMNS[command], summary=summary)
        out.with_suffix(".json").write_text(json.dumps(manifest, indent=2, default=str) + "\n")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - reported as a runtime failure
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
