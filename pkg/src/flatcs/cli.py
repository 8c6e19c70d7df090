"""Command-line front end: ``flatcs <command> [<action>] [options]``.

Every invocation is turned into an :class:`ExperimentConfig`, dispatched by
:func:`run`, and recorded as one JSON line in the results log named by the
``FLATCS_LOG`` environment variable (default ``flatcs_results.jsonl``).

Field arguments accept ``zero``, ``flat:c1,c2,c3`` (abelian flat
``sum c_i H dtheta_i`` with ``H`` the last algebra basis element),
``random:SEED`` or a path to a ``.fcs`` / ``.json`` file.  Gauge arguments
accept ``identity``, ``degree:D``, ``random:SEED`` or a file path.
"""
import argparse
import hashlib
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import doubling, groups, heatflow, holonomy, io, lattice, lie, plotting, surface
from .errors import FlatCSError, UsageError

DEFAULT_LOG = "flatcs_results.jsonl"


@dataclass
class ExperimentConfig:
    command: str
    group: str = "SU2"
    grid_n: int = 32
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def validate(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}", "command")
        if self.group not in groups.CATALOG:
            raise UsageError(f"unknown group {self.group!r}", "group")
        n = self.grid_n
        if not (isinstance(n, int) and 8 <= n <= 128 and n & (n - 1) == 0):
            raise UsageError("grid_n must be a power of two between 8 and 128", "grid_n")
        if not isinstance(self.seed, int):
            raise UsageError("seed must be an integer", "seed")
        for key, val in self.tolerances.items():
            if not isinstance(val, (int, float)):
                raise UsageError(f"tolerance {key!r} must be a number", f"tolerances.{key}")
        return self

    def canonical(self):
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))

    def hash(self):
        return hashlib.sha256(self.canonical().encode()).hexdigest()


@dataclass
class ResultRecord:
    command: str
    config_hash: str
    timestamp: str
    outputs: dict
    artifacts: list = field(default_factory=list)

    def payload(self):
        """Everything except the timestamp; identical for identical configs."""
        return {"command": self.command, "config_hash": self.config_hash, "outputs": self.outputs, "artifacts": self.artifacts}

    def to_json(self):
        return {**self.payload(), "timestamp": self.timestamp}


# ---------------------------------------------------------------------------
# argument resolution


def _conn_arg(spec, cfg, key):
    n, gid = cfg.grid_n, cfg.group
    if spec is None or spec == "zero":
        return lattice.LatticeConnection.zero(n, gid)
    if spec.startswith("flat:"):
        try:
            cs = [float(x) for x in spec[5:].split(",")]
        except ValueError:
            raise UsageError(f"bad flat spec {spec!r}", f"params.{key}") from None
        if len(cs) != 3:
            raise UsageError("flat:c1,c2,c3 needs three numbers", f"params.{key}")
        h = lie.algebra_basis(gid)[-1]
        return lattice.flat_from_holonomy([c * h for c in cs], n, gid)
    if spec.startswith("random:"):
        rng = np.random.default_rng(int(spec[7:]))
        return lattice.random_smooth_connection(n, gid, rng)
    if spec in lattice.ANALYTIC_FIELDS:
        return lattice.analytic_test_field(spec, n)
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"no such file {spec!r}", f"params.{key}")
    out = io.load(path)
    if not isinstance(out, lattice.LatticeConnection):
        raise UsageError(f"{spec!r} does not hold a connection", f"params.{key}")
    return out


def _gauge_arg(spec, cfg, key):
    n, gid = cfg.grid_n, cfg.group
    if spec is None or spec == "identity":
        return lattice.GaugeMapField.identity(n, gid)
    if spec.startswith("degree:"):
        d = int(spec[7:])
        u = lattice.degree_map(d, n)
        if gid == "SU2":
            return u
        if gid == "SO3":
            return lattice.GaugeMapField(lie.su2_to_so3(u.u), "SO3")
        raise UsageError("degree maps exist for SU2 and SO3", f"params.{key}")
    if spec.startswith("random:"):
        return lattice.random_smooth_gauge(n, gid, np.random.default_rng(int(spec[7:])))
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"no such file {spec!r}", f"params.{key}")
    out = io.load(path)
    if not isinstance(out, lattice.GaugeMapField):
        raise UsageError(f"{spec!r} does not hold a gauge map", f"params.{key}")
    return out


def _loop_arg(spec, n):
    """``e1`` / ``e2`` / ``e3`` coordinate loops or ``rect:i,j:li,lj``."""
    spec = spec or "e1"
    if spec in ("e1", "e2", "e3"):
        return holonomy.LatticeLoop.axis(int(spec[1]) - 1, n)
    if spec.startswith("rect:"):
        try:
            axes, lengths = spec[5:].split(":")
            i, j = (int(x) - 1 for x in axes.split(","))
            li, lj = (int(x) for x in lengths.split(","))
        except ValueError:
            raise UsageError(f"bad loop spec {spec!r}", "params.loop") from None
        return holonomy.LatticeLoop.rectangle(n, axes=(i, j), lengths=(li, lj))
    raise UsageError(f"bad loop spec {spec!r}", "params.loop")


def _out_path(cfg, key):
    val = cfg.params.get(key)
    return Path(val) if val else None


# ---------------------------------------------------------------------------
# commands


def _groups(cfg):
    p = cfg.params
    action = p.get("action", "list")
    if action == "list":
        out = {"groups": [spec.to_json() for spec in groups.CATALOG.values()]}
        for entry in out["groups"]:
            entry["granularity"] = str(groups.granularity(entry["name"], p.get("hypothesis1", False)).granularity)
        return out, []
    if action == "estimate-n":
        est = groups.n_G_estimate(cfg.group, trials=int(p.get("trials", 50)), seed=cfg.seed)
        return {"group": cfg.group, "estimate": est.to_json()}, []
    raise UsageError(f"unknown groups action {action!r}", "params.action")


def _signature(cfg):
    p = cfg.params
    return surface.CompressionBodySignature.closed_surface(int(p.get("genus", 1)), p.get("delta", "I"), cfg.group)


def _rep(cfg):
    p = cfg.params
    action = p.get("action", "solve")
    if action == "solve":
        data = _signature(cfg)
        point = surface.solve_commutator(data, seed=cfg.seed)
        out = {"genus": data.plus_genus, "delta": p.get("delta", "I"),
               "defect": surface.commutator_defect(point, data), "point": point.to_json()}
        path = _out_path(cfg, "out")
        if path:
            path.write_text(json.dumps(point.to_json()))
        return out, [str(path)] if path else []
    if action == "connect":
        ins = p.get("inputs") or []
        if len(ins) != 2:
            raise UsageError("rep connect needs exactly two --in files", "params.inputs")
        for f in ins:
            if not Path(f).exists():
                raise UsageError(f"no such file {f!r}", "params.inputs")
        p0, p1 = (surface.RepPoint.from_json(json.loads(Path(f).read_text())) for f in ins)
        genus = len(p0.surface_tuples[0]) if p0.surface_tuples else 0
        data = surface.CompressionBodySignature.closed_surface(genus, p.get("delta", "I"), cfg.group)
        path = surface.connect(p0, p1, data, steps=int(p.get("steps", 64)))
        defects = [surface.commutator_defect(q, data) for q in path]
        out = {"steps": len(path) - 1, "max_defect": max(defects),
               "series": {"defect-path": {"x": list(range(len(defects))), "y": defects}}}
        return out, []
    raise UsageError(f"unknown rep action {action!r}", "params.action")


def _hol(cfg):
    p = cfg.params
    conn = _conn_arg(p.get("conn"), cfg, "conn")
    loop = _loop_arg(p.get("loop"), conn.n)
    g = holonomy.holonomy(conn, loop)
    out = {"loop": p.get("loop", "e1"), "holonomy": io.matrix_to_json(g.matrix)}
    if p.get("cover"):
        out["tilde_holonomy"] = holonomy.tilde_holonomy(conn, loop).to_json()
    return out, []


def _cs(cfg):
    p = cfg.params
    action = p.get("action", "eval")
    if action == "eval":
        conn = _conn_arg(p.get("conn"), cfg, "conn")
        ref = _conn_arg(p.get("ref"), cfg, "ref")
        return {"report": lattice.cs_eval(conn, ref).to_json()}, []
    if action == "jump":
        u = _gauge_arg(p.get("u"), cfg, "u")
        conn = _conn_arg(p.get("conn"), cfg, "conn")
        ref = _conn_arg(p.get("ref"), cfg, "ref")
        tol = cfg.tolerances.get("tol_int", 0.05)
        rep = lattice.cs_jump(u, conn, ref, tol_int=tol, hypothesis1=p.get("hypothesis1", False))
        return {"jump": rep.to_json()}, []
    if action == "path":
        spec = p.get("spec")
        if not spec:
            raise UsageError("cs path needs --spec", "params.spec")
        desc = json.loads(Path(spec).read_text())
        start = _conn_arg(desc.get("start", "zero"), cfg, "spec.start")
        end = _conn_arg(desc.get("end"), cfg, "spec.end")
        steps = int(desc.get("steps", 32))
        path = [start + (k / steps) * (end - start) for k in range(steps + 1)]
        ref = lattice.LatticeConnection.zero(cfg.grid_n, cfg.group)
        action_val = lattice.path_action(path, ref)
        delta = lattice.cs_value(end, ref) - lattice.cs_value(start, ref)
        partial = [lattice.path_action(path[: k + 1], ref) if k else 0.0 for k in range(len(path))]
        out = {"path_action": action_val, "delta_cs": delta, "difference": abs(action_val - delta),
               "series": {"defect-path": {"x": list(range(len(partial))), "y": [abs(v) for v in partial]}}}
        return out, []
    if action == "convergence":
        kind = p.get("field", lattice.ANALYTIC_FIELDS[0])
        ns, diffs, values = lattice.cs_convergence(kind, tuple(p.get("ns", (8, 16, 32, 64))))
        out = {"field": kind, "ns": ns, "values": values, "differences": diffs,
               "slope": plotting.loglog_slope(ns, diffs),
               "series": {"cs-convergence": {"x": ns, "y": diffs}}}
        return out, []
    raise UsageError(f"unknown cs action {action!r}", "params.action")


def _double(cfg):
    p = cfg.params
    action = p.get("action", "split")
    if action == "ledger" and p.get("measure"):
        led = doubling.gluing_experiment(int(p.get("n", 1)), int(p.get("degree", 1)), cfg.grid_n,
                                         tol=cfg.tolerances.get("ledger", doubling.LEDGER_TOL))
        return {"ledger": led.to_json()}, []
    if action == "ledger":
        led = doubling.gluing_ledger(float(p["cs_a"]), float(p["cs_a_prime"]), float(p["kappa_u"]), int(p["n"]),
                                     kappa_un=p.get("kappa_un"), tol=cfg.tolerances.get("ledger", doubling.LEDGER_TOL))
        return {"ledger": led.to_json()}, []
    conn = _conn_arg(p.get("conn"), cfg, "conn")
    if action == "split":
        return {"decomposition": doubling.split(conn).to_json()}, []
    if action == "diag":
        v = doubling.is_diagonal(conn)
        return {"diagonal": v.diagonal, "swap_residual": v.swap_residual, "normal_residual": v.normal_residual}, []
    if action == "tgauge":
        eps = float(p.get("epsilon", doubling.DEFAULT_EPSILON))
        u = doubling.temporal_gauge(conn, eps)
        new = lattice.gauge_apply(u, conn)
        out = {"residual_before": doubling.temporal_residual(conn, eps),
               "residual_after": doubling.temporal_residual(new, eps)}
        path = _out_path(cfg, "out")
        if path:
            io.save(u, path)
        return out, [str(path)] if path else []
    if action == "quantize":
        ref = _conn_arg(p.get("ref"), cfg, "ref")
        flat = (_gauge_arg(p["u"], cfg, "u"), conn) if p.get("u") else conn
        v = doubling.quantization_check(flat, ref, cfg.group, p.get("hypothesis1", False))
        return {"verdict": v.to_json()}, []
    raise UsageError(f"unknown double action {action!r}", "params.action")


def _heat(cfg):
    p = cfg.params
    action = p.get("action", "flow")
    fc = heatflow.FlowConfig(tol_flat=cfg.tolerances.get("tol_flat", 1e-8), max_steps=int(p.get("max_steps", 10_000)))
    if action == "flow":
        conn = _conn_arg(p.get("conn"), cfg, "conn")
        res = heatflow.flow(conn, fc)
        out = {"steps": res.steps, "energy": res.energies[-1], "residual": res.residuals[-1],
               "series": {"flow-residual": {"x": list(range(len(res.residuals))), "y": res.residuals}}}
        path = _out_path(cfg, "out")
        if path:
            io.save(res.conn, path)
        return out, [str(path)] if path else []
    if action == "connect":
        a0 = _conn_arg(p.get("a"), cfg, "a")
        a1 = _conn_arg(p.get("b"), cfg, "b")
        path = heatflow.local_connect(a0, a1, fc, steps=int(p.get("steps", 8)))
        res = [lattice.curvature(c).l2 for c in path]
        return {"points": len(path), "max_residual": max(res),
                "series": {"flow-residual": {"x": list(range(len(res))), "y": res}}}, []
    raise UsageError(f"unknown heat action {action!r}", "params.action")


COMMANDS = {"groups": _groups, "rep": _rep, "hol": _hol, "cs": _cs, "double": _double, "heat": _heat}


def _clean(obj):
    """Make outputs JSON-safe (numpy scalars, non-finite floats)."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def run(config, log_path=None):
    """Execute ``config``, append its record to the results log and return it."""
    config.validate()
    outputs, artifacts = COMMANDS[config.command](config)
    record = ResultRecord(config.command, config.hash(), time.strftime("%Y-%m-%dT%H:%M:%S%z"), _clean(outputs), artifacts)
    log = Path(log_path or os.environ.get("FLATCS_LOG", DEFAULT_LOG))
    with log.open("a") as fh:
        fh.write(json.dumps(record.to_json(), sort_keys=True) + "\n")
    return record


def plot(record, kind, path):
    """Write the ``kind`` series of ``record`` as an SVG chart."""
    return plotting.plot(record, kind, path)


# ---------------------------------------------------------------------------
# argument parsing


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group")
    common.add_argument("--n", type=int, dest="grid_n")
    common.add_argument("--seed", type=int)
    common.add_argument("--config", help="JSON file with ExperimentConfig fields")
    common.add_argument("--json", action="store_true", default=None, help="print the full record as JSON")
    common.add_argument("--plot", help="write an SVG chart of the record's series")

    ap = argparse.ArgumentParser(prog="flatcs", description="Flat connections and Chern-Simons values on lattice doubles.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("groups", parents=[common], help="structure-group catalog and n_G estimates")
    g.add_argument("action", nargs="?", default="list", choices=["list", "estimate-n"])
    g.add_argument("--trials", type=int)
    g.add_argument("--hypothesis1", action="store_true", default=None)

    r = sub.add_parser("rep", parents=[common], help="surface representation varieties")
    r.add_argument("action", choices=["solve", "connect"])
    r.add_argument("--genus", type=int)
    r.add_argument("--delta")
    r.add_argument("--in", dest="inputs", action="append")
    r.add_argument("--steps", type=int)
    r.add_argument("--out")

    h = sub.add_parser("hol", parents=[common], help="holonomy and cover-valued holonomy")
    h.add_argument("--conn")
    h.add_argument("--loop")
    h.add_argument("--cover", action="store_true", default=None)

    c = sub.add_parser("cs", parents=[common], help="Chern-Simons evaluation, jumps, paths, convergence")
    c.add_argument("action", choices=["eval", "jump", "path", "convergence"])
    c.add_argument("--conn")
    c.add_argument("--ref")
    c.add_argument("--u")
    c.add_argument("--spec")
    c.add_argument("--field", choices=lattice.ANALYTIC_FIELDS)
    c.add_argument("--hypothesis1", action="store_true", default=None)

    d = sub.add_parser("double", parents=[common], help="double decomposition and gluing ledger")
    d.add_argument("action", choices=["split", "diag", "tgauge", "quantize", "ledger"])
    d.add_argument("--conn")
    d.add_argument("--ref")
    d.add_argument("--u")
    d.add_argument("--epsilon", type=float)
    d.add_argument("--hypothesis1", action="store_true", default=None)
    d.add_argument("--out")
    for key in ("cs-a", "cs-a-prime", "kappa-u", "kappa-un"):
        d.add_argument(f"--{key}", type=float)
    d.add_argument("--gluing-n", type=int, dest="gluing_n")
    d.add_argument("--measure", action="store_true", default=None, help="measure the ledger end to end on the torus")
    d.add_argument("--degree", type=int)

    t = sub.add_parser("heat", parents=[common], help="Yang-Mills gradient flow")
    t.add_argument("action", nargs="?", default="flow", choices=["flow", "connect"])
    t.add_argument("--conn")
    t.add_argument("--a")
    t.add_argument("--b")
    t.add_argument("--tol", type=float)
    t.add_argument("--max-steps", type=int, dest="max_steps")
    t.add_argument("--steps", type=int)
    t.add_argument("--out")
    return ap


_COMMON = ("command", "group", "grid_n", "seed", "config", "json", "plot")


def config_from_args(ns):
    base = {}
    if ns.config:
        try:
            base = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}", "config") from None
        if not isinstance(base, dict):
            raise UsageError("config file must hold a JSON object", "config")
    params = dict(base.get("params", {}))
    tolerances = dict(base.get("tolerances", {}))
    for key, val in vars(ns).items():
        if key in _COMMON or val is None:
            continue
        if key == "tol":
            tolerances["tol_flat"] = val
            continue
        params[key] = val
    if ns.command == "double" and params.get("action") == "ledger" and params.get("measure"):
        params["n"] = params.pop("gluing_n", None) or params.get("n", 1)
    elif ns.command == "double" and params.get("action") == "ledger":
        for src, dst in (("cs_a", "cs_a"), ("cs_a_prime", "cs_a_prime"), ("kappa_u", "kappa_u"), ("gluing_n", "n")):
            if params.get(src) is None and dst not in params:
                raise UsageError(f"double ledger needs --{src.replace('_', '-')}", f"params.{dst}")
            if src != dst:
                params[dst] = params.pop(src)
    cfg = ExperimentConfig(
        command=ns.command,
        group=ns.group or base.get("group", "SU2"),
        grid_n=ns.grid_n or base.get("grid_n", 32),
        seed=ns.seed if ns.seed is not None else base.get("seed", 0),
        tolerances=tolerances,
        params=params,
    )
    return cfg.validate()


def _summary(record):
    keep = {k: v for k, v in record.outputs.items() if k not in ("series", "point")}
    return json.dumps(keep, sort_keys=True)


def main(argv=None):
    ap = _parser()
    ns = ap.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        record = run(cfg)
        if ns.plot:
            kind = next(iter(record.outputs.get("series", {})), None)
            if kind is None:
                raise UsageError(f"{cfg.command} produces no plottable series", "plot")
            record.artifacts.append(str(plot(record, kind, ns.plot)))
    except UsageError as exc:
        print(f"flatcs: usage error: {exc}", file=sys.stderr)
        return 2
    except FlatCSError as exc:
        print(f"flatcs: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(record.to_json(), sort_keys=True) if ns.json else _summary(record))
    return 0


if __name__ == "__main__":
    sys.exit(main())
