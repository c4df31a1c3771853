"""Config-driven command-line front end and report emitter.

Exit codes: 0 all checks pass, 1 theorem-check failure, 2 parse error,
3 validation failure, 4 solver failure.  Reports are JSON with a stable key
order plus a human summary table on stdout; for a fixed config and seed the
report is reproducible apart from the timing fields.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import verify as vf
from .hamiltonians import ModelSpec, build, coupling_matrix, validate
from .lattice import (Graph, LatticeFamily, bipartition, path_graph, cycle_graph,
                      read_edge_list, sublattice_imbalance, write_edge_list)
from .operators import SparseOperator
from .spectra import SolverError, ground_space

EXIT_PASS = 0
EXIT_THEOREM = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_SOLVER = 4

_CONFIG_KEYS = {
    "command", "model", "lattice", "lattice_file", "t", "u", "j", "j_kondo",
    "g", "omega", "n_max", "m", "k", "seed", "out", "coo", "perm", "family",
    "n_min", "n_max_scan", "pair", "lattice_small", "emit",
    "dense_threshold", "degeneracy_tol", "strict_tol",
}


class CliError(ValueError):
    """Configuration or argument problem; maps to exit code 2."""


def parse_config_file(path: str) -> dict:
    out: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"malformed config line: {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise CliError(f"unknown config key: {key!r}")
        out[key] = value
    return out


def parse_lattice(text: str | None, file: str | None) -> Graph:
    if file:
        return read_edge_list(Path(file).read_text())
    if not text:
        raise CliError("no lattice given (use --lattice or --lattice-file)")
    name, _, args = text.partition(":")
    params = [int(a) for a in args.split(",")] if args else []
    try:
        if name == "path":
            return path_graph(*params)
        if name == "cycle":
            return cycle_graph(*params)
        if name == "bethe_ball":
            z, n = params
            return LatticeFamily("bethe_ball", z).member(n)
        if name in ("chain", "decorated_chain", "star", "square", "lieb"):
            (n,) = params
            return LatticeFamily(name).member(n)
    except (TypeError, ValueError) as exc:
        raise CliError(f"bad lattice spec {text!r}: {exc}") from exc
    raise CliError(f"unknown lattice generator {name!r}")


def parse_coupling(g: Graph, text: str | None):
    """Coupling shorthand: scalar, "nn=v", "file=PATH", or "mlm"."""
    if text is None:
        return None
    if text.startswith("nn="):
        return coupling_matrix(g, float(text[3:]), "nn")
    if text.startswith("file="):
        return np.loadtxt(text[5:], ndmin=2)
    if text == "mlm":
        return coupling_matrix(g, 1.0, "complete_bipartite")
    try:
        return coupling_matrix(g, float(text), "diagonal")
    except ValueError as exc:
        raise CliError(f"bad coupling spec {text!r}") from exc


_MODEL_NEEDS = {
    "mlm": (),
    "heisenberg": ("j",),
    "hubbard": ("t", "u"),
    "hubbard_nt": ("t",),
    "holstein_hubbard": ("t", "u", "g", "omega"),
    "holstein_nt": ("t", "g", "omega"),
    "kondo": ("t", "j_kondo"),
    "kondo_holstein": ("t", "j_kondo", "g", "omega"),
}

_DEFAULTS = {"t": "nn=1", "u": "4", "j": "nn=1", "g": "0.5", "omega": 1.0,
             "j_kondo": 1.0}


def _spec_on_graph(cfg: dict, g: Graph) -> ModelSpec:
    model = cfg.get("model")
    if model not in _MODEL_NEEDS:
        raise CliError(f"unknown or missing model {model!r}")
    needs = _MODEL_NEEDS[model]
    kw: dict = {}
    if "t" in needs:
        kw["t"] = parse_coupling(g, cfg.get("t") or _DEFAULTS["t"])
    if "u" in needs:
        kw["u"] = parse_coupling(g, cfg.get("u") or _DEFAULTS["u"])
    elif cfg.get("u"):
        kw["u"] = parse_coupling(g, cfg["u"])
    if "j" in needs:
        kw["j"] = parse_coupling(g, cfg.get("j") or _DEFAULTS["j"])
    if "g" in needs:
        kw["g_ep"] = parse_coupling(g, cfg.get("g") or _DEFAULTS["g"])
    if "omega" in needs:
        kw["omega"] = float(cfg.get("omega") or _DEFAULTS["omega"])
        kw["n_max"] = int(cfg["n_max"]) if cfg.get("n_max") else None
    if "j_kondo" in needs:
        kw["j_kondo"] = float(cfg.get("j_kondo") or _DEFAULTS["j_kondo"])
    try:
        return ModelSpec(model, g, **kw)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def build_spec(cfg: dict) -> ModelSpec:
    g = parse_lattice(cfg.get("lattice"), cfg.get("lattice_file"))
    return _spec_on_graph(cfg, g)


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------

def report_emit(report: dict) -> str:
    """Machine-readable JSON with stable key order."""
    if "sectors" in report and not report["sectors"]:
        raise ValueError("report with an empty sector list is forbidden")
    return json.dumps(report, indent=2) + "\n"


def _human_table(report: dict) -> str:
    lines = []
    model = report.get("model", {})
    lines.append(f"model: {model.get('model')}  vertices: {model.get('vertices')}")
    if "sectors" in report:
        lines.append(f"{'M':>6} {'dim':>7} {'E0':>16} {'mult':>5} "
                     f"{'ergodicity':>20} {'margin':>11}")
        for s in report["sectors"]:
            erg = s.get("ergodicity", {}).get("verdict", "-")
            margin = s.get("strict_positivity_margin")
            lines.append(f"{s['M']:>6} {s['dim']:>7} {s['E0']:>16.10f} "
                         f"{s['multiplicity']:>5} {erg:>20} "
                         f"{'-' if margin is None else format(margin, '.3e'):>11}")
    glb = report.get("global")
    if glb:
        lines.append(f"E0 = {glb['E0']:.12f}  degeneracy = {glb['degeneracy']}  "
                     f"S = {glb['S_computed']} (predicted {glb['S_predicted']})")
    lines.append(f"verdict: {report.get('verdict')}")
    for f in report.get("failures", []):
        lines.append(f"  FAIL: {f}")
    return "\n".join(lines)


def _write_report(report: dict, out: str | None) -> None:
    text = report_emit(report)
    if out:
        Path(out).write_text(text)
    print(_human_table(report))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_lattice(cfg: dict) -> int:
    g = parse_lattice(cfg.get("lattice"), cfg.get("lattice_file"))
    if cfg.get("emit"):
        Path(cfg["emit"]).write_text(write_edge_list(g))
    bp = bipartition(g) if g.is_connected else None
    info = {"vertices": g.vertex_count, "edges": [list(e) for e in g.edges],
            "connected": g.is_connected,
            "bipartite": bp is not None,
            "imbalance": bp.imbalance() if bp else None}
    print(json.dumps(info, indent=2))
    return EXIT_PASS


def _cmd_build(cfg: dict) -> int:
    spec = build_spec(cfg)
    m = float(cfg.get("m", 0) or 0)
    h = build(spec, m)
    if cfg.get("coo"):
        Path(cfg["coo"]).write_text(h.to_coo_text())
    print(f"sector M={m}: dimension {h.domain.dim}, nonzeros {h.matrix.nnz}")
    return EXIT_PASS


def _cmd_diagonalize(cfg: dict) -> int:
    spec = build_spec(cfg)
    m = float(cfg.get("m", 0) or 0)
    h = build(spec, m)
    gs = ground_space(h.matrix, seed=int(cfg.get("seed", 0) or 0))
    report = {"model": {"model": spec.model, "vertices": spec.graph.vertex_count},
              "sectors": [{"M": m, "dim": h.domain.dim, "E0": gs.energy,
                           "multiplicity": gs.multiplicity, "gap": gs.gap}],
              "verdict": "pass"}
    _write_report(report, cfg.get("out"))
    return EXIT_PASS


def _cmd_verify(cfg: dict) -> int:
    spec = build_spec(cfg)
    seed = int(cfg.get("seed", 0) or 0)
    if spec.model in ("mlm", "heisenberg", "hubbard", "holstein_hubbard"):
        report = vf.verify_mlm_class(spec, seed=seed)
    elif spec.model in ("hubbard_nt", "holstein_nt"):
        report = vf.verify_nt_class(spec, seed=seed)
    else:
        report = vf.verify_kondo(spec, seed=seed)
    _write_report(report.to_dict(), cfg.get("out"))
    return EXIT_PASS if report.ok else EXIT_THEOREM


def _cmd_scan(cfg: dict) -> int:
    name = cfg.get("family")
    if not name:
        raise CliError("scan needs --family")
    fam_name, _, zarg = name.partition(":")
    family = LatticeFamily(fam_name, int(zarg) if zarg else None)
    n_min = int(cfg.get("n_min", 1) or 1)
    n_max = int(cfg.get("n_max_scan", 3) or 3)

    def make_spec(g: Graph) -> ModelSpec:
        sub_cfg = {"model": cfg.get("model", "heisenberg")}
        for key in ("t", "u", "j", "j_kondo", "g", "omega", "n_max"):
            if cfg.get(key):
                sub_cfg[key] = cfg[key]
        return _spec_on_graph(sub_cfg, g)

    report = vf.magnetic_order_scan(family, make_spec, range(n_min, n_max + 1),
                                    seed=int(cfg.get("seed", 0) or 0))
    d = report.to_dict()
    if cfg.get("out"):
        Path(cfg["out"]).write_text(report_emit(d))
    print(json.dumps(d, indent=2))
    return EXIT_PASS if report.ok else EXIT_THEOREM


def _cmd_pair(cfg: dict) -> int:
    kind = cfg.get("pair")
    if not kind:
        raise CliError("pair needs --pair")
    seed = int(cfg.get("seed", 0) or 0)
    if kind.startswith("nesting-"):
        model = kind[len("nesting-"):]
        g_small = parse_lattice(cfg.get("lattice_small"), None)
        g_big = parse_lattice(cfg.get("lattice"), cfg.get("lattice_file"))
        report = vf.verify_nesting_pair(model, g_small, g_big)
    else:
        g = parse_lattice(cfg.get("lattice"), cfg.get("lattice_file"))
        if kind == "hubbard-mlm":
            spec_a = _spec_on_graph({**cfg, "model": "hubbard"}, g)
            spec_b = _spec_on_graph({**cfg, "model": "mlm"}, g)
        elif kind == "holstein-hubbard":
            spec_a = _spec_on_graph({**cfg, "model": "holstein_hubbard"}, g)
            spec_b = _spec_on_graph({**cfg, "model": "hubbard"}, g)
        else:
            raise CliError(f"unknown pair kind {kind!r}")
        report = vf.verify_stability_pair(spec_a, spec_b, seed=seed)
    d = report.to_dict()
    if cfg.get("out"):
        Path(cfg["out"]).write_text(report_emit(d))
    print(json.dumps(d, indent=2))
    return EXIT_PASS if report.ok else EXIT_THEOREM


def _cmd_invariance(cfg: dict) -> int:
    spec = build_spec(cfg)
    n = spec.graph.vertex_count
    if cfg.get("perm"):
        perm = tuple(int(p) for p in cfg["perm"].split(","))
    else:
        rng = np.random.default_rng(int(cfg.get("seed", 0) or 0))
        perm = tuple(int(x) for x in rng.permutation(n))
    report = vf.isomorphism_invariance(spec, perm, seed=int(cfg.get("seed", 0) or 0))
    d = report.to_dict()
    d["perm"] = list(perm)
    if cfg.get("out"):
        Path(cfg["out"]).write_text(report_emit(d))
    print(json.dumps(d, indent=2))
    return EXIT_PASS if report.ok else EXIT_THEOREM


_COMMANDS = {
    "lattice": _cmd_lattice,
    "build": _cmd_build,
    "diagonalize": _cmd_diagonalize,
    "verify": _cmd_verify,
    "scan": _cmd_scan,
    "pair": _cmd_pair,
    "invariance": _cmd_invariance,
}


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="edspin")
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config")
    parser.add_argument("--model")
    parser.add_argument("--lattice")
    parser.add_argument("--lattice-file", dest="lattice_file")
    parser.add_argument("--lattice-small", dest="lattice_small")
    parser.add_argument("--t")
    parser.add_argument("--U", dest="u")
    parser.add_argument("--J", dest="j")
    parser.add_argument("--J-kondo", dest="j_kondo")
    parser.add_argument("--g")
    parser.add_argument("--omega")
    parser.add_argument("--n-max", dest="n_max")
    parser.add_argument("--m")
    parser.add_argument("--k")
    parser.add_argument("--seed")
    parser.add_argument("--out")
    parser.add_argument("--coo")
    parser.add_argument("--perm")
    parser.add_argument("--family")
    parser.add_argument("--n-min", dest="n_min")
    parser.add_argument("--n-max-scan", dest="n_max_scan")
    parser.add_argument("--pair")
    parser.add_argument("--emit")
    return parser


def run(argv=None) -> int:
    parser = _make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_PASS
    cfg: dict = {}
    try:
        if args.config:
            cfg.update(parse_config_file(args.config))
        for key, value in vars(args).items():
            if key != "config" and value is not None:
                cfg[key] = value
        command = cfg.get("command")
        if command not in _COMMANDS:
            raise CliError(f"unknown command {command!r}")
        return _COMMANDS[command](cfg)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except vf.ValidationFailure as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


def main() -> None:
    sys.exit(run())
