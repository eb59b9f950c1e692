"""Command-line front end.

Exit status: 0 success, 1 a checked inequality failed (or a selection was
exhausted), 2 bad input or configuration, 3 a resource guard aborted the run.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .config import COMMANDS, ConfigError, RunConfig, load_config, load_space
from .core.spaces import ANY, DEFAULT_SPACE, INF, AvgClass, SchClass
from .core.textio import ParseError, format_tree, format_vector, parse_vector, read_vectors
from .core.trees import evaluate, in_class, validate
from .core.vectors import as_rat, format_rat
from .engine import DEFAULT_NODE_BUDGET, Engine, ResourceLimit, best_value, norm
from .indexlab import GridPoint, NotNormalized, average_bound_check, empirical_alpha_tilde
from .jobs import atomic_write, chunks, csv_text, jsonl_text, run_ordered
from .seqlab import (AVERAGE, SUM, SelectionError, SeqArray, SequenceError, asymptotic_model_weights,
                     block_seq, check_family, dyadic_family, sandwich_check, spreading_surrogate,
                     symmetry_check)
from .seqlab.sequences import named_row

OK, CHECK_FAILED, INPUT_ERROR, RESOURCE = 0, 1, 2, 3

# command -> {param: default}; defaults are part of the resolved config
PARAMS = {
    "norm": {"size_cap": None},
    "witness": {"size_cap": None, "cls": "any"},
    "oracle-check": {"max_support": 6, "coeffs": "0,1,1/2", "random": 0, "seed": 20240611, "depth": 6,
                     "size_cap": 8},
    "alpha": {"seq": "basis", "length": None, "s_min": "1,2,4,8", "max_len": "1,2,3", "tail": "1",
              "eps": "1/16"},
    "lemma": {"seq": "basis", "length": 8, "max_size": 8, "max_depth": 3, "unnormalized": False},
    "block": {"seq": "basis", "length": 15, "family": "dyadic", "mode": "sum"},
    "spreading": {"seq": "basis", "length": None, "coeffs": "1,1,1,1", "spacing": 1, "tau": "1/4"},
    "sandwich": {"rows": "basis,flatblocks", "length": None, "eps": "1/4", "anchor": "", "caps": None,
                 "streak": 1, "no_raise": False, "order": "late"},
    "symmetry": {"rows": "basis,flatblocks", "length": None, "eps": "1/4", "perm": "2,1", "caps": None,
                 "streak": 1, "no_raise": False, "order": "late"},
    "asmodel": {"rows": "basis,flatblocks", "length": None, "eps": "1/4", "coeffs": "", "caps": None,
                "streak": 1, "no_raise": False, "order": "late"},
}

INT_PARAMS = {"length", "size_cap", "max_support", "random", "seed", "depth", "max_size", "max_depth",
              "spacing", "streak"}

HELP = {
    "norm": "norm of every vector in the input files, with a witness",
    "witness": "constrained supremum and certified witness for every input vector",
    "oracle-check": "compare the engine with stratified enumeration on all small vectors",
    "alpha": "finite alpha-index profile of a sequence (CSV-friendly)",
    "lemma": "exhaustive check of the averaging bound 1/s + 2/n",
    "block": "SUM or AVERAGE blocking of a sequence",
    "spreading": "spreading-model surrogate and c0/l1 label",
    "sandwich": "index selection and the two-sided sandwich estimate",
    "symmetry": "A <= 4B for a row permutation",
    "asmodel": "asymptotic-model weights and their check on a coefficient test set",
}


class Failure(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def _flag(name: str) -> str:
    return "--" + name.replace("_", "-")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--space", help="TOML file with theta, enforce_admissible, enforce_vfg")
    common.add_argument("--config", help="TOML run configuration")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "jsonl"), default=None)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--node-budget", type=int, default=None,
                        help=f"subproblem / node budget for the engine and oracle (oracle default {DEFAULT_NODE_BUDGET})")
    common.add_argument("--timing", action="store_true", help="include wall times (breaks byte-identical reruns)")
    p = argparse.ArgumentParser(prog="normset", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        sp = sub.add_parser(cmd, parents=[common], help=HELP[cmd])
        if cmd in ("norm", "witness", "lemma"):
            sp.add_argument("inputs", nargs="*", help="vector files")
        for name, default in PARAMS[cmd].items():
            if isinstance(default, bool):
                sp.add_argument(_flag(name), dest=name, action="store_const", const=True, default=None)
            else:
                sp.add_argument(_flag(name), dest=name, default=None)
    return p


def resolve(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig(args.command)
    if cfg.command != args.command:
        raise ConfigError(f"config is for {cfg.command!r}, not {args.command!r}")
    unknown = set(cfg.params) - set(PARAMS[args.command])
    if unknown:
        raise ConfigError(f"unknown parameters for {args.command}: {sorted(unknown)}")
    params = dict(PARAMS[args.command])
    params.update(cfg.params)
    for name, default in PARAMS[args.command].items():
        v = getattr(args, name, None)
        if v is not None:
            if isinstance(default, int) and not isinstance(default, bool) or name in INT_PARAMS:
                v = _int(v, name)
            params[name] = v
    if args.space:
        cfg.space = load_space(args.space)
    if getattr(args, "inputs", None):
        cfg.inputs = list(args.inputs)
    if args.out:
        cfg.out = args.out
    if args.format:
        cfg.format = args.format
    if args.node_budget is not None:
        params["node_budget"] = args.node_budget
    cfg.params = params
    return cfg


# -- parameter parsing ------------------------------------------------------------


def _int(v, name, allow_none=False):
    if v is None and allow_none:
        return None
    try:
        n = int(v)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be an integer, got {v!r}") from None
    return n


def _list(v) -> list[str]:
    if isinstance(v, (list, tuple)):
        return [str(t) for t in v]
    return [t.strip() for t in str(v).split(",") if t.strip()]


def _rats(v, name) -> list[Fraction]:
    try:
        return [as_rat(t) for t in _list(v)]
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{name}: {e}") from None


def _rat(v, name) -> Fraction:
    try:
        return as_rat(str(v))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{name}: {e}") from None


def _len_value(t: str):
    return INF if t in ("inf", "infinity") else int(t)


def parse_class(text: str):
    """``any``, ``avg:S`` or ``sch:S[:N]``."""
    parts = str(text).split(":")
    try:
        if parts == ["any"]:
            return ANY
        if parts[0] == "avg" and len(parts) == 2:
            return AvgClass(int(parts[1]))
        if parts[0] == "sch" and len(parts) in (2, 3):
            return SchClass(int(parts[1]), _len_value(parts[2]) if len(parts) == 3 else INF)
    except ValueError as e:
        raise ConfigError(f"bad class {text!r}: {e}") from None
    raise ConfigError(f"bad class {text!r}; expected any, avg:S or sch:S[:N]")


def _read_inputs(cfg: RunConfig):
    if not cfg.inputs:
        raise ConfigError(f"{cfg.command} needs at least one vector file")
    out = []
    for path in cfg.inputs:
        try:
            xs = read_vectors(path)
        except OSError as e:
            raise ConfigError(f"cannot read {path}: {e.strerror}") from None
        except ParseError as e:
            raise ConfigError(f"{path}: {e}") from None
        out.extend((path, k, x) for k, x in enumerate(xs, start=1))
    return out


def _engine(cfg: RunConfig, size_cap=None) -> Engine:
    return Engine(cfg.space, size_cap=size_cap, budget=cfg.params.get("node_budget"))


def _rows(cfg: RunConfig, engine: Engine):
    length = _int(cfg.params["length"], "length", allow_none=True)
    names = _list(cfg.params["rows"])
    if not names:
        raise ConfigError("at least one row is needed")
    return names, SeqArray(tuple(named_row(n, engine, length) for n in names), _anchor(cfg))


def _anchor(cfg):
    text = cfg.params.get("anchor") or ""
    try:
        return parse_vector(text)
    except ParseError as e:
        raise ConfigError(f"anchor: {e}") from None


def _select_kw(cfg) -> dict:
    caps = cfg.params.get("caps")
    if caps is not None:
        caps = [_int(c, "caps") for c in _list(caps)]
        caps = caps[0] if len(caps) == 1 else caps
    return {"caps": caps, "streak": _int(cfg.params["streak"], "streak"),
            "raise_surrogates": not cfg.params["no_raise"], "order": cfg.params["order"]}


# -- commands ------------------------------------------------------------------------


def _norm_job(args):
    spec, size_cap, budget, items, with_class, certify, timing = args
    out = []
    for path, line, x in items:
        res = best_value(x, spec, with_class, size_cap, budget) if with_class is not ANY else \
            norm(x, spec, size_cap, budget)
        rec = {"file": path, "line": line, "x": format_vector(x)}
        if certify:
            rec["class"] = with_class.tag()
        rec.update(res.record(timing))
        if certify:
            rep = validate(res.witness, spec)
            rec["validate"] = str(rep)
            rec["evaluated"] = format_rat(evaluate(res.witness, x, spec))
            rec["certified"] = rep.ok and in_class(res.witness, with_class) and \
                evaluate(res.witness, x, spec) == res.value
        out.append(rec)
    return out


def cmd_norm(cfg, threads, timing, witness=False):
    items = _read_inputs(cfg)
    size_cap = _int(cfg.params["size_cap"], "size_cap", allow_none=True)
    cls = parse_class(cfg.params["cls"]) if witness else ANY
    if witness and cls is not ANY and any(not x for _, _, x in items):
        raise ConfigError("constrained suprema need nonempty vectors")
    jobs = [(cfg.space, size_cap, cfg.params.get("node_budget"), c, cls, witness, timing)
            for c in chunks(items, 8)]
    recs = [r for part in run_ordered(_norm_job, jobs, threads) for r in part]
    ok = all(r.get("certified", True) for r in recs)
    return recs, ok, []


def cmd_oracle_check(cfg, threads, timing):
    from .suites import _merge, oracle_jobs, run_jobs

    if cfg.space != DEFAULT_SPACE:
        raise ConfigError("oracle-check covers the default space")
    m = _int(cfg.params["max_support"], "max_support")
    if not 1 <= m <= 9:
        raise ConfigError("max_support must lie in 1..9")
    levels = sorted({abs(c) for c in _rats(cfg.params["coeffs"], "coeffs")} | {Fraction(0)})
    budget = cfg.params.get("node_budget", DEFAULT_NODE_BUDGET)
    jobs = oracle_jobs(points=m, levels=tuple(levels), random_n=_int(cfg.params["random"], "random"),
                       random_points=m, depth=_int(cfg.params["depth"], "depth"),
                       size_cap=_int(cfg.params["size_cap"], "size_cap"), node_budget=budget,
                       seed=_int(cfg.params["seed"], "seed"))
    recs, cert, fail = _merge(run_jobs(jobs, threads))
    bad = sum(r["mismatches"] for r in recs)
    ok = bad == 0 and fail == 0
    open_ = sum(not r["fixpoint"] for r in recs)
    footer = [f"classes={len(recs)} vectors={sum(r['signed'] for r in recs)} mismatches={bad} "
              f"without_fixpoint={open_} certified={cert} certification_failures={fail}"]
    return recs, ok, footer


def _grid_values(v):
    return [_len_value(t) for t in _list(v)]


def cmd_alpha(cfg, threads, timing):
    eng = _engine(cfg)
    seq = named_row(cfg.params["seq"], eng, _int(cfg.params["length"], "length", allow_none=True))
    grid = [GridPoint(_int(s, "s_min"), n, _int(t, "tail"))
            for s in _list(cfg.params["s_min"]) for n in _grid_values(cfg.params["max_len"])
            for t in _list(cfg.params["tail"])]
    prof = empirical_alpha_tilde(seq, grid, cfg.space, eng, _rat(cfg.params["eps"], "eps"))
    recs = [{"s_min": g.s_min, "maxLen": "inf" if g.max_len == INF else g.max_len, "tailStart": g.tail_start,
             "value_num": v.numerator, "value_den": v.denominator} for g, v in prof.grid]
    footer = [f"trend={prof.trend_label()} eps={format_rat(prof.eps)}"]
    return recs, True, footer


def cmd_lemma(cfg, threads, timing):
    eng = _engine(cfg)
    if cfg.inputs:
        xs = [x for _, _, x in _read_inputs(cfg)]
    else:
        seq = named_row(cfg.params["seq"], eng, _int(cfg.params["length"], "length"))
        xs = list(seq)
    try:
        rep = average_bound_check(xs, _int(cfg.params["max_size"], "max_size"),
                                  _int(cfg.params["max_depth"], "max_depth"), cfg.space, eng,
                                  normalized=not cfg.params["unnormalized"],
                                  node_budget=cfg.params.get("node_budget", DEFAULT_NODE_BUDGET))
    except NotNormalized as e:
        raise ConfigError(f"{e} (pass --unnormalized to scale the bound)") from None
    recs = [{"route": "enumeration", "size": s, "sup": format_rat(v), "bound": format_rat(b), "ok": v <= b}
            for s, v, b in rep.per_size]
    recs += [{"route": "engine", "size": s, "sup": format_rat(v), "bound": format_rat(b), "ok": v <= b}
             for s, v, b in rep.engine_route]
    tight = rep.tightest
    summary = {"route": "summary", "ok": rep.ok, "n": rep.n, "scale": format_rat(rep.scale)}
    if tight:
        summary.update(tightest_size=tight[0], slack=format_rat(tight[1]), witness=format_tree(rep.witness))
    if rep.counterexample is not None:
        summary["counterexample"] = format_tree(rep.counterexample)
    recs.append(summary)
    return recs, rep.ok, []


def _family(cfg, length):
    fam = cfg.params["family"]
    if fam == "dyadic":
        n = 0
        while (1 << (n + 1)) - 1 <= length:
            n += 1
        return dyadic_family(n)
    try:
        with open(fam) as fh:
            sets = [[int(t) for t in line.split()] for line in fh if line.strip() and not line.startswith("#")]
    except OSError as e:
        raise ConfigError(f"cannot read family file {fam}: {e.strerror}") from None
    except ValueError as e:
        raise ConfigError(f"family file {fam}: {e}") from None
    return sets


def cmd_block(cfg, threads, timing):
    eng = _engine(cfg)
    length = _int(cfg.params["length"], "length")
    seq = named_row(cfg.params["seq"], eng, length)
    mode = {"sum": SUM, "average": AVERAGE}.get(cfg.params["mode"])
    if mode is None:
        raise ConfigError("mode must be sum or average")
    fam = check_family(_family(cfg, len(seq)))
    out = block_seq(seq, fam, mode)
    recs = [{"n": j, "block": list(F), "y": format_vector(out[j]), "norm": format_rat(eng.norm(out[j]))}
            for j, F in zip(out.indices, fam)]
    return recs, True, []


def cmd_spreading(cfg, threads, timing):
    eng = _engine(cfg)
    seq = named_row(cfg.params["seq"], eng, _int(cfg.params["length"], "length", allow_none=True))
    rep = spreading_surrogate(seq, _rats(cfg.params["coeffs"], "coeffs"),
                              _int(cfg.params["spacing"], "spacing"), eng, cfg.space,
                              _rat(cfg.params["tau"], "tau"))
    return [rep.to_dict()], rep.bounds_ok, []


def _exhausted(names, e):
    return [{"rows": names, "ok": False, "error": e.tag, "row": e.row, "detail": e.detail}], False, []


def cmd_sandwich(cfg, threads, timing):
    eng = _engine(cfg)
    names, arr = _rows(cfg, eng)
    try:
        rep = sandwich_check(arr, _rat(cfg.params["eps"], "eps"), eng, **_select_kw(cfg))
    except SelectionError as e:
        return _exhausted(names, e)
    return [{"rows": names, **rep.to_dict()}], rep.ok, []


def cmd_symmetry(cfg, threads, timing):
    eng = _engine(cfg)
    names, arr = _rows(cfg, eng)
    perm = [_int(p, "perm") - 1 for p in _list(cfg.params["perm"])]
    if sorted(perm) != list(range(len(names))):
        raise ConfigError(f"perm must be a permutation of 1..{len(names)}")
    try:
        rep = symmetry_check(arr, perm, _rat(cfg.params["eps"], "eps"), eng, **_select_kw(cfg))
    except SelectionError as e:
        return _exhausted(names, e)
    rec = {"rows": names, "perm": [p + 1 for p in perm], "A": format_rat(rep.forward.value),
           "B": format_rat(rep.permuted.value), "ratio": format_rat(rep.ratio), "ok": rep.ok,
           "indices_A": rep.forward.selection.indices, "indices_B": rep.permuted.selection.indices}
    return [rec], rep.ok, []


def cmd_asmodel(cfg, threads, timing):
    eng = _engine(cfg)
    names, arr = _rows(cfg, eng)
    coeffs = None
    if cfg.params["coeffs"]:
        raw = cfg.params["coeffs"]
        groups = raw if isinstance(raw, list) and raw and isinstance(raw[0], list) else \
            [g for g in str(raw).split(";") if g.strip()]
        coeffs = [_rats(g, "coeffs") for g in groups]
    try:
        rep = asymptotic_model_weights(arr, _rat(cfg.params["eps"], "eps"), coeffs, eng, **_select_kw(cfg))
    except SelectionError as e:
        return _exhausted(names, e)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    recs = [{"coeffs": [format_rat(c) for c in lam], "value": format_rat(v), "lower": format_rat(lo),
             "upper": format_rat(hi), "ok": ok} for lam, v, lo, hi, ok in rep.rows]
    recs.append({"rows": names, "weights": [format_rat(w) for w in rep.weights],
                 "indices": rep.selection.indices, "ok": rep.ok})
    return recs, rep.ok, []


COMMAND_FUNCS = {
    "norm": cmd_norm,
    "witness": lambda cfg, threads, timing: cmd_norm(cfg, threads, timing, witness=True),
    "oracle-check": cmd_oracle_check,
    "alpha": cmd_alpha,
    "lemma": cmd_lemma,
    "block": cmd_block,
    "spreading": cmd_spreading,
    "sandwich": cmd_sandwich,
    "symmetry": cmd_symmetry,
    "asmodel": cmd_asmodel,
}


def run_command(cfg: RunConfig, threads: int = 1, timing: bool = False) -> int:
    """Run ``cfg`` and write its output; returns the exit status."""
    if threads < 1:
        raise ConfigError("threads must be positive")
    try:
        recs, ok, footer = COMMAND_FUNCS[cfg.command](cfg, threads, timing)
    except ResourceLimit as e:
        raise Failure(RESOURCE, f"resource guard: {e}") from None
    except (SequenceError, ParseError) as e:
        raise Failure(INPUT_ERROR, str(e)) from None
    header = cfg.resolved()
    if cfg.format == "csv":
        text = csv_text(header, recs, footer)
    else:
        text = jsonl_text(header, recs + [{"footer": line} for line in footer])
    if cfg.out:
        atomic_write(cfg.out, text)
    else:
        sys.stdout.write(text)
    return OK if ok else CHECK_FAILED


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        code = run_command(cfg, args.threads, args.timing)
    except ConfigError as e:
        print(f"normset: error: {e}", file=sys.stderr)
        return INPUT_ERROR
    except Failure as e:
        print(f"normset: {e}", file=sys.stderr)
        return e.code
    except ValueError as e:
        print(f"normset: error: {e}", file=sys.stderr)
        return INPUT_ERROR
    if code == CHECK_FAILED:
        print("normset: check failed", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
