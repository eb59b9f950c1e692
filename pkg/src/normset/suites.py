"""Finite verification suites, one per acceptance criterion.

Each suite is split into a fixed list of jobs (independent of the worker
count); every job builds its own certifying engine and returns plain records,
so result files are byte-identical for any number of workers.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .core.spaces import DEFAULT_SPACE, AvgClass, SchClass, SpaceSpec
from .core.textio import format_tree, format_vector, parse_tree
from .core.trees import evaluate, validate
from .core.vectors import FinVec, combine, format_rat
from .engine import DEFAULT_NODE_BUDGET, Engine, brute_force, norm
from .indexlab import average_bound_check, empirical_alpha_tilde
from .jobs import atomic_write, chunks, jsonl_text, run_ordered
from .seqlab import (BASIS, FLAT_BLOCKS, SeqArray, interleaved_pair, make_seq, mix_seq, sandwich_check,
                     spreading_surrogate)

EPS = Fraction(1, 4)
SEED = 20240611
FAMILY = ("basis", "flat", "mix0", "mix1/2", "mix1")
BLOCKING_WITNESS = "S(A(4; L(4,+), L(5,+), L(6,+), L(7,+)), A(8; " + ", ".join(
    f"L({i},+)" for i in range(8, 16)) + "), A(16; " + ", ".join(f"L({i},+)" for i in range(16, 32)) + "))"


@dataclass
class JobResult:
    records: list[dict]
    certified: int = 0
    failures: int = 0


@dataclass
class SuiteResult:
    criterion: int
    title: str
    ok: bool
    records: list[dict]
    summary: dict
    certified: int = 0
    failures: int = 0
    seconds: float = field(default=0.0, compare=False)


def _done(engine: Engine, records) -> JobResult:
    return JobResult(records, engine.certified, len(engine.failures))


def _merge(parts: list[JobResult]) -> tuple[list[dict], int, int]:
    recs = [r for p in parts for r in p.records]
    return recs, sum(p.certified for p in parts), sum(p.failures for p in parts)


# -- 1: oracle equivalence ---------------------------------------------------

LEVELS = (Fraction(0), Fraction(1), Fraction(1, 2))


def abs_patterns(points: int, levels=LEVELS) -> list[tuple[Fraction, ...]]:
    return [c for c in itertools.product(levels, repeat=points) if any(c)]


def _vec(coeffs) -> FinVec:
    return FinVec({i + 1: c for i, c in enumerate(coeffs) if c})


def _oracle_job(args) -> JobResult:
    patterns, depth, size_cap, node_budget = args
    eng = Engine(size_cap=size_cap, certify=True)
    out = []
    for pat in patterns:
        x = _vec(pat)
        ref = brute_force(x, depth_cap=depth, size_cap=size_cap, node_budget=node_budget)
        nz = [i for i, c in x.entries]
        bad = 0
        for signs in itertools.product((1, -1), repeat=len(nz)):
            y = FinVec({i: c * s for (i, c), s in zip(x.entries, signs)})
            if eng.norm(y) != ref.value:
                bad += 1
        out.append({"x": format_vector(x), "oracle": format_rat(ref.value), "engine": format_rat(eng.norm(x)),
                    "signed": 2 ** len(nz), "mismatches": bad, "fixpoint": ref.fixpoint})
    return _done(eng, out)


def random_vectors(n: int, points: int, seed: int = SEED) -> list[FinVec]:
    rng = random.Random(seed)
    vals = [Fraction(p, q) for p in range(-4, 5) for q in range(1, 5)]
    out = []
    while len(out) < n:
        x = FinVec({i: rng.choice(vals) for i in range(1, points + 1) if rng.random() < 0.8})
        if x:
            out.append(x)
    return out


def _random_oracle_job(args) -> JobResult:
    xs, depth, size_cap, node_budget = args
    eng = Engine(size_cap=size_cap, certify=True)
    out = []
    for x in xs:
        ref = brute_force(x, depth_cap=depth, size_cap=size_cap, node_budget=node_budget)
        v = eng.norm(x)
        out.append({"x": format_vector(x), "oracle": format_rat(ref.value), "engine": format_rat(v),
                    "signed": 1, "mismatches": int(v != ref.value), "fixpoint": ref.fixpoint})
    return _done(eng, out)


def oracle_jobs(points=6, levels=LEVELS, random_n=200, random_points=7, depth=6, size_cap=8,
                node_budget=DEFAULT_NODE_BUDGET, seed=SEED):
    jobs = [(_oracle_job, (c, depth, size_cap, node_budget)) for c in chunks(abs_patterns(points, levels), 48)]
    if random_n:
        rv = random_vectors(random_n, random_points, seed)
        jobs += [(_random_oracle_job, (c, depth, size_cap, node_budget)) for c in chunks(rv, 20)]
    return jobs


def _call(job):
    fn, args = job
    return fn(args)


def run_jobs(jobs, threads: int) -> list[JobResult]:
    return run_ordered(_call, jobs, threads)


def suite_oracle(threads=1, **kw) -> SuiteResult:
    recs, cert, fail = _merge(run_jobs(oracle_jobs(**kw), threads))
    signed = sum(r["signed"] for r in recs)
    bad = sum(r["mismatches"] for r in recs)
    # equality with the capped oracle is the criterion; fixpoints are reported
    open_ = sum(not r["fixpoint"] for r in recs)
    return SuiteResult(1, "oracle equivalence", bad == 0, recs,
                       {"classes": len(recs), "vectors": signed, "mismatches": bad,
                        "without_fixpoint": open_}, cert, fail)


# -- 3: unconditionality and homogeneity ---------------------------------------


def _symmetry_job(args) -> JobResult:
    seed, count = args
    rng = random.Random(seed)
    eng = Engine(certify=True)
    scalars = [Fraction(p, q) for p in range(-5, 6) if p for q in range(1, 6)]
    out = []
    for _ in range(count):
        x = random_vectors(1, rng.randint(1, 8), rng.randrange(1 << 30))[0]
        flips = [i for i in x.support if rng.random() < 0.5]
        c = rng.choice(scalars)
        v = eng.norm(x)
        vf = eng.norm(x.flip(flips))
        vc = eng.norm(x.scale(c))
        out.append({"x": format_vector(x), "flips": flips, "scale": format_rat(c), "norm": format_rat(v),
                    "flipped": format_rat(vf), "scaled": format_rat(vc),
                    "ok": vf == v and vc == abs(c) * v})
    return _done(eng, out)


def suite_unconditional(threads=1, instances=500, seed=SEED) -> SuiteResult:
    jobs = [(_symmetry_job, (seed + k, 50)) for k in range(instances // 50)]
    recs, cert, fail = _merge(run_jobs(jobs, threads))
    bad = sum(not r["ok"] for r in recs)
    return SuiteResult(3, "unconditionality and homogeneity", bad == 0, recs,
                       {"instances": len(recs), "violations": bad}, cert, fail)


# -- 4, 5: blocking -------------------------------------------------------------


def _blocking_job(_args) -> JobResult:
    eng = Engine(certify=True)
    fl = make_seq(FLAT_BLOCKS, 5)
    y = combine([fl[3], fl[4], fl[5]], [1, 1, 1])
    t0 = time.perf_counter()
    res = norm(y)
    elapsed = time.perf_counter() - t0
    eng.best(y)  # certify through the shared path as well
    w = parse_tree(BLOCKING_WITNESS)
    rep = validate(w)
    wv = evaluate(w, y)
    rec = {"x": "y3+y4+y5", "value": format_rat(res.value), "witness": format_tree(res.witness),
           "stats": res.stats.to_dict(False), "explicit_witness": BLOCKING_WITNESS,
           "explicit_validate": str(rep), "explicit_value": format_rat(wv),
           "ok": res.value >= Fraction(3, 2) and rep.ok and wv == Fraction(3, 2) and elapsed < 300}
    return _done(eng, [rec])


def suite_l1_blocking(threads=1) -> SuiteResult:
    recs, cert, fail = _merge(run_jobs([(_blocking_job, None)], threads))
    return SuiteResult(4, "l1 blocking bound", recs[0]["ok"], recs,
                       {"value": recs[0]["value"], "explicit_value": recs[0]["explicit_value"]}, cert, fail)


def _c0_job(_args) -> JobResult:
    eng = Engine(certify=True)
    out = []
    for k in range(1, 5):
        x = combine([FinVec.basis(2 ** i) for i in range(1, k + 1)], [1] * k)
        v = eng.norm(x)
        out.append({"x": format_vector(x), "value": format_rat(v), "ok": 1 <= v <= 2})
    b = make_seq(BASIS, 12)
    sm = spreading_surrogate(b, [1] * 4, 2, eng)
    out.append({"x": "spreading basis k=4 spacing=2", **sm.to_dict(),
                "ok": sm.bounds_ok and 1 <= sm.value <= 2})
    return _done(eng, out)


def suite_c0(threads=1) -> SuiteResult:
    recs, cert, fail = _merge(run_jobs([(_c0_job, None)], threads))
    return SuiteResult(5, "c0 direction", all(r["ok"] for r in recs), recs,
                       {"value": recs[3]["value"]}, cert, fail)


# -- 6: alpha dichotomy ------------------------------------------------------------


def _basis_alpha_job(js) -> JobResult:
    eng = Engine(certify=True)
    out = []
    for j in js:
        for s in (2, 4, 8, 16):
            for n in (1, 2, 3):
                v = eng.value(FinVec.basis(j), SchClass(s, n))
                out.append({"row": "basis", "j": j, "s": s, "N": n, "value": format_rat(v),
                            "bound": format_rat(Fraction(1, 2 * s)), "ok": v <= Fraction(1, 2 * s)})
    return _done(eng, out)


def _flat_alpha_job(_args) -> JobResult:
    eng = Engine(certify=True)
    fl = make_seq(FLAT_BLOCKS, 5)
    sizes = (1, 2, 4, 8, 16)
    grid = [(s, n, t) for s in sizes for n in (1, 2, 3) for t in fl.indices if s <= len(fl[t].support)]
    prof = empirical_alpha_tilde(fl, grid, engine=eng)
    out = [{"row": "flat", "s_min": g.s_min, "N": g.max_len, "tail": g.tail_start, "value": format_rat(v),
            "bound": "1/2", "ok": v >= Fraction(1, 2)} for g, v in prof.grid]
    for t in fl.indices:
        for s in sizes:
            if s <= len(fl[t].support):
                for n in (1, 2, 3):
                    v = eng.value(fl[t], SchClass(s, n))
                    out.append({"row": "flat member", "s_min": s, "N": n, "tail": t, "value": format_rat(v),
                                "bound": "1/2", "ok": v >= Fraction(1, 2)})
    out.append({"row": "flat", "trend": prof.trend_label(), "ok": True})
    return _done(eng, out)


def suite_alpha(threads=1) -> SuiteResult:
    jobs = [(_basis_alpha_job, tuple(c)) for c in chunks(list(range(1, 41)), 10)] + [(_flat_alpha_job, None)]
    recs, cert, fail = _merge(run_jobs(jobs, threads))
    bad = sum(not r["ok"] for r in recs)
    return SuiteResult(6, "alpha dichotomy", bad == 0, recs, {"checks": len(recs), "violations": bad}, cert, fail)


# -- 7: averaging lemma ---------------------------------------------------------------


def _lemma_job(_args) -> JobResult:
    eng = Engine(certify=True)
    xs = [FinVec.basis(i) for i in range(1, 9)]
    rep = average_bound_check(xs, 8, 3, engine=eng)
    out = [{"route": "enumeration", "size": s, "sup": format_rat(v), "bound": format_rat(b), "ok": v <= b}
           for s, v, b in rep.per_size]
    out += [{"route": "engine", "size": s, "sup": format_rat(v), "bound": format_rat(b), "ok": v <= b}
            for s, v, b in rep.engine_route]
    out.append({"route": "summary", "tightest_size": rep.tightest[0], "slack": format_rat(rep.tightest[1]),
                "witness": format_tree(rep.witness), "ok": rep.ok})
    return _done(eng, out)


def suite_lemma(threads=1) -> SuiteResult:
    recs, cert, fail = _merge(run_jobs([(_lemma_job, None)], threads))
    bad = sum(not r["ok"] for r in recs)
    return SuiteResult(7, "averaging lemma", bad == 0, recs, {"violations": bad}, cert, fail)


# -- 8, 9: sandwich and symmetry ------------------------------------------------------


def family_rows(engine: Engine) -> dict:
    xs, ys = interleaved_pair(5)
    return {
        "basis": make_seq(BASIS, 12),
        "flat": make_seq(FLAT_BLOCKS, 5),
        "mix0": mix_seq(xs, ys, 0, engine),
        "mix1/2": mix_seq(xs, ys, Fraction(1, 2), engine),
        "mix1": mix_seq(xs, ys, 1, engine),
    }


def _sandwich_record(names, rep) -> dict:
    return {"rows": list(names), **rep.to_dict()}


def _sandwich_job(arrays) -> JobResult:
    eng = Engine(certify=True)
    rows = family_rows(eng)
    out = []
    for names in arrays:
        arr = SeqArray(tuple(rows[k] for k in names))
        out.append(_sandwich_record(names, sandwich_check(arr, EPS, eng)))
    return _done(eng, out)


def family_arrays(max_rows=3, min_rows=1) -> list[tuple[str, ...]]:
    return [c for n in range(min_rows, max_rows + 1) for c in itertools.product(FAMILY, repeat=n)]


def suite_sandwich(threads=1) -> SuiteResult:
    arrays = family_arrays()
    groups: dict[str, list] = {}
    for a in arrays:
        groups.setdefault(a[0], []).append(a)
    jobs = [(_sandwich_job, tuple(groups[k])) for k in FAMILY]
    recs, cert, fail = _merge(run_jobs(jobs, threads))
    bad = sum(not r["ok"] for r in recs)
    return SuiteResult(8, "sandwich suite", bad == 0 and len(recs) >= 12, recs,
                       {"arrays": len(recs), "failures": bad}, cert, fail)


def _symmetry_group_job(multiset) -> JobResult:
    eng = Engine(certify=True)
    rows = family_rows(eng)
    values = {}
    for order in sorted(set(itertools.permutations(multiset))):
        values[order] = sandwich_check(SeqArray(tuple(rows[k] for k in order)), EPS, eng).value
    out = []
    n = len(multiset)
    for order in sorted(values):
        for perm in itertools.permutations(range(n)):
            other = tuple(order[p] for p in perm)
            a, b = values[order], values[other]
            out.append({"rows": list(order), "perm": [p + 1 for p in perm], "A": format_rat(a),
                        "B": format_rat(b), "ratio": format_rat(a / b),
                        "ok": a <= 4 * b + EPS and b <= 4 * a + EPS})
    return _done(eng, out)


def suite_symmetry(threads=1) -> SuiteResult:
    multisets = [m for n in (2, 3) for m in itertools.combinations_with_replacement(FAMILY, n)]
    jobs = [(_symmetry_group_job, m) for m in multisets]
    parts = run_jobs(jobs, threads)
    recs, cert, fail = _merge(parts)
    # records come grouped by multiset; order them by array, then permutation
    key = {name: k for k, name in enumerate(FAMILY)}
    recs.sort(key=lambda r: (len(r["rows"]), [key[x] for x in r["rows"]], r["perm"]))
    bad = sum(not r["ok"] for r in recs)
    worst = max((Fraction(r["ratio"]) for r in recs), default=Fraction(0))
    return SuiteResult(9, "symmetry suite", bad == 0, recs,
                       {"checks": len(recs), "failures": bad, "max_ratio": format_rat(worst)}, cert, fail)


# -- assembly -------------------------------------------------------------------------

SUITES = {
    1: suite_oracle,
    3: suite_unconditional,
    4: suite_l1_blocking,
    5: suite_c0,
    6: suite_alpha,
    7: suite_lemma,
    8: suite_sandwich,
    9: suite_symmetry,
}


def certification_summary(results: list[SuiteResult]) -> SuiteResult:
    recs = [{"criterion": r.criterion, "certified": r.certified, "failures": r.failures} for r in results]
    cert = sum(r.certified for r in results)
    fail = sum(r.failures for r in results)
    return SuiteResult(2, "witness certification", fail == 0 and cert > 0, recs,
                       {"certified": cert, "failures": fail}, cert, fail)


def run_criteria(outdir, threads: int = 1, criteria=None, space: SpaceSpec = DEFAULT_SPACE) -> list[SuiteResult]:
    """Run the suites and write ``c<k>.jsonl`` plus ``summary.jsonl`` into ``outdir``.

    Only the default space is covered by the suites; ``space`` is recorded in
    the header. Wall times are kept out of the files.
    """
    if space != DEFAULT_SPACE:
        raise ValueError("the suites are defined for the default space")
    wanted = sorted(set(criteria or list(SUITES) + [2]))
    results = []
    for k in sorted(SUITES):
        if k in wanted or 2 in wanted:
            t0 = time.perf_counter()
            res = SUITES[k](threads=threads)
            res.seconds = time.perf_counter() - t0
            results.append(res)
    if 2 in wanted:
        results.append(certification_summary(results))
    results = [r for r in results if r.criterion in wanted]
    results.sort(key=lambda r: r.criterion)
    out = Path(outdir)
    for r in results:
        header = {"criterion": r.criterion, "title": r.title, "space": space.to_dict()}
        atomic_write(out / f"c{r.criterion}.jsonl", jsonl_text(header, r.records))
    summary = [{"criterion": r.criterion, "title": r.title, "pass": r.ok, **r.summary} for r in results]
    atomic_write(out / "summary.jsonl", jsonl_text(None, summary))
    return results
