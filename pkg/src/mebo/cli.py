"""Command line front end.

Subcommands: gen (synthetic datasets), fit (one ball), multifit
(greedy multi-class peeling), eval (F1 against labels), bench (timing
grid).  Points files are headerless CSV, one point per row; labels
files hold one integer per row (0 = outlier, j >= 1 = class j).

Results are JSON with sorted keys, so identical flags yield byte
identical output; wall-clock milliseconds go to stderr to keep it so.
Exit codes: 0 success, 1 validation or parse errors, 2 I/O errors.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
from pathlib import Path

import numpy as np

from .core import Dataset, MeboError, Params, derive_params
from .metrics import f1
from .multiclass import ClassSpec, peel
from .recognition import recognize, score_candidate
from .synth import gen_highdim, gen_multiclass, gen_toy_2d

__all__ = ["main", "entry", "cmd_gen", "cmd_fit", "cmd_multifit", "cmd_eval", "cmd_bench"]


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    # exit 2 means an I/O failure here; flag validation must exit 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- I/O


def _scan_csv(path: str, text: str, cast):
    """Slow-path parser producing positional diagnostics (1-based)."""
    rows = []
    width = None
    for i, line in enumerate(text.splitlines()):
        if not line.strip():
            continue
        cells = line.split(",")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise _Fail(1, f"{path}: row {i + 1} has {len(cells)} columns, expected {width}")
        vals = []
        for j, cell in enumerate(cells):
            try:
                vals.append(cast(cell))
            except ValueError:
                raise _Fail(1, f"{path}: row {i + 1}, column {j + 1}: "
                               f"not a valid number: {cell.strip()!r}") from None
        rows.append(vals)
    if not rows:
        raise _Fail(1, f"{path}: no data rows")
    return np.array(rows)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _Fail(2, f"{path}: {exc.strerror or exc}") from None


def _load_points(path: str) -> np.ndarray:
    text = _read_text(path)
    if not text.strip():
        # loadtxt quietly returns a 0-row array here, hiding the real problem
        raise _Fail(1, f"{path}: no data rows")
    try:
        return np.loadtxt(text.splitlines(), delimiter=",", ndmin=2)
    except ValueError:
        return _scan_csv(path, text, float)


def _load_labels(path: str) -> np.ndarray:
    text = _read_text(path)
    if not text.strip():
        raise _Fail(1, f"{path}: no data rows")
    try:
        return np.loadtxt(text.splitlines(), delimiter=",", dtype=np.int64, ndmin=1)
    except ValueError:
        def cast(cell):
            return int(cell.strip())
        return _scan_csv(path, text, cast).ravel()


def _write_text(path, text: str):
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise _Fail(2, f"{path}: {exc.strerror or exc}") from None


def _emit(args, text: str):
    if getattr(args, "out", None):
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ------------------------------------------------------------- params


def _add_model_flags(sp, gamma_required=True, gamma_default=None,
                     forest_default=4, rounds_default=2):
    sp.add_argument("--gamma", type=float, required=gamma_required,
                    default=gamma_default, help="outlier ratio in [0, 1)")
    sp.add_argument("--epsilon", type=float, default=0.8, help="radius slack")
    sp.add_argument("--delta", type=float, default=0.15, help="coverage slack")
    sp.add_argument("--mu", type=float, default=0.9, help="per-tree failure bound")
    sp.add_argument("--meb-iters", type=int, default=None, dest="meb_iters",
                    help="center iterations per node (default ceil(1/epsilon^2))")
    sp.add_argument("--forest", type=int, default=forest_default,
                    help="number of independently rooted trees")
    sp.add_argument("--rounds", type=int, default=rounds_default,
                    help="sequential re-rooting rounds after the forest")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=1,
                    help="worker threads (results are identical to serial)")


def _params_from(args) -> Params:
    try:
        return Params(gamma=args.gamma, epsilon=args.epsilon, delta=args.delta,
                      mu=args.mu, meb_iters=args.meb_iters, forest_size=args.forest,
                      sequential_rounds=args.rounds, seed=args.seed)
    except MeboError as exc:
        raise _Fail(1, str(exc)) from None


def _echo(p: Params, n: int) -> dict:
    dp = derive_params(p, n)
    return {
        "gamma": p.gamma,
        "epsilon": p.epsilon,
        "delta": p.delta,
        "mu": p.mu,
        "meb_iters": p.meb_iter_count,
        "forest_size": p.forest_size,
        "sequential_rounds": p.sequential_rounds,
        "seed": p.seed,
        "derived": {"h": dp.h, "k": dp.k, "s": dp.s, "m": dp.m},
    }


def _parse_fractions(text: str) -> tuple:
    try:
        fr = tuple(float(c) for c in text.split(","))
    except ValueError:
        raise _Fail(1, f"bad fractions list: {text!r}") from None
    return fr


def _parse_int_list(text: str, flag: str) -> list:
    try:
        return [int(c) for c in text.split(",")]
    except ValueError:
        raise _Fail(1, f"bad {flag} list: {text!r}") from None


# ----------------------------------------------------------- commands


def cmd_gen(args) -> int:
    if args.kind == "toy2d":
        ds, labels = gen_toy_2d(args.seed)
    elif args.kind == "highdim":
        try:
            ds, labels = gen_highdim(args.n, args.d, args.gamma, args.seed)
        except MeboError as exc:
            raise _Fail(1, str(exc)) from None
    else:
        fr = _parse_fractions(args.fractions)
        try:
            ds, labels = gen_multiclass(args.n, args.d, fr, args.gamma, args.seed)
        except MeboError as exc:
            raise _Fail(1, str(exc)) from None
    out = Path(args.out)
    labels_path = out.with_name(out.stem + ".labels" + (out.suffix or ".csv"))
    try:
        np.savetxt(out, ds.points, fmt="%.10g", delimiter=",")
        np.savetxt(labels_path, labels, fmt="%d")
    except OSError as exc:
        raise _Fail(2, f"{exc.filename or args.out}: {exc.strerror or exc}") from None
    print(f"wrote {out} ({ds.n} rows) and {labels_path}", file=sys.stderr)
    return 0


def _fit_common(args):
    X = _load_points(args.points)
    p = _params_from(args)
    try:
        ds = Dataset(X)
        derive_params(p, ds.n)
    except MeboError as exc:
        raise _Fail(1, str(exc)) from None
    return ds, p


def cmd_fit(args) -> int:
    ds, p = _fit_common(args)
    t0 = time.perf_counter()
    try:
        res = recognize(ds, p, threads=args.threads)
    except MeboError as exc:
        raise _Fail(1, str(exc)) from None
    millis = (time.perf_counter() - t0) * 1e3
    doc = {
        "center": [float(x) for x in res.ball.center],
        "radius": float(res.ball.radius),
        "inliers": [int(i) for i in res.inliers],
        "score": float(res.score),
        "candidates_evaluated": int(res.candidates_evaluated),
        "params_echo": _echo(p, ds.n),
    }
    print(f"millis={millis:.3f}", file=sys.stderr)
    _emit(args, _dump_json(doc))
    return 0


def cmd_multifit(args) -> int:
    ds, p = _fit_common(args)
    spec_fr = _parse_fractions(args.fractions)
    try:
        spec = ClassSpec(fractions=spec_fr)
    except MeboError as exc:
        raise _Fail(1, str(exc)) from None
    t0 = time.perf_counter()
    try:
        fitted = peel(ds, spec, p, threads=args.threads)
    except MeboError as exc:
        raise _Fail(1, str(exc)) from None
    millis = (time.perf_counter() - t0) * 1e3
    classes = []
    for ball, covered in fitted:
        sub = Dataset(ds.points[covered])
        score, _ = score_candidate(sub, ball.center, sub.n)
        classes.append({
            "center": [float(x) for x in ball.center],
            "radius": float(ball.radius),
            "inliers": [int(i) for i in covered],
            "score": float(score),
            "size": int(covered.shape[0]),
        })
    doc = {
        "classes": classes,
        "fractions": list(spec.fractions),
        "params_echo": _echo(p, ds.n),
    }
    print(f"millis={millis:.3f}", file=sys.stderr)
    _emit(args, _dump_json(doc))
    return 0


def _match_classes(result_classes, labels):
    """Greedily pair each fitted class with the unused true class of
    largest overlap; deterministic (ties break on the smaller label)."""
    true_sets = {}
    for lab in np.unique(labels):
        if lab >= 1:
            true_sets[int(lab)] = np.flatnonzero(labels == lab)
    used = set()
    pairs = []
    for rec in result_classes:
        pred = np.asarray(rec["inliers"], dtype=np.int64)
        best_lab, best_hit = None, -1
        for lab in sorted(true_sets):
            if lab in used:
                continue
            hit = np.intersect1d(pred, true_sets[lab]).size
            if hit > best_hit:
                best_lab, best_hit = lab, hit
        if best_lab is not None:
            used.add(best_lab)
        pairs.append((pred, best_lab))
    return pairs, true_sets


def cmd_eval(args) -> int:
    text = _read_text(args.result)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _Fail(1, f"{args.result}: bad JSON: {exc}") from None
    labels = _load_labels(args.labels)
    n = labels.shape[0]
    if "classes" in doc:
        pairs, true_sets = _match_classes(doc["classes"], labels)
        per_class = []
        scores = []
        for pred, lab in pairs:
            true = true_sets.get(lab, np.empty(0, dtype=np.int64))
            r = f1(pred, true, n)
            per_class.append({
                "matched_label": lab,
                "precision": r.precision,
                "recall": r.recall,
                "f1": r.f1,
            })
            scores.append(r.f1)
        out = {
            "classes": per_class,
            "average_f1": sum(scores) / len(scores),
            "n": int(n),
        }
    else:
        pred = doc.get("inliers", [])
        true = np.flatnonzero(labels >= 1)
        r = f1(pred, true, n)
        out = {
            "precision": r.precision,
            "recall": r.recall,
            "f1": r.f1,
            "empty_prediction": r.empty_prediction,
            "predicted_count": int(np.unique(np.asarray(pred, dtype=np.int64)).size),
            "true_count": int(true.size),
            "n": int(n),
        }
    _emit(args, _dump_json(out))
    return 0


def cmd_bench(args) -> int:
    sizes = _parse_int_list(args.sizes, "--sizes")
    dims = _parse_int_list(args.dims, "--dims")
    if args.runs < 1 or args.warmup < 0:
        raise _Fail(1, "--runs must be >= 1 and --warmup >= 0")
    p = _params_from(args)
    lines = ["n,d,runs,median_ms"]
    for n in sizes:
        for d in dims:
            try:
                ds, _ = gen_highdim(n, d, p.gamma, p.seed)
                derive_params(p, ds.n)
            except MeboError as exc:
                raise _Fail(1, str(exc)) from None
            for _ in range(args.warmup):
                recognize(ds, p, threads=args.threads)
            times = []
            for _ in range(args.runs):
                t0 = time.perf_counter()
                recognize(ds, p, threads=args.threads)
                times.append((time.perf_counter() - t0) * 1e3)
            med = statistics.median(times)
            lines.append(f"{n},{d},{args.runs},{med:.3f}")
            print(f"bench n={n} d={d} median_ms={med:.3f}", file=sys.stderr)
    _emit(args, "\n".join(lines) + "\n")
    return 0


# ------------------------------------------------------------- parser


def _build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="mebo", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a synthetic dataset and its labels")
    g.add_argument("kind", choices=["toy2d", "highdim", "multiclass"])
    g.add_argument("--n", type=int, default=20000)
    g.add_argument("--d", type=int, default=100)
    g.add_argument("--gamma", type=float, default=0.2)
    g.add_argument("--fractions", type=str, default="0.3,0.3,0.3",
                   help="comma-separated class fractions (multiclass)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, help="points CSV path; labels go beside it")
    g.set_defaults(fn=cmd_gen)

    f = sub.add_parser("fit", help="fit one ball and report its inliers")
    f.add_argument("points", help="points CSV")
    _add_model_flags(f)
    f.add_argument("--out", default=None, help="result JSON path (default stdout)")
    f.set_defaults(fn=cmd_fit)

    mf = sub.add_parser("multifit", help="peel one ball per class")
    mf.add_argument("points", help="points CSV")
    mf.add_argument("--fractions", required=True,
                    help="comma-separated per-class inlier fractions")
    _add_model_flags(mf)
    mf.add_argument("--out", default=None)
    mf.set_defaults(fn=cmd_multifit)

    e = sub.add_parser("eval", help="score a fit result against labels")
    e.add_argument("result", help="result JSON from fit or multifit")
    e.add_argument("labels", help="labels CSV")
    e.add_argument("--out", default=None)
    e.set_defaults(fn=cmd_eval)

    b = sub.add_parser("bench", help="time fits over an (n, d) grid")
    b.add_argument("--sizes", default="5000,10000,20000,40000")
    b.add_argument("--dims", default="50")
    b.add_argument("--runs", type=int, default=5)
    b.add_argument("--warmup", type=int, default=1)
    _add_model_flags(b, gamma_required=False, gamma_default=0.2,
                     forest_default=1, rounds_default=0)
    b.add_argument("--out", default=None, help="timing CSV path (default stdout)")
    b.set_defaults(fn=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except _Fail as exc:
        print(f"mebo: error: {exc}", file=sys.stderr)
        return exc.code
    except MeboError as exc:
        print(f"mebo: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"mebo: error: {exc}", file=sys.stderr)
        return 2


def entry():
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entry()
