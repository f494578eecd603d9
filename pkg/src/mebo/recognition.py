"""Randomized candidate-tree growth, scoring, boosting, and final selection.

A tree node carries the approximate enclosing-ball center of the points
along its root-to-node path.  Children are sampled from the k points
farthest from that center, so paths chase whatever the current center
fails to cover.  Every node contributes one candidate; the candidate
whose m nearest points have the smallest total variance wins.

Scoring one node costs O(n*d): squared distances come from the shared
expanded-form routine (one matrix-vector product), the very computation
the public selection ops run, so a node's split and top_k_farthest
agree bit for bit even on tied data.  That matters more than it looks:
a one-step ball center lands exactly mid-way between two points, which
ties their distances, and any second distance formula would break the
tie differently.  An introselect splits the distances at position m and
only the smaller side of the split is gathered to accumulate the inlier
sums; the other side follows from precomputed totals.  Pivot-distance
ties are detected by an exact strict-less count and resolved with the
public rule (lower index enters the top-k set).

Randomness: every node owns a stream keyed by (tree id, shifted path),
spawned from the user seed.  Growth is breadth first; a layer's nodes
are scored independently and children are drawn from per-node streams,
so worker threads change wall time only, never output.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import (
    Ball,
    Candidate,
    Dataset,
    DerivedParams,
    InvalidParamsError,
    Params,
    RecognitionResult,
    derive_params,
)
from .meb import approx_meb_center
from .selection import expanded_sq_dists, k_smallest_distance, top_k_farthest

__all__ = [
    "TreeNode",
    "make_node_rng",
    "expand_node",
    "grow_tree",
    "score_candidate",
    "boost_forest",
    "boost_sequential",
    "recognize",
]

# stream id for root selection; node streams start with a small tree id
_DRIVER_KEY = 0xFFFFFFFF

# nodes handed to a worker thread per task
_GROUP = 64


@dataclass(frozen=True)
class TreeNode:
    """One tree node: its path, depth, attached center, and rng identity."""

    path: tuple
    depth: int
    center: np.ndarray
    rng_stream: tuple


def make_node_rng(seed: int, rng_stream: tuple) -> np.random.Generator:
    """The random stream owned by a node, derived from the run seed."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=rng_stream)
    return np.random.default_rng(ss)


def node_stream_key(tree_id: int, path) -> tuple:
    """Stream identity for a node: tree id plus the path shifted by one.

    The shift keeps index 0 distinct from the reserved driver stream and
    from tree ids themselves.
    """
    return (tree_id,) + tuple(int(i) + 1 for i in path)


def _driver_rng(seed: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(_DRIVER_KEY,))
    return np.random.default_rng(ss)


class _FitContext:
    """Per-run precomputed arrays shared by every tree of a run."""

    def __init__(self, ds: Dataset):
        X = ds.points
        self.ds = ds
        self.X = X
        self.n, self.d = X.shape
        self.sqn = np.einsum("ij,ij->i", X, X)
        self.Sx = X.sum(axis=0)
        self.S_sqn = float(self.sqn.sum())
        self._ext = X  # extended with virtual root rows on demand

    def add_virtual(self, point: np.ndarray) -> int:
        idx = self._ext.shape[0]
        self._ext = np.vstack([self._ext, point[None, :]])
        return idx

    def path_points(self, path: np.ndarray) -> np.ndarray:
        return self._ext[path]


def _exact_split(ctx: _FitContext, d2s: np.ndarray, pivot: float, k: int):
    """Split one distance row exactly under the documented tie rule.

    Top-k takes strictly greater distances, then fills with pivot-tied
    indices lowest first; inliers are the complement.  Returns the
    inlier coordinate sum, the inlier squared-distance sum, and the
    top-k index set.
    """
    above = np.flatnonzero(d2s > pivot)
    need = k - above.shape[0]
    if need > 0:
        tied = np.flatnonzero(d2s == pivot)[:need]
        top = np.concatenate([above, tied])
    else:
        top = above
    mask = np.ones(ctx.n, dtype=bool)
    mask[top] = False
    in_idx = np.flatnonzero(mask)
    s1 = ctx.X[in_idx].sum(axis=0)
    return s1, float(d2s[in_idx].sum()), top


def _node_eval(ctx: _FitContext, c: np.ndarray, k: int, m: int, want_topk: bool):
    """Score one center; optionally return its top-k index set.

    The score is the total variance of the m points nearest to c,
    obtained from the inlier sums via mean|x-c|^2 - |centroid - c|^2.
    """
    cn = float(c @ c)
    topk = None
    if k == 0:
        s1 = ctx.Sx
        sum_d2 = ctx.S_sqn - 2.0 * float(ctx.Sx @ c) + ctx.n * cn
    else:
        d2s = expanded_sq_dists(ctx.X, ctx.sqn, c)
        idx = np.argpartition(d2s, m)
        pivot = float(d2s[idx[m]])
        nless = int((d2s < pivot).sum())
        if nless != m:  # pivot value straddles the split
            s1, sum_d2, topk = _exact_split(ctx, d2s, pivot, k)
        elif m <= k:
            inl = idx[:m]
            s1 = ctx.X[inl].sum(axis=0)
            sum_d2 = float(d2s[inl].sum())
            if want_topk:
                topk = idx[m:]
        else:
            out = idx[m:]
            s1 = ctx.Sx - ctx.X[out].sum(axis=0)
            total = ctx.S_sqn - 2.0 * float(ctx.Sx @ c) + ctx.n * cn
            sum_d2 = total - float(d2s[out].sum())
            if want_topk:
                topk = idx[m:]
    cent = s1 / m
    dd = cent - c
    score = sum_d2 / m - float(dd @ dd)
    return (score if score > 0.0 else 0.0), topk


def _grow(ctx: _FitContext, p: Params, dp: DerivedParams, root, tree_id: int,
          executor) -> list:
    """Grow one tree breadth first; every node becomes a Candidate."""
    n = ctx.n
    iters = p.meb_iter_count
    if isinstance(root, (int, np.integer)):
        aug_root = int(root)
    else:
        aug_root = ctx.add_virtual(np.asarray(root, dtype=np.float64))
    layer = [np.array([aug_root], dtype=np.int64)]
    candidates = []
    for depth in range(1, dp.h + 1):
        internal = depth < dp.h and dp.k > 0

        def eval_group(paths):
            out = []
            for path in paths:
                c = approx_meb_center(ctx.path_points(path), iters)
                out.append((c,) + _node_eval(ctx, c, dp.k, dp.m, internal))
            return out

        groups = [layer[j:j + _GROUP] for j in range(0, len(layer), _GROUP)]
        if executor is not None and len(groups) > 1:
            evals = [e for grp in executor.map(eval_group, groups) for e in grp]
        else:
            evals = eval_group(layer)

        next_layer = []
        for path, (c, score, topk) in zip(layer, evals):
            real = tuple(int(i) for i in path if i < n)
            candidates.append(Candidate(center=c, path=real, score=score))
            if not internal:
                continue
            pool_mask = np.zeros(n, dtype=bool)
            pool_mask[topk] = True
            pool_mask[path[path < n]] = False  # paths never repeat a point
            pool = np.flatnonzero(pool_mask)
            take = min(dp.s, pool.shape[0])
            if take == 0:
                continue
            rng = make_node_rng(p.seed, node_stream_key(tree_id, path))
            chosen = rng.choice(pool, size=take, replace=False)
            for child in chosen:
                next_layer.append(np.append(path, child))
        if not internal or not next_layer:
            break
        layer = next_layer
    return candidates


def expand_node(ds: Dataset, node: TreeNode, dp: DerivedParams,
                rng: np.random.Generator, *, meb_iters: int = 1) -> list:
    """Children of one node: sample s indices from its top-k set.

    Indices already on the path are excluded so paths never repeat a
    point; the sample size is capped by what remains.  Child centers
    are recomputed over the extended path.
    """
    if node.depth >= dp.h or dp.k == 0:
        return []
    topk, _ = top_k_farthest(ds, node.center, dp.k)
    pool = np.setdiff1d(topk, np.asarray(node.path, dtype=np.int64))
    take = min(dp.s, pool.shape[0])
    if take == 0:
        return []
    chosen = rng.choice(pool, size=take, replace=False)
    tree_id = node.rng_stream[0] if node.rng_stream else 0
    children = []
    for c_idx in chosen:
        cpath = node.path + (int(c_idx),)
        center = approx_meb_center(ds.points[np.array(cpath)], meb_iters)
        children.append(TreeNode(path=cpath, depth=node.depth + 1, center=center,
                                 rng_stream=node_stream_key(tree_id, cpath)))
    return children


def grow_tree(ds: Dataset, p: Params, root_index: int, *, tree_id: int = 0,
              derived: DerivedParams | None = None, threads: int = 1) -> list:
    """All candidates of one tree rooted at a dataset point."""
    if not (0 <= root_index < ds.n):
        raise InvalidParamsError(f"root_index must be in [0, {ds.n}), got {root_index}")
    dp = derived if derived is not None else derive_params(p, ds.n)
    ctx = _FitContext(ds)
    with _executor(threads) as ex:
        return _grow(ctx, p, dp, int(root_index), tree_id, ex)


class _NullExecutor:
    def __enter__(self):
        return None

    def __exit__(self, *exc):
        return False


def _executor(threads: int):
    if threads and threads > 1:
        return ThreadPoolExecutor(max_workers=threads)
    return _NullExecutor()


def score_candidate(ds: Dataset, center, m: int):
    """Total variance of the m dataset points nearest to center.

    Returns (score, inliers).  The inliers are the complement of the
    top-(n-m) farthest set under the documented tie rule, reported in
    ascending index order.  The score is the mean squared distance of
    those points to their own centroid (trace of their covariance),
    computed in a plain two-pass fashion.
    """
    if not (1 <= m <= ds.n):
        raise InvalidParamsError(f"m must be in [1, {ds.n}], got {m}")
    c = np.asarray(center, dtype=np.float64)
    if m == ds.n:
        inliers = np.arange(ds.n)
    else:
        top, _ = top_k_farthest(ds, c, ds.n - m)
        mask = np.ones(ds.n, dtype=bool)
        mask[top] = False
        inliers = np.flatnonzero(mask)
    pts = ds.points[inliers]
    centroid = pts.mean(axis=0)
    diff = pts - centroid
    score = float(np.einsum("ij,ij->i", diff, diff).mean())
    return score, inliers


def boost_forest(ds: Dataset, p: Params, *, threads: int = 1,
                 derived: DerivedParams | None = None) -> list:
    """Candidates of forest_size trees grown from distinct random roots."""
    dp = derived if derived is not None else derive_params(p, ds.n)
    ctx = _FitContext(ds)
    driver = _driver_rng(p.seed)
    size = min(p.forest_size, ds.n)
    roots = driver.choice(ds.n, size=size, replace=False)
    out = []
    with _executor(threads) as ex:
        for t, r in enumerate(roots):
            out.extend(_grow(ctx, p, dp, int(r), t, ex))
    return out


def _best_index(candidates) -> int:
    return min(range(len(candidates)), key=lambda i: candidates[i].score)


def boost_sequential(ds: Dataset, p: Params, rounds: int, *, threads: int = 1,
                     derived: DerivedParams | None = None) -> list:
    """Sequential boosting: each round re-roots at the best center so far.

    Round 1 grows from a random dataset point.  Later rounds root at the
    minimum-score candidate center found so far, treated as a virtual
    point that participates in every path's ball computation but never
    appears among reported path indices.
    """
    if rounds < 1:
        raise InvalidParamsError(f"rounds must be >= 1, got {rounds}")
    dp = derived if derived is not None else derive_params(p, ds.n)
    ctx = _FitContext(ds)
    driver = _driver_rng(p.seed)
    root0 = int(driver.choice(ds.n, size=1, replace=False)[0])
    with _executor(threads) as ex:
        out = _grow(ctx, p, dp, root0, 0, ex)
        for j in range(1, rounds):
            best = out[_best_index(out)]
            out.extend(_grow(ctx, p, dp, best.center, j, ex))
    return out


def recognize(ds: Dataset, p: Params, *, threads: int = 1,
              derived: DerivedParams | None = None) -> RecognitionResult:
    """Full pipeline: forest boosting, sequential rounds, winner selection.

    Deterministic given p (seed included): the winner is the first
    candidate attaining the minimum score, its ball radius is the
    distance to its m-th nearest point, and its inlier set and score
    are re-derived with the public scoring op.
    """
    dp = derived if derived is not None else derive_params(p, ds.n)
    ctx = _FitContext(ds)
    driver = _driver_rng(p.seed)
    size = min(p.forest_size, ds.n)
    roots = driver.choice(ds.n, size=size, replace=False)
    cands = []
    with _executor(threads) as ex:
        for t, r in enumerate(roots):
            cands.extend(_grow(ctx, p, dp, int(r), t, ex))
        for j in range(p.sequential_rounds):
            best = cands[_best_index(cands)]
            cands.extend(_grow(ctx, p, dp, best.center, size + j, ex))
    winner = cands[_best_index(cands)]
    score, inliers = score_candidate(ds, winner.center, dp.m)
    radius = k_smallest_distance(ds, winner.center, dp.m)
    ball = Ball(center=np.array(winner.center, dtype=np.float64), radius=radius)
    return RecognitionResult(ball=ball, inliers=inliers,
                             candidates_evaluated=len(cands), score=score)
