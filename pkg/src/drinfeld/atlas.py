"""Stratification atlases: nodes, closure order, and point counts.

An atlas for one of the three varieties holds the stratum keys (subspaces
for P and Q, flags for B), the closure relation between strata, and the
number of points in each stratum over every requested extension k_m.
Counts always come from full enumeration plus classification; closed
formulas only ever appear as cross-checks in the test suites.

Exports are byte-deterministic: identical inputs give identical bytes,
independent of the worker count used for counting.
"""

import json
import os
from concurrent.futures import ProcessPoolExecutor

from .field import FieldCtx
from .linalg import all_subspaces, enumerate_flags, flag_leq
from .points import (
    b_classify,
    b_enumerate_flag,
    enumerate_functionals,
    flag_str,
    p_classify,
    q_classify,
    q_enumerate_stratum,
    subspace_str,
    PPoint,
)

SCHEMA_VERSION = 1
VARIETIES = ("P", "Q", "B")

_MAX_POINTS = 200_000


class StrataAtlas:
    """Stratification data for one variety at fixed (q, n+1).

    nodes: list of (key string, stratum dimension index) in canonical order.
    closure: list of key-string pairs (a, b) with stratum b contained in the
    closure of stratum a.  counts: {m: {key string: count}}.
    """

    def __init__(self, variety, ctx, n_plus_1, nodes, closure, counts):
        self.variety = variety
        self.ctx = ctx
        self.n_plus_1 = n_plus_1
        self.nodes = nodes
        self.closure = closure
        self.counts = counts

    @property
    def q(self):
        return self.ctx.q

    @property
    def n(self):
        return self.n_plus_1 - 1

    def total(self, m):
        return sum(self.counts[m].values())


def _node_objects(variety, n_plus_1, ctx):
    if variety == "P":
        return all_subspaces(n_plus_1, ctx, include_zero=True, include_full=False)
    if variety == "Q":
        return all_subspaces(n_plus_1, ctx, include_zero=False, include_full=True)
    if variety == "B":
        return enumerate_flags(n_plus_1, ctx)
    raise ValueError(f"unknown variety {variety!r}")


def _node_key(variety, node, ctx):
    return flag_str(node, ctx) if variety == "B" else subspace_str(node, ctx)


def _dim_index(variety, node, n_plus_1):
    if variety == "P":
        return n_plus_1 - 1 - node.dim
    if variety == "Q":
        return node.dim - 1
    return n_plus_1 - 1 - len(node.members)


def _closure_pairs(variety, nodes):
    "Irreflexive pairs (a, b) with stratum b inside the closure of stratum a."
    out = []
    for a in nodes:
        for b in nodes:
            if a == b:
                continue
            if variety == "P":
                inside = b.contains(a)
            elif variety == "Q":
                inside = a.contains(b)
            else:
                inside = flag_leq(a, b)
            if inside:
                out.append((a, b))
    return out


def _estimated_points(variety, n_plus_1, q, m):
    return (q ** (m * n_plus_1) - 1) // (q**m - 1)


# --- counting workers -------------------------------------------------------

_WORKER = {}


def _worker_init(params):
    p, e, D, modulus, variety, n_plus_1 = params
    ctx = FieldCtx(p, e, D, modulus)
    _WORKER["ctx"] = ctx
    _WORKER["variety"] = variety
    _WORKER["n_plus_1"] = n_plus_1
    _WORKER["strata"] = _node_objects(variety, n_plus_1, ctx)


def _count_task(task):
    "Classify one slice of the enumeration; returns {key string: count}."
    m, index, lo, hi = task
    ctx = _WORKER["ctx"]
    variety = _WORKER["variety"]
    n_plus_1 = _WORKER["n_plus_1"]
    counts = {}
    if variety == "P":
        funcs = enumerate_functionals(n_plus_1, ctx, m)[lo:hi]
        for coords in funcs:
            key = subspace_str(p_classify(PPoint(ctx, coords)), ctx)
            counts[key] = counts.get(key, 0) + 1
    elif variety == "Q":
        sub = _WORKER["strata"][index]
        for x in q_enumerate_stratum(sub, ctx, m):
            key = subspace_str(q_classify(x), ctx)
            counts[key] = counts.get(key, 0) + 1
    else:
        flag = _WORKER["strata"][index]
        for x in b_enumerate_flag(flag, ctx, m):
            key = flag_str(b_classify(x), ctx)
            counts[key] = counts.get(key, 0) + 1
    return counts


def _tasks_for(variety, n_plus_1, ctx, m):
    if variety == "P":
        total = _estimated_points(variety, n_plus_1, ctx.q, m)
        step = 512
        return [(m, 0, lo, min(lo + step, total)) for lo in range(0, total, step)]
    strata = _node_objects(variety, n_plus_1, ctx)
    return [(m, i, 0, 0) for i in range(len(strata))]


def count_stratum_points(variety, n_plus_1, ctx, m, jobs=1):
    "Counts per stratum key over k_m by enumeration + classification."
    if _estimated_points(variety, n_plus_1, ctx.q, m) > _MAX_POINTS:
        raise ValueError("point count exceeds the desk-scale bound")
    params = (ctx.p, ctx.e, ctx.D, ctx.modulus, variety, n_plus_1)
    tasks = _tasks_for(variety, n_plus_1, ctx, m)
    results = []
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(
            max_workers=jobs, initializer=_worker_init, initargs=(params,)
        ) as pool:
            results = list(pool.map(_count_task, tasks))
    else:
        _worker_init(params)
        results = [_count_task(t) for t in tasks]
    merged = {}
    for part in results:
        for key, n in part.items():
            merged[key] = merged.get(key, 0) + n
    return merged


# --- cache ------------------------------------------------------------------


def _cache_path(cache_dir, variety, ctx, n_plus_1, m):
    name = f"{variety}_q{ctx.q}_n{n_plus_1 - 1}_m{m}.json"
    return os.path.join(cache_dir, name)


def _cache_load(cache_dir, variety, ctx, n_plus_1, m):
    path = _cache_path(cache_dir, variety, ctx, n_plus_1, m)
    if not os.path.exists(path):
        return None
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError):
        return None
    expected = {
        "schema_version": SCHEMA_VERSION,
        "variety": variety,
        "p": ctx.p,
        "e": ctx.e,
        "q": ctx.q,
        "n": n_plus_1 - 1,
        "m": m,
        "modulus": list(ctx.modulus),
    }
    if any(obj.get(k) != v for k, v in expected.items()):
        return None
    return obj.get("counts")


def _cache_store(cache_dir, variety, ctx, n_plus_1, m, counts):
    os.makedirs(cache_dir, exist_ok=True)
    obj = {
        "schema_version": SCHEMA_VERSION,
        "variety": variety,
        "p": ctx.p,
        "e": ctx.e,
        "q": ctx.q,
        "n": n_plus_1 - 1,
        "m": m,
        "modulus": list(ctx.modulus),
        "counts": counts,
    }
    path = _cache_path(cache_dir, variety, ctx, n_plus_1, m)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


# --- building and exporting -------------------------------------------------


def build_atlas(variety, n_plus_1, ctx, m_list, jobs=1, cache_dir=None, use_cache=True):
    """Assemble the atlas: stratum nodes, closure pairs, per-m counts.

    The cache (one JSON file per variety/q/n/m under cache_dir) is an
    optimization only; counts are recomputed whenever it is absent, stale,
    or disabled.
    """
    if variety not in VARIETIES:
        raise ValueError(f"variety must be one of {VARIETIES}")
    node_objs = _node_objects(variety, n_plus_1, ctx)
    nodes = [
        (_node_key(variety, s, ctx), _dim_index(variety, s, n_plus_1))
        for s in node_objs
    ]
    key_of = {s: k for s, (k, _) in zip(node_objs, nodes)}
    closure = sorted(
        (key_of[a], key_of[b]) for a, b in _closure_pairs(variety, node_objs)
    )
    counts = {}
    for m in m_list:
        cached = None
        if use_cache and cache_dir:
            cached = _cache_load(cache_dir, variety, ctx, n_plus_1, m)
        if cached is None:
            raw = count_stratum_points(variety, n_plus_1, ctx, m, jobs=jobs)
            if use_cache and cache_dir:
                _cache_store(cache_dir, variety, ctx, n_plus_1, m, raw)
        else:
            raw = cached
        counts[m] = {key: raw.get(key, 0) for key, _ in nodes}
    return StrataAtlas(variety, ctx, n_plus_1, nodes, closure, counts)


def transitive_reduction(nodes, pairs):
    "Cover pairs of a finite partial order given as irreflexive pairs."
    pairset = set(pairs)
    keys = [k for k, _ in nodes]
    covers = []
    for a, b in pairs:
        if any((a, c) in pairset and (c, b) in pairset for c in keys):
            continue
        covers.append((a, b))
    return covers


def atlas_to_obj(atlas):
    return {
        "variety": atlas.variety,
        "q": atlas.q,
        "n": atlas.n,
        "strata": [
            {
                "key": key,
                "dim_ambient_index": dim,
                "counts": {str(m): atlas.counts[m][key] for m in sorted(atlas.counts)},
            }
            for key, dim in atlas.nodes
        ],
        "closure": [list(pair) for pair in atlas.closure],
    }


def _dot_escape(s):
    return s.replace("\\", "\\\\").replace('"', '\\"')


def export(atlas, fmt):
    "Serialize the atlas to bytes: 'json', 'dot' (Hasse diagram) or 'text'."
    if fmt == "json":
        body = json.dumps(atlas_to_obj(atlas), sort_keys=True, separators=(",", ":"))
        return (body + "\n").encode("utf-8")
    if fmt == "dot":
        covers = transitive_reduction(atlas.nodes, atlas.closure)
        lines = [f"digraph {atlas.variety}_strata {{", "  rankdir=BT;"]
        for key, dim in atlas.nodes:
            label = _dot_escape(f"{key} (dim {dim})")
            lines.append(f'  "{_dot_escape(key)}" [label="{label}"];')
        for a, b in sorted(covers):
            lines.append(f'  "{_dot_escape(a)}" -> "{_dot_escape(b)}";')
        lines.append("}")
        return ("\n".join(lines) + "\n").encode("utf-8")
    if fmt == "text":
        ms = sorted(atlas.counts)
        header = ["stratum", "dim"] + [f"count(m={m})" for m in ms]
        rows = [header]
        for key, dim in atlas.nodes:
            rows.append([key, str(dim)] + [str(atlas.counts[m][key]) for m in ms])
        totals = ["total", ""] + [str(atlas.total(m)) for m in ms]
        rows.append(totals)
        widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
        lines = [
            f"{atlas.variety} strata over GF({atlas.q}), dim V = {atlas.n_plus_1},"
            f" {len(atlas.nodes)} strata, {len(atlas.closure)} closure pairs"
        ]
        for r in rows:
            lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")
