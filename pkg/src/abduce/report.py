"""Benchmark harness: run a manifest of problems, tabulate and plot.

The report follows the shape of time-to-first-implicate tables: each
problem and size limit lands in a half-open time bucket, with "none"
for runs that produced nothing inside the budget. Figures are rendered
headless to PNG next to the CSV output.
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor

from .abducibles import generate, literal_order_key, load_file
from .core import AbduceError, LiteralTable
from .engine import Always, SearchConfig, SizeLimit, run_search
from .oracle import open_session, resolve_backend
from .problem import load_problem
from .store import ImplicateStore

BUCKETS = [(0.0, 0.5), (0.5, 1.0), (1.0, 1.5), (1.5, 2.0), (2.0, 5.0),
           (5.0, 10.0), (10.0, 35.0)]


def bucket_label(first_s):
    if first_s is None:
        return "none"
    for lo, hi in BUCKETS:
        if lo <= first_s < hi:
            return "[%g,%g)" % (lo, hi)
    return "none"


def bucket_labels():
    return ["[%g,%g)" % (lo, hi) for lo, hi in BUCKETS] + ["none"]


_DEFAULTS = {
    "backend": None,
    "timeout": 35.0,
    "query_timeout": 5.0,
    "depth": 1,
    "ineq": False,
    "abducibles": None,
    "algorithm": "imp",
    "size_limits": [1],
    "max_implicates": None,
}


def load_manifest(path):
    with open(path) as f:
        data = json.load(f)
    if not isinstance(data, dict) or "problems" not in data:
        raise ValueError("manifest must be an object with a 'problems' list")
    base = dict(_DEFAULTS)
    base.update(data.get("defaults", {}))
    root = os.path.dirname(os.path.abspath(path))
    jobs = []
    for i, entry in enumerate(data["problems"]):
        if not isinstance(entry, dict) or "path" not in entry:
            raise ValueError("problem %d: need at least a 'path'" % i)
        job = dict(base)
        job.update(entry)
        job["path"] = os.path.join(root, job["path"])
        if job.get("abducibles"):
            job["abducibles"] = os.path.join(root, job["abducibles"])
        job.setdefault("name", os.path.basename(job["path"]))
        jobs.append(job)
    return jobs


def _run_one(job, size_limit):
    row = {
        "name": job["name"],
        "path": job["path"],
        "size_limit": size_limit,
        "status": "ok",
        "error": "",
        "implicates": 0,
        "first_implicate_s": None,
        "total_s": 0.0,
        "bucket": "none",
    }
    try:
        problem = load_problem(job["path"])
        table = LiteralTable()
        config = resolve_backend(job["backend"])
        config.query_timeout = job["query_timeout"]
        with open_session(problem, table, config, bare=True) as seed:
            if job["abducibles"]:
                abducibles = load_file(job["abducibles"], table,
                                       problem=problem, session=seed)
            else:
                abducibles = generate(problem, table, job["depth"],
                                      include_inequalities=job["ineq"],
                                      session=seed)
        search = SearchConfig(
            algorithm=job["algorithm"],
            predicate=SizeLimit(size_limit) if size_limit else Always(),
            time_budget_s=job["timeout"],
            max_implicates=job["max_implicates"],
        )
        with open_session(problem, table, config,
                          model_atoms=abducibles.atoms()) as main_session, \
             open_session(problem, table, config, bare=True) as engine_bare, \
             open_session(problem, table, config, bare=True) as store_bare:
            store = ImplicateStore(table, store_bare,
                                   sort_key=literal_order_key(abducibles))
            stats = run_search(main_session, engine_bare, abducibles, search,
                               lambda c: store.add_minimal(c)[0])
        row["implicates"] = stats.accepted
        row["first_implicate_s"] = stats.first_emit_s
        row["total_s"] = stats.total_s
        row["bucket"] = bucket_label(stats.first_emit_s)
    except (OSError, AbduceError) as e:
        row["status"] = "error"
        row["error"] = str(e)
    return row


def run_benchmarks(manifest, jobs=1):
    pairs = [(entry, k) for entry in manifest for k in entry["size_limits"]]
    if jobs and jobs > 1 and len(pairs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_one_pair, pairs))
    else:
        rows = [_run_one(entry, k) for entry, k in pairs]
    return rows


def _run_one_pair(pair):
    return _run_one(*pair)


def write_outputs(rows, outdir):
    os.makedirs(outdir, exist_ok=True)
    fields = ["name", "path", "size_limit", "status", "implicates",
              "first_implicate_s", "total_s", "bucket", "error"]
    with open(os.path.join(outdir, "report.csv"), "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=fields)
        w.writeheader()
        for row in rows:
            w.writerow({k: row[k] for k in fields})

    limits = sorted({r["size_limit"] for r in rows}, key=lambda k: (k is None, k))
    labels = bucket_labels()
    counts = {k: {b: 0 for b in labels} for k in limits}
    for r in rows:
        counts[r["size_limit"]][r["bucket"]] += 1
    with open(os.path.join(outdir, "buckets.csv"), "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["size_limit"] + labels)
        for k in limits:
            w.writerow([k] + [counts[k][b] for b in labels])

    if rows:
        _render_figures(rows, limits, labels, counts, outdir)


def _render_figures(rows, limits, labels, counts, outdir):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 4.5))
    width = 0.8 / max(len(limits), 1)
    for i, k in enumerate(limits):
        xs = [j + i * width for j in range(len(labels))]
        ax.bar(xs, [counts[k][b] for b in labels], width,
               label="size limit %s" % k)
    ax.set_xticks([j + 0.4 - width / 2 for j in range(len(labels))])
    ax.set_xticklabels(labels, rotation=30, ha="right")
    ax.set_xlabel("time to first implicate (s)")
    ax.set_ylabel("problems")
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(outdir, "buckets.png"), dpi=120)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(8, 4.5))
    for k in limits:
        times = sorted(r["first_implicate_s"] for r in rows
                       if r["size_limit"] == k
                       and r["first_implicate_s"] is not None)
        total = sum(1 for r in rows if r["size_limit"] == k)
        if not total:
            continue
        xs, ys = [0.0], [0.0]
        for j, t in enumerate(times):
            xs += [t, t]
            ys += [ys[-1], (j + 1) / total]
        ax.plot(xs, ys, label="size limit %s" % k)
    ax.set_xlabel("time (s)")
    ax.set_ylabel("proportion with an implicate")
    ax.set_ylim(0, 1.05)
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(outdir, "proportion.png"), dpi=120)
    plt.close(fig)
