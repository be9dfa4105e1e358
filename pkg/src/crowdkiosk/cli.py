"""Command-line analytics over a data directory.

    stats compose --data-dir DIR [--scene S] [--format json|table|csv]
    stats ratio   --data-dir DIR --task-a A --task-b B
    stats cohort  --data-dir DIR
    stats likert  --data-dir DIR
    stats tutorial --data-dir DIR
    stats usage   --data-dir DIR
    stats return  --task TASK (--completed 1,0,1,... | --trials FILE)
    stats fixture --data-dir DIR    (synthesize the reference dataset)

JSON goes to stdout by default; --format table prints aligned text,
--format csv comma-separated rows.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import date

from . import analytics
from .fixture import write_reference_dataset
from .model import default_scenes
from .store import EpisodeStore


def _load(args):
    store = EpisodeStore(args.data_dir)
    return store.scan(scene=args.scene if getattr(args, "scene", None) else None)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {_key(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, date):
        return obj.isoformat()
    return obj


def _key(k):
    if isinstance(k, tuple):
        return "/".join(str(p) for p in k)
    if isinstance(k, date):
        return k.isoformat()
    return str(k)


def _emit(args, payload, rows=None, header=None):
    """payload: json dict; rows/header: tabular view for table and csv."""
    if args.format == "json":
        json.dump(_jsonable(payload), sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
        return
    if rows is None:
        rows = [[k, v] for k, v in sorted(_jsonable(payload).items())]
        header = header or ["key", "value"]
    cells = [header] + [[str(c) for c in row] for row in rows]
    if args.format == "csv":
        for row in cells:
            print(",".join(row))
        return
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    for n, row in enumerate(cells):
        print("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        if n == 0:
            print("  ".join("-" * w for w in widths))


def cmd_compose(args):
    rep = analytics.composition(_load(args))
    payload = {
        "total_steps": rep.total_steps,
        "percent": {k: round(rep.percent(k), 4) for k in rep.fractions},
        "timesteps": {f"{s}/{l}/q{q}": n for (s, l, q), n in sorted(rep.timesteps.items())},
    }
    rows = [[s, l, q, n] for (s, l, q), n in sorted(rep.timesteps.items())]
    _emit(args, payload, rows, ["scene", "label", "quality", "timesteps"])


def cmd_ratio(args):
    ds = _load(args)
    value = analytics.task_time_ratio(ds, args.task_a, args.task_b)
    payload = {"task_a": args.task_a, "task_b": args.task_b, "ratio": value}
    _emit(args, payload, [[args.task_a, args.task_b, f"{value:.4f}"]], ["task_a", "task_b", "ratio"])


def cmd_cohort(args):
    cc = analytics.leaderboard_cohort_compare(_load(args))
    payload = {
        "visitors": cc.visitors,
        "others": cc.others,
        "quantity": {
            "U": cc.quantity.U,
            "z": cc.quantity.z,
            "p_two_sided": cc.quantity.p_two_sided,
            "method": cc.quantity.method.value,
            "means": list(cc.quantity_means),
        },
        "quality": {
            "U": cc.quality.U,
            "z": cc.quality.z,
            "p_two_sided": cc.quality.p_two_sided,
            "method": cc.quality.method.value,
            "means": list(cc.quality_means),
        },
    }
    rows = [
        ["quantity", cc.quantity.U, f"{cc.quantity.p_two_sided:.3g}", cc.quantity.method.value],
        ["quality", cc.quality.U, f"{cc.quality.p_two_sided:.3g}", cc.quality.method.value],
    ]
    _emit(args, payload, rows, ["metric", "U", "p_two_sided", "method"])


def cmd_likert(args):
    agg = analytics.likert_aggregate(_load(args))
    payload = {"histograms": agg["histograms"]}
    rows = [
        [q] + [agg["histograms"][q][r] for r in range(1, 6)]
        for q in ("intuitive", "interesting", "wanted")
    ]
    _emit(args, payload, rows, ["question", "1", "2", "3", "4", "5"])


def cmd_tutorial(args):
    rows = analytics.tutorial_vs_task_quality(_load(args))
    payload = {"users": [{"user_id": u, "tutorial_score": s, "mean_task_quality": q} for u, s, q in rows]}
    _emit(args, payload, [[u, s, f"{q:.3f}"] for u, s, q in rows],
          ["user_id", "tutorial_score", "mean_task_quality"])


def cmd_usage(args):
    u = analytics.usage_stats(_load(args))
    payload = u
    rows = [[d, n] for d, n in u["episodes_per_day"].items()]
    _emit(args, payload, rows, ["day", "episodes"])


def cmd_return(args):
    scenes = default_scenes()
    task = None
    for scene in scenes.values():
        for t in scene.tasks:
            if t.task_id == args.task:
                task = t
    if task is None or not task.subtask_checklist:
        print(f"error: no checklist task {args.task!r}", file=sys.stderr)
        return 2
    if args.trials:
        with open(args.trials) as fh:
            trials = json.load(fh)
        mean, std = analytics.normalized_return_batch(trials, task)
        payload = {"task": args.task, "trials": len(trials), "mean": mean, "stddev": std}
        _emit(args, payload, [[args.task, len(trials), f"{mean:.3f}", f"{std:.3f}"]],
              ["task", "trials", "mean", "stddev"])
    else:
        completed = [v.strip() in ("1", "true", "True") for v in args.completed.split(",")]
        score = analytics.normalized_return(completed, task)
        payload = {"task": args.task, "normalized_return": score}
        _emit(args, payload, [[args.task, f"{score:.3f}"]], ["task", "normalized_return"])
    return 0


def cmd_fixture(args):
    write_reference_dataset(args.data_dir)
    print(f"reference dataset written to {args.data_dir}")


def build_parser():
    p = argparse.ArgumentParser(prog="stats", description="Dataset analytics")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, data_dir=True, scene=True):
        if data_dir:
            sp.add_argument("--data-dir", required=True)
        if scene:
            sp.add_argument("--scene", default=None)
        sp.add_argument("--format", choices=["json", "table", "csv"], default="json")

    sp = sub.add_parser("compose", help="timesteps by scene/label/quality")
    common(sp)
    sp.set_defaults(fn=cmd_compose)

    sp = sub.add_parser("ratio", help="timestep ratio between two tasks")
    common(sp)
    sp.add_argument("--task-a", required=True)
    sp.add_argument("--task-b", required=True)
    sp.set_defaults(fn=cmd_ratio)

    sp = sub.add_parser("cohort", help="leaderboard visitor comparison")
    common(sp)
    sp.set_defaults(fn=cmd_cohort)

    sp = sub.add_parser("likert", help="survey minimum-rating histograms")
    common(sp)
    sp.set_defaults(fn=cmd_likert)

    sp = sub.add_parser("tutorial", help="tutorial vs task quality per user")
    common(sp)
    sp.set_defaults(fn=cmd_tutorial)

    sp = sub.add_parser("usage", help="users/episodes per day and hour")
    common(sp)
    sp.set_defaults(fn=cmd_usage)

    sp = sub.add_parser("return", help="normalized checklist return")
    sp.add_argument("--task", required=True)
    sp.add_argument("--completed", help="comma-separated 0/1 per subtask")
    sp.add_argument("--trials", help="JSON file: list of completed vectors")
    sp.add_argument("--format", choices=["json", "table", "csv"], default="json")
    sp.set_defaults(fn=cmd_return)

    sp = sub.add_parser("fixture", help="write the synthetic reference dataset")
    sp.add_argument("--data-dir", required=True)
    sp.set_defaults(fn=cmd_fixture)

    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args) or 0
    except analytics.AnalyticsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
