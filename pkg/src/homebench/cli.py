"""Command-line interface.

Subcommands: generate, run, evaluate, replay, ir, curves, serve.
Every flag is mirrored by an environment variable HOMEBENCH_<FLAG> (upper
snake case); precedence is flag > environment > config file > default. The
--config flag points at a JSON file whose sections mirror the Config
dataclasses.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from .config import Config, load_config
from .jsonutil import canonical_json


def _env_default(flag: str, fallback=None):
    return os.environ.get(f"HOMEBENCH_{flag.upper().replace('-', '_')}", fallback)


def _add_config_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=_env_default("config"), help="JSON config file")


def _load(args) -> Config:
    return load_config(args.config)


def cmd_generate(args) -> int:
    from .tasks.generator import generate_episode
    from .tasks.io import save_episode, write_manifest
    from .tasks.layoutgen import generate_layout
    from .tasks.types import SCENARIOS

    os.makedirs(args.out, exist_ok=True)
    scenarios = SCENARIOS if args.scenarios == "all" else tuple(s for s in SCENARIOS if s.lower().startswith(args.scenarios.lower()))
    if not scenarios:
        print(f"no scenario matches {args.scenarios!r}", file=sys.stderr)
        return 2
    episodes = []
    seed = args.seed
    for layout_index in range(args.layouts):
        layout = generate_layout(seed + layout_index)
        for k in range(args.per_layout):
            scenario = scenarios[(layout_index * args.per_layout + k) % len(scenarios)]
            episode = generate_episode(layout, scenario, seed + layout_index * 1000 + k)
            save_episode(episode, os.path.join(args.out, f"{episode.id}.json"))
            episodes.append(episode)
    write_manifest(episodes, args.out)
    print(f"wrote {len(episodes)} episodes to {args.out}")
    return 0


def cmd_run(args) -> int:
    from .session.batch import run_batch, save_manifest
    from .tasks.io import load_corpus

    config = _load(args)
    if os.path.isdir(args.episodes):
        paths = [os.path.join(args.episodes, f"{ep.id}.json") for ep in load_corpus(args.episodes)]
    else:
        paths = [args.episodes]
    os.makedirs(args.out, exist_ok=True)
    log_dir = os.path.join(args.out, "logs")
    manifest = run_batch(
        paths,
        args.reasoner,
        split=args.split,
        parallelism=args.parallelism,
        config=config,
        config_path=args.config,
        log_dir=log_dir,
        seed=args.seed,
    )
    save_manifest(manifest, os.path.join(args.out, "run.json"))
    _write_corpus_csv(manifest, os.path.join(args.out, "corpus.csv"))
    agg = manifest.aggregates()
    print(canonical_json(agg))
    return 0 if not manifest.errors else 1


def _write_corpus_csv(manifest, path: str) -> None:
    from .metrics.scoring import MetricsReport

    columns = ["episode", "gcAvg", "gcPP", "gcTO", "gcOC", "gcSl", "gcCK", "gcFW", "sr", "navSteps", "manipSteps", "ir"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for episode_id in manifest.episodes:
            doc = manifest.reports.get(episode_id)
            if doc is None:
                continue
            report = MetricsReport.from_dict(doc)
            by = report.gc_by_category
            writer.writerow(
                [
                    episode_id,
                    f"{report.gc_avg:.4f}",
                    *(f"{by[tag]:.4f}" if tag in by else "" for tag in ("PP", "TO", "OC", "Sl", "CK", "FW")),
                    int(report.sr),
                    report.nav_steps,
                    report.manip_steps,
                    f"{report.ir:.6f}" if report.ir is not None else "",
                ]
            )


def cmd_evaluate(args) -> int:
    from .session.replay import replay
    from .session.trajectory import TrajectoryLog
    from .tasks.io import load_corpus

    config = _load(args)
    episodes = {ep.id: ep for ep in load_corpus(args.episodes)}
    os.makedirs(args.out, exist_ok=True)
    failures = 0
    for name in sorted(os.listdir(args.logs)):
        if not name.endswith(".jsonl"):
            continue
        log = TrajectoryLog.load(os.path.join(args.logs, name))
        episode = episodes.get(log.header["episodeId"])
        if episode is None:
            print(f"{name}: unknown episode {log.header['episodeId']}", file=sys.stderr)
            failures += 1
            continue
        report = replay(log, episode, config)
        out_path = os.path.join(args.out, name.replace(".jsonl", ".report.json"))
        with open(out_path, "w") as fh:
            fh.write(canonical_json(report.to_dict()) + "\n")
        print(f"{name}: gc={report.gc_avg:.3f} sr={report.sr} nav={report.nav_steps} manip={report.manip_steps} ir={report.ir}")
    return 1 if failures else 0


def cmd_replay(args) -> int:
    from .session.replay import ReplayMismatchError, replay
    from .session.trajectory import TrajectoryLog
    from .tasks.io import load_corpus, load_episode

    config = _load(args)
    log = TrajectoryLog.load(args.log)
    if os.path.isdir(args.episodes):
        episodes = {ep.id: ep for ep in load_corpus(args.episodes)}
        episode = episodes.get(log.header["episodeId"])
    else:
        episode = load_episode(args.episodes)
    if episode is None:
        print(f"episode {log.header['episodeId']} not found", file=sys.stderr)
        return 2
    try:
        report = replay(log, episode, config)
    except ReplayMismatchError as exc:
        print(f"REPLAY MISMATCH: {exc}", file=sys.stderr)
        return 1
    live = log.end.get("metrics") if log.end else None
    recomputed = report.to_dict()
    if live is not None and canonical_json(live) != canonical_json(recomputed):
        print("REPLAY MISMATCH: recomputed metrics differ from live metrics", file=sys.stderr)
        return 1
    print(canonical_json(recomputed))
    return 0


def cmd_ir(args) -> int:
    from .metrics.improvement import improvement_rate

    with open(args.series) as fh:
        values = json.load(fh)
    if not isinstance(values, list):
        print("series file must hold a JSON array", file=sys.stderr)
        return 2
    print(improvement_rate(values, args.n))
    return 0


def cmd_curves(args) -> int:
    from .metrics.powerlaw import curve_rate, match_power_law_exponent

    lo, hi, step = (float(x) for x in args.targets.split(":"))
    rows = []
    target = lo
    while target <= hi + 1e-9:
        exponent = match_power_law_exponent(target, args.T, args.n)
        rows.append((round(target, 6), exponent, curve_rate(exponent, args.T, args.n)))
        target += step
    writer = csv.writer(open(args.out, "w", newline="") if args.out else sys.stdout)
    writer.writerow(["targetIr", "exponent", "achievedIr"])
    for row in rows:
        writer.writerow([row[0], f"{row[1]:.6f}", f"{row[2]:.6f}"])
    return 0


def cmd_serve(args) -> int:
    import time

    from .session.server import serve

    config = _load(args)
    server = serve(args.host, args.port, args.episodes, config, args.log_dir)
    print(f"listening on {args.host}:{server.server_address[1]}")
    try:
        while True:
            time.sleep(3600)
    except KeyboardInterrupt:
        server.shutdown()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homebench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate episode corpus")
    p.add_argument("--layouts", type=int, default=int(_env_default("layouts", 4)))
    p.add_argument("--per-layout", type=int, default=int(_env_default("per_layout", 4)))
    p.add_argument("--scenarios", default=_env_default("scenarios", "all"))
    p.add_argument("--seed", type=int, default=int(_env_default("seed", 0)))
    p.add_argument("--out", default=_env_default("out", "episodes"))
    _add_config_flag(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("run", help="run a reasoner over episodes")
    p.add_argument("--episodes", default=_env_default("episodes", "episodes"))
    p.add_argument("--reasoner", default=_env_default("reasoner", "oracle"))
    p.add_argument("--split", choices=("detailed", "concise"), default=_env_default("split", "detailed"))
    p.add_argument("--parallelism", type=int, default=int(_env_default("parallelism", 1)))
    p.add_argument("--seed", type=int, default=int(_env_default("seed", 0)))
    p.add_argument("--out", default=_env_default("out", "runs"))
    _add_config_flag(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("evaluate", help="recompute reports from logs")
    p.add_argument("--logs", required=True)
    p.add_argument("--episodes", default=_env_default("episodes", "episodes"))
    p.add_argument("--out", default=_env_default("out", "reports"))
    _add_config_flag(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("replay", help="verify one log replays bit-exactly")
    p.add_argument("--log", required=True)
    p.add_argument("--episodes", default=_env_default("episodes", "episodes"))
    _add_config_flag(p)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("ir", help="score-series acceleration metric")
    p.add_argument("--series", required=True, help="JSON array file")
    p.add_argument("--n", type=int, default=int(_env_default("n", 10)))
    _add_config_flag(p)
    p.set_defaults(func=cmd_ir)

    p = sub.add_parser("curves", help="power-law reference sweep as CSV")
    p.add_argument("--targets", default=_env_default("targets", "0:2:0.25"), help="lo:hi:step")
    p.add_argument("--T", type=int, default=int(_env_default("t", 1500)))
    p.add_argument("--n", type=int, default=int(_env_default("n", 10)))
    p.add_argument("--out", default=_env_default("out"))
    _add_config_flag(p)
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("serve", help="session service for teleoperation and external agents")
    p.add_argument("--host", default=_env_default("host", "127.0.0.1"))
    p.add_argument("--port", type=int, default=int(_env_default("port", 7788)))
    p.add_argument("--episodes", default=_env_default("episodes", "episodes"))
    p.add_argument("--log-dir", default=_env_default("log_dir", "teleop-logs"))
    _add_config_flag(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
