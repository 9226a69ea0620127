"""Command-line entry points.

Subcommands: validate-scene, build-occupancy, gen-episodes, run-bench, eval,
qa-eval, serve, make-fixtures. Every subcommand accepts --config pointing at a
JSON config file; failures exit nonzero with a machine-readable error on
stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ToolkitConfig
from .errors import SceneBenchError
from .fixtures import BUILTIN_SCENES
from .scene import load_scene, save_scene
from .scene.model import Scene

SCHEMA_VERSION = 1


def _load_config(value: str | None) -> ToolkitConfig:
    return ToolkitConfig.load(value) if value else ToolkitConfig()


def resolve_scene(value: str) -> Scene:
    """A built-in scene name or a path to a scene file."""
    if value in BUILTIN_SCENES:
        return BUILTIN_SCENES[value]()
    return load_scene(value)


def cmd_validate_scene(args) -> int:
    for path in args.scenes:
        scene = load_scene(path)
        print(f"{path}: ok ({len(scene.objects)} objects, {len(scene.regions)} regions)")
    return 0


def cmd_build_occupancy(args) -> int:
    from .taskgen import build_occupancy, save_pgm

    config = _load_config(args.config)
    scene = resolve_scene(args.scene)
    occ = build_occupancy(scene, config.occupancy)
    save_pgm(occ, args.out)
    obstacle = int((occ.cells == 2).sum())
    free = int((occ.cells == 1).sum())
    print(f"{args.out}: {occ.width}x{occ.height} @ {occ.cell_size} m "
          f"({free} free, {obstacle} obstacle cells)")
    return 0


def cmd_gen_episodes(args) -> int:
    from .taskgen import EpisodeGenerator, save_episodes

    config = _load_config(args.config)
    scene = resolve_scene(args.scene)
    generator = EpisodeGenerator(scene, config)
    episodes = generator.generate_batch(args.task, args.count, args.seed)
    save_episodes(episodes, args.out)
    n_val = sum(1 for e in episodes if e.split == "validation")
    print(f"{args.out}: {len(episodes)} episodes ({n_val} validation, "
          f"{len(episodes) - n_val} test)")
    return 0


def cmd_run_bench(args) -> int:
    from .bench import BenchContext, make_agent, run_episode
    from .metrics import aggregate, save_results
    from .taskgen import load_episodes

    config = _load_config(args.config)
    scene = resolve_scene(args.scene)
    episodes = load_episodes(args.episodes)
    if args.split:
        episodes = [e for e in episodes if e.split == args.split]
    context = BenchContext(scene, config)
    results = []
    for index, episode in enumerate(episodes):
        agent = make_agent(args.agent, context, episode, args.seed + index)
        results.append(run_episode(context, episode, agent, seed=args.seed + index))
    if args.out:
        save_results(results, args.out)
    report = aggregate(results)
    print(report.render())
    if args.report:
        Path(args.report).write_text(
            json.dumps({"schema_version": SCHEMA_VERSION, **report.to_dict()},
                       sort_keys=True, indent=2) + "\n"
        )
    return 0


def cmd_eval(args) -> int:
    from .metrics import aggregate, load_results

    results = load_results(args.results)
    if args.split:
        results = [r for r in results if r.split == args.split]
    report = aggregate(results)
    print(report.render())
    if args.report:
        Path(args.report).write_text(
            json.dumps({"schema_version": SCHEMA_VERSION, **report.to_dict()},
                       sort_keys=True, indent=2) + "\n"
        )
    return 0


def cmd_qa_eval(args) -> int:
    from .npc import evaluate_qa_records, load_qa_dataset
    from .scene import derive_relations
    from .wkm import WorldKnowledge, default_provider

    config = _load_config(args.config)
    scene = resolve_scene(args.scene)
    wkm = WorldKnowledge(derive_relations(scene, config.relation),
                         gen_cfg=config.generation)
    records = load_qa_dataset(args.qa)
    items, mean_score = evaluate_qa_records(records, wkm, default_provider())
    for item in items:
        print(f"[{item.score:>3}] sim={item.similarity:.3f} {item.question}")
    print(f"mean score: {mean_score:.2f} over {len(items)} items")
    if args.out:
        lines = [json.dumps(i.to_dict(), sort_keys=True) for i in items]
        Path(args.out).write_text("\n".join(lines) + "\n")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    config = _load_config(args.config)
    app = create_app(
        scene_dir=args.scenes,
        data_dir=args.data,
        episodes_path=args.episodes,
        seed=args.seed,
        config=config,
    )
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def cmd_make_fixtures(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, builder in BUILTIN_SCENES.items():
        save_scene(builder(), out / f"{name}.json")
        print(f"wrote {out / (name + '.json')}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scenebench")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-scene", help="validate scene files")
    p.add_argument("scenes", nargs="+")
    p.set_defaults(fn=cmd_validate_scene)

    p = sub.add_parser("build-occupancy", help="rasterize a scene to a PGM occupancy map")
    p.add_argument("--scene", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.set_defaults(fn=cmd_build_occupancy)

    p = sub.add_parser("gen-episodes", help="generate benchmark episodes")
    p.add_argument("--scene", required=True)
    p.add_argument("--task", required=True,
                   choices=["object_loconav", "social_loconav", "loco_manip"])
    p.add_argument("--count", type=int, default=300)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.set_defaults(fn=cmd_gen_episodes)

    p = sub.add_parser("run-bench", help="run an agent over episodes and report metrics")
    p.add_argument("--scene", required=True)
    p.add_argument("--episodes", required=True)
    p.add_argument("--agent", required=True, choices=["random", "oracle", "modular"])
    p.add_argument("--split", choices=["validation", "test"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="per-episode results JSONL")
    p.add_argument("--report", help="machine-readable report JSON")
    p.add_argument("--config")
    p.set_defaults(fn=cmd_run_bench)

    p = sub.add_parser("eval", help="aggregate a results file into a report")
    p.add_argument("--results", required=True)
    p.add_argument("--split", choices=["validation", "test"])
    p.add_argument("--report")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("qa-eval", help="score NPC answers on a QA dataset")
    p.add_argument("--scene", required=True)
    p.add_argument("--qa", required=True)
    p.add_argument("--out")
    p.add_argument("--config")
    p.set_defaults(fn=cmd_qa_eval)

    p = sub.add_parser("serve", help="run the HTTP verification service")
    p.add_argument("--scenes", help="directory of scene files (built-ins are always loaded)")
    p.add_argument("--data", help="directory for the append-only event log")
    p.add_argument("--episodes", help="episodes JSONL to host dialogue sessions for")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config")
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("make-fixtures", help="write the built-in demo scenes to a directory")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_make_fixtures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SceneBenchError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
