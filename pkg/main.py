#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CLI: gen, analyze, bounds, batch.
JSON - в stdout, диагностика - в stderr.
Коды выхода: 0 успех, 1 ошибка ввода, 2 отказ по лимиту, 3 проверки не прошли, 64 usage,
70 внутренняя ошибка (несогласованность вычислений, недопустимая или неограниченная LP).
"""
import argparse
import logging
import sys
from typing import List, Optional

from config.settings import settings
from core.errors import (
    CapacityError, ConsistencyError, InfeasibleModelError, InstanceFormatError, StabilityError,
    UnboundedModelError, UsageError,
)
from games.cost_game import MCSTGame, TSGame
from metric.generators import RNG_ALGORITHM, gen_asymmetric_metric, gen_euclidean
from metric.matrix import validate_metric
from reports.analyze import analyze, parse_concepts
from reports.batch import run_batch, write_csv
from stability.model import Weight
from storage.files import dump_json, instance_file, load_batch_config, load_input, write_json

logger = logging.getLogger("stability")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CAPACITY = 2
EXIT_SUITE = 3
EXIT_USAGE = 64
EXIT_INTERNAL = 70

# ошибки построения моделей, а не входных данных
INTERNAL_ERRORS = (ConsistencyError, InfeasibleModelError, UnboundedModelError)

GENERATORS = {"euclidean": gen_euclidean, "asymmetric": gen_asymmetric_metric}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: ошибка: {message}\n")


def _generate(kind: str, n: int, seed: int, box: float):
    if kind == "euclidean":
        return gen_euclidean(n, seed, box)
    return gen_asymmetric_metric(n, seed)


def cmd_gen(args) -> int:
    m = _generate(args.kind, args.n, args.seed, args.box)
    source = instance_file(m, args.seed, args.kind, args.box if args.kind == "euclidean" else None)
    report = validate_metric(m, args.tol_metric)
    if not report.valid:
        logger.error(f"Экземпляр не прошёл проверку: {report.summary()}")
        return EXIT_INPUT
    if args.out:
        write_json(args.out, source.to_dict())
        logger.info(f"Записан {args.out}: {args.kind}, n={args.n}, seed={args.seed} ({RNG_ALGORITHM})")
    else:
        sys.stdout.write(dump_json(source.to_dict()))
    print(report.summary(), file=sys.stderr)
    return EXIT_OK


def _load_for_analysis(args):
    if args.instance:
        loaded = load_input(args.instance, args.game)
        descriptor = {"file": args.instance, "format": loaded.format, "game": args.game}
        return loaded.game, loaded.matrix, descriptor
    if args.kind is None or args.n is None:
        raise UsageError("Нужен файл экземпляра или --kind и --n")
    m = _generate(args.kind, args.n, args.seed, args.box)
    g = MCSTGame(m) if args.game == "mcst" else TSGame(m)
    descriptor = {
        "generator": {"algorithm": RNG_ALGORITHM, "kind": args.kind, "n": args.n, "seed": args.seed,
                      "box": args.box if args.kind == "euclidean" else None},
        "game": args.game,
    }
    return g, m, descriptor


def cmd_analyze(args) -> int:
    concepts = parse_concepts(args.concepts)
    g, m, descriptor = _load_for_analysis(args)
    report = analyze(g, concepts, descriptor, matrix=m, weight=Weight(args.weight), tol=args.tol, jobs=args.jobs)
    sys.stdout.write(dump_json(report.to_dict()))
    return EXIT_OK


def cmd_bounds(args) -> int:
    args.concepts = "bounds"
    return cmd_analyze(args)


def cmd_batch(args) -> int:
    try:
        config = load_batch_config(args.config)
    except InstanceFormatError as e:
        raise UsageError(str(e)) from e
    csv_path = args.csv or config.csv
    summary = run_batch(config, jobs=args.jobs, tol=args.tol, with_rows=bool(csv_path))
    if csv_path:
        write_csv(csv_path, summary.rows)
        logger.info(f"CSV: {csv_path} ({len(summary.rows)} строк)")
    sys.stdout.write(dump_json(summary.to_dict()))
    return EXIT_OK if summary.ok else EXIT_SUITE


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=None, help="допуск LP (по умолчанию STAB_TOL_LP)")
    p.add_argument("--jobs", type=int, default=settings.behavior.jobs)


def _add_instance_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("instance", nargs="?", help="tsg-instance/v1 или cost-game/v1")
    p.add_argument("--kind", choices=sorted(GENERATORS))
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--box", type=float, default=100.0)
    p.add_argument("--game", choices=["tsg", "mcst"], default="tsg")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stability", description="Стабильность в субаддитивных играх стоимости")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="сгенерировать экземпляр TSG")
    gen.add_argument("kind", choices=sorted(GENERATORS))
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--box", type=float, default=100.0)
    gen.add_argument("--out")
    gen.add_argument("--tol-metric", dest="tol_metric", type=float, default=None)
    gen.set_defaults(handler=cmd_gen)

    an = sub.add_parser("analyze", help="посчитать концепции стабильности")
    _add_instance_source(an)
    an.add_argument("--concepts", default="core,cos,coss")
    an.add_argument("--weight", choices=[w.value for w in Weight], default=Weight.STRONG.value)
    _add_common(an)
    an.set_defaults(handler=cmd_analyze)

    bd = sub.add_parser("bounds", help="то же, что analyze --concepts bounds")
    _add_instance_source(bd)
    bd.add_argument("--weight", choices=[w.value for w in Weight], default=Weight.STRONG.value)
    _add_common(bd)
    bd.set_defaults(handler=cmd_bounds)

    bt = sub.add_parser("batch", help="прогон проверок свойств по семействам экземпляров")
    bt.add_argument("config")
    bt.add_argument("--csv")
    _add_common(bt)
    bt.set_defaults(handler=cmd_batch)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(
        level=settings.log_level_value(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("--jobs должен быть >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.handler(args)
    except UsageError as e:
        print(f"Ошибка использования: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as e:
        logger.error(f"Отказ по лимиту: {e}")
        return EXIT_CAPACITY
    except INTERNAL_ERRORS as e:
        logger.exception(f"Внутренняя ошибка ({type(e).__name__}): {e}")
        return EXIT_INTERNAL
    except (StabilityError, OSError) as e:
        logger.error(f"Ошибка ввода: {e}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
