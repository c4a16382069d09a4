# reports/batch.py
import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple, Union

from config.settings import resolve_tol_lp
from core.errors import CapacityError, UsageError
from games.cost_game import MCSTGame, TSGame
from games.generators import empty_semicore_table, random_subadditive_table
from metric.generators import gen_asymmetric_metric, gen_euclidean, make_rng
from reports.checks import CHECKS, InstanceContext, Verdict
from semicore.formulas import semicore_empty_criterion
from semicore.search import climb_asymmetric_metric
from storage.files import BatchConfig, BatchFamily, game_file, instance_file

logger = logging.getLogger(__name__)

MATRIX_KINDS = ("euclidean", "asymmetric", "asymmetric-climb")

CSV_COLUMNS = [
    "instance_id", "n", "symmetric", "c_grand", "cos", "wOeC", "sOeC", "alpha",
    "coss", "sOeS", "bound_mst", "bound_max_marginal", "bound_avg_ir", "semicore_empty",
]


@dataclass
class CheckTally:
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    first_counterexample: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "failed": self.failed,
            "skipped": self.skipped,
            "first_counterexample": self.first_counterexample,
        }


@dataclass
class FamilyTally:
    sampled: int = 0
    analyzed: int = 0
    empty_semicore_found: int = 0
    wants_empty: bool = False
    refused: int = 0

    @property
    def sampling_shortfall(self) -> bool:
        return self.wants_empty and self.empty_semicore_found == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sampled": self.sampled,
            "analyzed": self.analyzed,
            "empty_semicore_found": self.empty_semicore_found,
            "sampling_shortfall": self.sampling_shortfall,
            "capacity_refused": self.refused,
        }


@dataclass
class BatchSummary:
    checks: Dict[str, CheckTally] = field(default_factory=dict)
    families: Dict[str, FamilyTally] = field(default_factory=dict)
    rows: List[Dict[str, Any]] = field(default_factory=list)
    instances: int = 0

    @property
    def ok(self) -> bool:
        return all(t.failed == 0 for t in self.checks.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "checks": {name: tally.to_dict() for name, tally in self.checks.items()},
            "families": {name: tally.to_dict() for name, tally in self.families.items()},
            "sampling_shortfall": any(t.sampling_shortfall for t in self.families.values()),
            "instances": self.instances,
        }


def _validate_checks(config: BatchConfig) -> None:
    for family in config.families:
        unknown = [name for name in family.checks if name not in CHECKS]
        if unknown:
            raise UsageError(f"{family.label}: неизвестные проверки {', '.join(unknown)}")


def _instances(family: BatchFamily, tol: float) -> Iterator[Tuple[Optional[InstanceContext], Dict[str, Any]]]:
    """Экземпляры семейства; None вместо контекста, если экземпляр отброшен"""
    for n in range(family.n_min, family.n_max + 1):
        for seed in range(family.seed_start, family.seed_start + family.seed_count):
            instance_id = f"{family.label}/n{n}/s{seed}"
            if family.kind in MATRIX_KINDS:
                if family.kind == "euclidean":
                    m = gen_euclidean(n, seed, family.box)
                elif family.kind == "asymmetric-climb":
                    m = climb_asymmetric_metric(n, seed, tol=tol)
                else:
                    m = gen_asymmetric_metric(n, seed)
                g = MCSTGame(m) if family.game == "mcst" else TSGame(m)
                source = instance_file(m, seed, family.kind, family.box if family.kind == "euclidean" else None)
                descriptor = {"id": instance_id, "instance": source.to_dict()}
                ctx = InstanceContext(instance_id, g, tol, matrix=m, seed=seed)
            else:
                rng = make_rng(seed)
                g = empty_semicore_table(n, rng, tol) if family.kind == "empty-table" else random_subadditive_table(n, rng)
                if g is None:
                    yield None, {"id": instance_id}
                    continue
                descriptor = {"id": instance_id, "seed": seed, "game": game_file(g).to_dict()}
                ctx = InstanceContext(instance_id, g, tol, seed=seed)
            if family.empty_semicore_only and (n < 2 or not semicore_empty_criterion(g, tol)):
                yield None, descriptor
                continue
            yield ctx, descriptor


def _run_instance(
    ctx: InstanceContext, checks: List[str], with_rows: bool,
) -> Tuple[Optional[Dict[str, Any]], bool, Dict[str, Any]]:
    outcomes = {name: CHECKS[name](ctx) for name in checks}
    row = ctx.csv_row() if with_rows else None
    return row, ctx.semicore_empty, outcomes


def run_batch(
    config: BatchConfig,
    jobs: int = 1,
    tol: Optional[float] = None,
    with_rows: bool = True,
) -> BatchSummary:
    """
    Прогон проверок по семействам. with_rows=False не считает строки CSV
    (все концепции на каждом экземпляре), только то, что нужно проверкам.
    """
    _validate_checks(config)
    tol = resolve_tol_lp(config.tol if tol is None else tol)
    summary = BatchSummary()

    for family in config.families:
        tally = summary.families.setdefault(family.label, FamilyTally(wants_empty=family.empty_semicore_only))
        selected = []
        for ctx, descriptor in _instances(family, tol):
            tally.sampled += 1
            if ctx is not None:
                selected.append((ctx, descriptor))
        logger.info(f"{family.label}: {len(selected)} из {tally.sampled} экземпляров")

        def work(item):
            ctx, _ = item
            try:
                return _run_instance(ctx, family.checks, with_rows)
            except CapacityError as e:
                logger.warning(f"{ctx.instance_id}: {e}")
                return None

        with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
            results = list(pool.map(work, selected))

        for (ctx, descriptor), result in zip(selected, results):
            if result is None:
                tally.refused += 1
                continue
            row, semicore_empty, outcomes = result
            tally.analyzed += 1
            summary.instances += 1
            if semicore_empty:
                tally.empty_semicore_found += 1
            if row is not None:
                summary.rows.append(row)
            for name, outcome in outcomes.items():
                check = summary.checks.setdefault(name, CheckTally())
                if outcome.verdict is Verdict.PASS:
                    check.passed += 1
                elif outcome.verdict is Verdict.SKIP:
                    check.skipped += 1
                else:
                    check.failed += 1
                    logger.warning(f"{name} не прошла на {ctx.instance_id}: {outcome.detail}")
                    if check.first_counterexample is None:
                        check.first_counterexample = {**descriptor, "detail": outcome.detail}
    return summary


def write_csv(path: Union[str, Path], rows: List[Dict[str, Any]]) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
