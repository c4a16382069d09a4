# storage/files.py
"""
Файловые форматы: tsg-instance/v1, cost-game/v1, конфиг batch.
Запись детерминирована (indent=2, перевод строки в конце), поэтому
повторная генерация с теми же параметрами даёт тот же файл побайтно.
"""
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, ValidationError, model_validator

from core.errors import InstanceFormatError, MetricViolationError
from games.cost_game import CostGame, MCSTGame, TableGame, TSGame
from metric.generators import RNG_ALGORITHM
from metric.matrix import DistanceMatrix

logger = logging.getLogger(__name__)

INSTANCE_FORMAT = "tsg-instance/v1"
GAME_FORMAT = "cost-game/v1"


class GeneratorInfo(BaseModel):
    algorithm: str = RNG_ALGORITHM
    kind: Literal["euclidean", "asymmetric", "asymmetric-climb"]
    box: Optional[float] = None


class InstanceFile(BaseModel):
    format: Literal["tsg-instance/v1"] = INSTANCE_FORMAT
    n: int = Field(ge=1)
    symmetric: bool
    seed: Optional[int] = None
    matrix: List[List[float]]
    generator: Optional[GeneratorInfo] = None

    @model_validator(mode="after")
    def _check_shape(self) -> "InstanceFile":
        size = self.n + 1
        if len(self.matrix) != size or any(len(row) != size for row in self.matrix):
            raise ValueError(f"matrix должна быть {size}x{size}")
        return self

    def to_matrix(self) -> DistanceMatrix:
        m = DistanceMatrix.from_array(self.matrix)
        if m.symmetric != self.symmetric:
            raise ValueError(f"флаг symmetric={self.symmetric} не совпадает с матрицей")
        return m

    def to_dict(self) -> Dict[str, Any]:
        data = self.model_dump()
        if data["generator"] is None:
            del data["generator"]
        return data


class CostGameFile(BaseModel):
    format: Literal["cost-game/v1"] = GAME_FORMAT
    n: int = Field(ge=1, le=30)
    costs: Dict[str, float]

    @model_validator(mode="after")
    def _check_keys(self) -> "CostGameFile":
        expected = {str(mask) for mask in range(1, 1 << self.n)}
        keys = set(self.costs)
        if keys != expected:
            extra = sorted(keys - expected)[:3]
            missing = sorted(expected - keys, key=int)[:3]
            raise ValueError(f"ключи costs: лишние {extra}, недостающие {missing}")
        return self

    def to_game(self) -> TableGame:
        return TableGame(self.n, {int(k): v for k, v in self.costs.items()})

    def to_dict(self) -> Dict[str, Any]:
        data = self.model_dump()
        data["costs"] = {str(mask): self.costs[str(mask)] for mask in range(1, 1 << self.n)}
        return data


class BatchFamily(BaseModel):
    name: Optional[str] = None
    kind: Literal["euclidean", "asymmetric", "asymmetric-climb", "table", "empty-table"]
    game: Literal["tsg", "mcst"] = "tsg"
    n_min: int = Field(ge=2)
    n_max: int = Field(ge=2)
    seed_start: int = 0
    seed_count: int = Field(default=10, ge=1)
    box: float = Field(default=100.0, gt=0)
    empty_semicore_only: bool = False
    checks: List[str] = Field(min_length=1)

    @model_validator(mode="after")
    def _check_range(self) -> "BatchFamily":
        if self.n_max < self.n_min:
            raise ValueError(f"n_max={self.n_max} меньше n_min={self.n_min}")
        return self

    @property
    def label(self) -> str:
        return self.name or f"{self.kind}-{self.game}-n{self.n_min}..{self.n_max}"


class BatchConfig(BaseModel):
    families: List[BatchFamily] = Field(min_length=1)
    csv: Optional[str] = None
    tol: Optional[float] = Field(default=None, gt=0)


@dataclass(frozen=True)
class LoadedInput:
    """Загруженный файл: матрица (tsg-instance) или таблица (cost-game)"""
    path: str
    format: str
    game: CostGame
    matrix: Optional[DistanceMatrix] = None
    seed: Optional[int] = None


def dump_json(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def write_json(path: Union[str, Path], data: Any) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True)
    path.write_text(dump_json(data), encoding="utf-8")
    logger.debug(f"Записан {path}")


def instance_file(
    m: DistanceMatrix,
    seed: Optional[int] = None,
    kind: Optional[str] = None,
    box: Optional[float] = None,
) -> InstanceFile:
    generator = GeneratorInfo(kind=kind, box=box) if kind else None
    return InstanceFile(n=m.n, symmetric=m.symmetric, seed=seed, matrix=m.tolist(), generator=generator)


def game_file(g: CostGame) -> CostGameFile:
    table = g.all_costs()
    return CostGameFile(n=g.n, costs={str(mask): float(table[mask]) for mask in range(1, 1 << g.n)})


def _read(path: Union[str, Path]) -> Dict[str, Any]:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(f"Некорректный JSON: {e}", str(path)) from e
    if not isinstance(data, dict):
        raise InstanceFormatError("Ожидался JSON-объект", str(path))
    return data


def load_input(path: Union[str, Path], game: str = "tsg") -> LoadedInput:
    """Файл экземпляра или таблицы; формат определяется по полю format"""
    data = _read(path)
    fmt = data.get("format")
    try:
        if fmt == INSTANCE_FORMAT:
            instance = InstanceFile.model_validate(data)
            m = instance.to_matrix()
            built = MCSTGame(m) if game == "mcst" else TSGame(m)
            return LoadedInput(str(path), fmt, built, matrix=m, seed=instance.seed)
        if fmt == GAME_FORMAT:
            table = CostGameFile.model_validate(data)
            return LoadedInput(str(path), fmt, table.to_game())
    except ValidationError as e:
        raise InstanceFormatError(f"Неверный {fmt}: {e.errors()[0]['msg']}", str(path)) from e
    except MetricViolationError:
        raise
    except ValueError as e:
        raise InstanceFormatError(str(e), str(path)) from e
    raise InstanceFormatError(f"Неизвестный формат: {fmt!r}", str(path))


def load_batch_config(path: Union[str, Path]) -> BatchConfig:
    try:
        return BatchConfig.model_validate(_read(path))
    except ValidationError as e:
        raise InstanceFormatError(f"Неверный конфиг batch: {e.errors()[0]['msg']}", str(path)) from e
