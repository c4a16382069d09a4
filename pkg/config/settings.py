import logging
import os
from dataclasses import dataclass

from dotenv import load_dotenv

# Загружаем .env файл
load_dotenv()

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class SolverConfig:
    tol_metric: float          # допуск для неравенства треугольника
    tol_lp: float              # допуск для ограничений и оптимальности LP
    cap_exact: int             # максимум игроков в точном TSP (DP по подмножествам)
    cap_bruteforce: int        # максимум игроков для перебора перестановок
    cap_table: int             # максимум игроков для полной таблицы 2^n - 1 коалиций
    cap_subadditive: int       # максимум игроков для попарной проверки субаддитивности
    max_lp_rows: int           # максимум строк в одной LP-модели


@dataclass(frozen=True)
class BehaviorConfig:
    jobs: int
    log_level: str


class Settings:
    def __init__(self):
        self.solver = self._load_solver_config()
        self.behavior = self._load_behavior_config()
        self._validate_config()

    def _load_solver_config(self) -> SolverConfig:
        return SolverConfig(
            tol_metric=float(os.getenv('STAB_TOL_METRIC', '1e-9')),
            tol_lp=float(os.getenv('STAB_TOL_LP', '1e-7')),
            cap_exact=int(os.getenv('STAB_CAP_EXACT', '16')),
            cap_bruteforce=int(os.getenv('STAB_CAP_BRUTEFORCE', '9')),
            cap_table=int(os.getenv('STAB_CAP_TABLE', '16')),
            cap_subadditive=int(os.getenv('STAB_CAP_SUBADDITIVE', '12')),
            max_lp_rows=int(os.getenv('STAB_MAX_LP_ROWS', str(2 ** 16 + 32))),
        )

    def _load_behavior_config(self) -> BehaviorConfig:
        return BehaviorConfig(
            jobs=int(os.getenv('STAB_JOBS', '1')),
            log_level=os.getenv('LOG_LEVEL', 'INFO').upper(),
        )

    def _validate_config(self):
        """Валидация конфигурации"""
        errors = []

        s = self.solver
        if s.tol_metric <= 0 or s.tol_lp <= 0:
            errors.append("Допуски STAB_TOL_METRIC и STAB_TOL_LP должны быть положительными")
        if not 1 <= s.cap_exact <= 20:
            errors.append("STAB_CAP_EXACT должен быть в диапазоне 1..20")
        if not 1 <= s.cap_bruteforce <= 10:
            errors.append("STAB_CAP_BRUTEFORCE должен быть в диапазоне 1..10")
        if s.cap_table < 1 or s.cap_subadditive < 1:
            errors.append("STAB_CAP_TABLE и STAB_CAP_SUBADDITIVE должны быть положительными")
        if s.max_lp_rows < 1:
            errors.append("STAB_MAX_LP_ROWS должен быть положительным")

        if self.behavior.jobs < 1:
            errors.append("STAB_JOBS должен быть >= 1")
        if self.behavior.log_level not in _LOG_LEVELS:
            errors.append(f"LOG_LEVEL должен быть одним из {', '.join(_LOG_LEVELS)}")

        if errors:
            raise ValueError(f"Ошибки конфигурации: {'; '.join(errors)}")

    def log_level_value(self) -> int:
        return getattr(logging, self.behavior.log_level)


def resolve_tol_lp(tol=None) -> float:
    return settings.solver.tol_lp if tol is None else float(tol)


def resolve_tol_metric(tol=None) -> float:
    return settings.solver.tol_metric if tol is None else float(tol)


# Глобальный экземпляр настроек
settings = Settings()
