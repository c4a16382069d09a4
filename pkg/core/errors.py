# core/errors.py
from typing import Optional


class StabilityError(ValueError):
    """Базовая ошибка пакета (наследует ValueError, как и остальной код)"""


class ShapeError(StabilityError):
    """Матрица не квадратная или неправильного размера"""


class EmptyInstanceError(StabilityError):
    """Экземпляр без игроков (n = 0)"""


class DomainError(StabilityError):
    """Аргумент вне области определения операции"""


class MetricViolationError(StabilityError):
    """Матрица расстояний не прошла validate_metric"""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class CapacityError(StabilityError):
    """Запрошенный размер превышает лимит экспоненциального этапа"""

    def __init__(self, what: str, requested: int, cap: int):
        super().__init__(f"{what}: запрошено {requested}, лимит {cap}")
        self.what = what
        self.requested = requested
        self.cap = cap


class DegenerateGameError(StabilityError):
    """Вырожденная игра (нулевая стоимость там, где нужен делитель)"""


class PreconditionError(StabilityError):
    """Нарушена гипотеза формулы (например, semicore не пуст)"""


class InfeasibleModelError(StabilityError):
    """LP-модель недопустима: для моделей стабильности это ошибка построения"""


class UnboundedModelError(StabilityError):
    """LP-модель не ограничена: для моделей стабильности это ошибка построения"""


class ConsistencyError(StabilityError):
    """Две независимые оценки одной величины расходятся больше допуска"""


class InstanceFormatError(StabilityError):
    """Некорректный файл экземпляра, игры или конфигурации batch"""

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class UsageError(StabilityError):
    """Неверное использование CLI (например, неизвестная концепция)"""


def require_capacity(what: str, requested: int, cap: int) -> None:
    if requested > cap:
        raise CapacityError(what, requested, cap)
