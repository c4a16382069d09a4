# core/coalition.py
from dataclasses import dataclass
from typing import Iterable, Iterator, Tuple

from core.errors import DomainError


@dataclass(frozen=True, order=True)
class Coalition:
    """
    Коалиция как битовое множество: игрок i (1..n) хранится в бите i-1.
    Целое значение mask используется как ключ в таблицах и файлах.
    """
    mask: int
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise DomainError("n должно быть неотрицательным")
        if self.mask < 0 or self.mask >> self.n:
            raise DomainError(f"mask {self.mask} выходит за пределы игроков 1..{self.n}")

    @classmethod
    def from_members(cls, members: Iterable[int], n: int) -> "Coalition":
        mask = 0
        for i in members:
            if not 1 <= i <= n:
                raise DomainError(f"Игрок {i} вне диапазона 1..{n}")
            mask |= 1 << (i - 1)
        return cls(mask, n)

    @classmethod
    def grand(cls, n: int) -> "Coalition":
        return cls((1 << n) - 1, n)

    @classmethod
    def singleton(cls, n: int, i: int) -> "Coalition":
        return cls.from_members([i], n)

    @property
    def members(self) -> Tuple[int, ...]:
        # по возрастанию индекса
        return tuple(i + 1 for i in range(self.n) if self.mask >> i & 1)

    @property
    def size(self) -> int:
        return bin(self.mask).count("1")

    @property
    def is_empty(self) -> bool:
        return self.mask == 0

    @property
    def is_grand(self) -> bool:
        return self.mask == (1 << self.n) - 1

    def without(self, i: int) -> "Coalition":
        return Coalition(self.mask & ~(1 << (i - 1)), self.n)

    def complement(self) -> "Coalition":
        return Coalition(((1 << self.n) - 1) ^ self.mask, self.n)

    def __contains__(self, i: int) -> bool:
        return 1 <= i <= self.n and bool(self.mask >> (i - 1) & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return self.size

    def __str__(self) -> str:
        return "{" + ",".join(str(i) for i in self.members) + "}"


def subsets(n: int) -> Iterator[Coalition]:
    """Все непустые коалиции в порядке возрастания mask"""
    for mask in range(1, 1 << n):
        yield Coalition(mask, n)


def proper_subsets(n: int) -> Iterator[Coalition]:
    for mask in range(1, (1 << n) - 1):
        yield Coalition(mask, n)


def as_mask(s, n: int) -> int:
    """Принимает Coalition или целую маску, возвращает маску"""
    if isinstance(s, Coalition):
        if s.n != n:
            raise DomainError(f"Коалиция над {s.n} игроками, а игра над {n}")
        return s.mask
    mask = int(s)
    if mask < 0 or mask >> n:
        raise DomainError(f"mask {mask} выходит за пределы игроков 1..{n}")
    return mask
