"""
Keyed registries for extension points.

Metrics, Bregman functions, problem builders and merit hooks are all looked
up by the tag that appears in experiment configs. Each registry is a small
name -> object map that reports the valid tags when a lookup fails.
"""
from typing import Callable, Dict, Generic, Iterator, List, Optional, TypeVar

from .exceptions import RegistrationError, UnknownTagError

T = TypeVar("T")


class Registry(Generic[T]):
    """Registry for one category of named extensions."""

    def __init__(self, category: str):
        self.category = category
        self._entries: Dict[str, T] = {}

    def register(self, name: str, entry: T, replace: bool = False) -> T:
        """Register ``entry`` under ``name``.

        Raises:
            RegistrationError: If the name is taken and ``replace`` is false.
        """
        if name in self._entries and not replace:
            raise RegistrationError(f"{self.category} '{name}' is already registered")
        self._entries[name] = entry
        return entry

    def decorator(self, name: str) -> Callable[[T], T]:
        """Decorator form of :meth:`register`.

        Example:
            @PROBLEMS.decorator("bilinear")
            def build_bilinear(spec): ...
        """
        def wrap(entry: T) -> T:
            return self.register(name, entry)
        return wrap

    def get(self, name: str) -> T:
        """Look up ``name``.

        Raises:
            UnknownTagError: If ``name`` is not registered; the error lists the valid tags.
        """
        try:
            return self._entries[name]
        except KeyError:
            raise UnknownTagError(self.category, name, self._entries) from None

    def find(self, name: str) -> Optional[T]:
        return self._entries.get(name)

    def names(self) -> List[str]:
        return sorted(self._entries)

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __iter__(self) -> Iterator[str]:
        return iter(self.names())

    def __len__(self) -> int:
        return len(self._entries)
