"""Fixture directories: an algebra file, module files and class files that share one algebra."""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

from .conflation import SearchBounds
from .cotorsion import CotorsionPair, ModuleClass, builtin_class, load_class, right_orth
from .errors import MalformedInput
from .pathalg import AlgebraPresentation
from .repcat import Catalog, load_catalog
from .repcat.krull import DEFAULT_ENUM_CAP, DEFAULT_SEED

ENV_FIXTURES = "CTL_FIXTURES"


def default_fixture_root() -> Path:
    env = os.environ.get(ENV_FIXTURES)
    if env:
        return Path(env)
    return Path(str(resources.files("ctl") / "fixtures" / "square"))


@dataclass
class Workspace:
    """Layout: ``algebra.json``, ``modules/*.json`` (with ``index.json``), ``classes/*.json``."""

    root: Path = field(default_factory=default_fixture_root)
    algebra_path: Path | None = None
    catalog_dir: Path | None = None
    characteristic: int | None = None
    cap_enum: int = DEFAULT_ENUM_CAP
    cap_mult: int | None = None
    closure_terms: int = 4
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        self.root = Path(self.root)
        self.algebra_path = Path(self.algebra_path) if self.algebra_path else self.root / "algebra.json"
        self.catalog_dir = Path(self.catalog_dir) if self.catalog_dir else self.root / "modules"

    @property
    def bounds(self) -> SearchBounds:
        return SearchBounds(multiplicity=self.cap_mult, cap_enum=self.cap_enum, closure_terms=self.closure_terms)

    @cached_property
    def algebra(self) -> AlgebraPresentation:
        if not self.algebra_path.exists():
            raise MalformedInput(f"algebra file {self.algebra_path} not found")
        return AlgebraPresentation.load(self.algebra_path, characteristic=self.characteristic)

    @cached_property
    def catalog(self) -> Catalog:
        if not self.catalog_dir.is_dir():
            raise MalformedInput(f"catalog directory {self.catalog_dir} not found")
        return load_catalog(self.catalog_dir, self.algebra)

    def module_class(self, spec: str) -> ModuleClass:
        """A builtin name, a class file name under ``classes/``, or a path to a class file."""
        cls = builtin_class(self.catalog, spec)
        if cls is not None:
            return cls
        for path in (self.root / "classes" / f"{spec}.json", Path(spec)):
            if path.is_file():
                return load_class(path, self.catalog)
        raise MalformedInput(f"unknown class {spec!r}")

    def pair(self, spec: str) -> CotorsionPair:
        """``X`` (paired with its right orthogonal) or ``X:Y``."""
        if ":" in spec:
            xs, ys = spec.split(":", 1)
            x, y = self.module_class(xs), self.module_class(ys)
        else:
            x = self.module_class(spec)
            y = right_orth(x)
        return CotorsionPair(x, y)
