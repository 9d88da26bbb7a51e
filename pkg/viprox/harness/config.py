"""
Experiment configuration files.

A config is a YAML mapping with the sections ``problem``, ``algorithm``,
``noise``, ``run``, ``merits`` and an optional ``sweep``. Unknown keys are
rejected; unknown ``kind`` tags are reported together with the valid ones.
"""
import copy
import logging
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
import yaml
from pydantic import Field, ValidationError, field_validator, model_validator

from ..core.base import ViproxModel, as_vector, error_fields
from ..core.exceptions import ArtifactIOError, ConfigurationError, ConfigValidationError, UnknownTagError
from ..geometry.bregman import BREGMAN_FUNCTIONS
from ..geometry.domains import CapacitySimplex
from ..geometry.metrics import METRICS
from ..merit.hooks import MERITS
from ..merit.regions import TestDomain
from ..problems import PROBLEMS, NoiseModel, NoNoise, ProblemSpec, VIProblem
from ..solvers.algorithms import ALGORITHM_KINDS, AlgorithmSpec

logger = logging.getLogger(__name__)

CONFIG_PACKAGE = "viprox.harness.configs"
CONFIG_SUFFIX = ".yaml"
NOISE_KINDS = ("none", "gaussian", "minibatch")


class InitialPoint(ViproxModel):
    """Where each seed starts.

    ``default`` is the problem's own initial point, ``point`` an explicit
    vector, ``constant`` the vector ``value * ones``, and ``uniform`` a
    per-seed uniform draw: inside ``radius`` of the known solution when a
    radius is given, otherwise over the domain.
    """
    kind: Literal["default", "point", "uniform", "constant"] = "default"
    point: Optional[List[float]] = None
    value: Optional[float] = None
    radius: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _arguments(self) -> "InitialPoint":
        if self.kind == "point" and self.point is None:
            raise ValueError("initial point kind 'point' needs 'point'")
        if self.kind == "constant" and self.value is None:
            raise ValueError("initial point kind 'constant' needs 'value'")
        return self

    def resolve(self, problem: VIProblem, seed: int) -> np.ndarray:
        if self.kind == "default":
            return problem.initial_point()
        if self.kind == "point":
            return problem.check(as_vector(self.point, problem.dim, "initial point"), "initial point")
        if self.kind == "constant":
            return problem.check(np.full(problem.dim, float(self.value)), "initial point")

        # Separate stream from the oracle's so noise draws are unaffected by the start.
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, problem.stable_id, 1])))
        domain = problem.domain
        if isinstance(domain, CapacitySimplex):
            return domain.interior_sample(rng, 1)[0]
        lower, upper = domain.bounds()
        if self.radius is not None:
            if problem.known_solution is None:
                raise ConfigurationError(f"{problem.kind} has no known solution to sample around")
            lower = np.maximum(problem.known_solution - self.radius, lower)
            upper = np.minimum(problem.known_solution + self.radius, upper)
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ConfigurationError("uniform initial points need a bounded domain or a radius")
        return problem.check(rng.uniform(lower, upper), "initial point")


class RunSection(ViproxModel):
    iterations: int = Field(ge=1)
    seeds: List[int] = Field(default_factory=lambda: [0], min_length=1)
    initial_point: InitialPoint = Field(default_factory=InitialPoint)
    checkpoint_dense: Optional[int] = Field(default=None, ge=1)
    checkpoints_per_decade: Optional[int] = Field(default=None, ge=1)
    merit_every: Optional[int] = Field(default=None, ge=1)

    @field_validator("seeds")
    @classmethod
    def _seeds(cls, v: List[int]) -> List[int]:
        if any(s < 0 for s in v):
            raise ValueError("seeds must be non-negative")
        if len(set(v)) != len(v):
            raise ValueError("seeds must be distinct")
        return v

    @model_validator(mode="after")
    def _cadence(self) -> "RunSection":
        if self.merit_every is None:
            return self
        if self.checkpoint_dense is not None or self.checkpoints_per_decade is not None:
            raise ValueError("merit_every replaces checkpoint_dense and checkpoints_per_decade")
        if self.merit_every > self.iterations:
            raise ValueError(f"merit_every ({self.merit_every}) exceeds iterations ({self.iterations})")
        return self


class MeritsSection(ViproxModel):
    """Merits computed at every checkpoint and the window of their rate fits."""
    names: List[str] = Field(default_factory=lambda: ["gap"])
    test_domain: TestDomain = Field(default_factory=TestDomain)
    fit_window: float = Field(default=0.5, gt=0, le=1)

    @field_validator("names")
    @classmethod
    def _known(cls, v: List[str]) -> List[str]:
        for name in v:
            if name not in MERITS:
                raise ValueError(f"unknown merit '{name}'; valid merit tags: {', '.join(MERITS.names())}")
        if len(set(v)) != len(v):
            raise ValueError("merit names must be distinct")
        return v


class SweepSection(ViproxModel):
    """One experiment per value of the setting at the dotted ``parameter`` path."""
    parameter: str = Field(min_length=1)
    values: List[Any] = Field(min_length=1)
    labels: Optional[List[str]] = None

    @model_validator(mode="after")
    def _labels(self) -> "SweepSection":
        if self.labels is not None and len(self.labels) != len(self.values):
            raise ValueError("sweep labels must match the number of values")
        if self.parameter.split(".")[0] in ("sweep", "name"):
            raise ValueError(f"cannot sweep over '{self.parameter}'")
        return self

    def label(self, index: int) -> str:
        if self.labels is not None:
            return self.labels[index]
        value = self.values[index]
        if isinstance(value, dict) and "kind" in value:
            return str(value["kind"])
        return f"{self.parameter}={value}"


class ExperimentConfig(ViproxModel):
    name: Optional[str] = None
    problem: ProblemSpec
    algorithm: AlgorithmSpec
    noise: NoiseModel = Field(default_factory=NoNoise)
    run: RunSection
    merits: MeritsSection = Field(default_factory=MeritsSection)
    sweep: Optional[SweepSection] = None
    output_dir: Optional[Path] = None

    @field_validator("output_dir")
    @classmethod
    def _output_dir(cls, v: Optional[Path]) -> Optional[Path]:
        if v is not None and str(v).strip() in ("", "."):
            raise ValueError("output_dir must name a directory")
        return v

    def variants(self) -> List["ExperimentConfig"]:
        """The sweep expanded into one config per value; the config itself without a sweep."""
        if self.sweep is None:
            return [self]
        base = self.model_dump(mode="json", exclude={"sweep"})
        return [parse_config(set_path(base, self.sweep.parameter, value)) for value in self.sweep.values]


def set_path(data: Dict[str, Any], path: str, value: Any) -> Dict[str, Any]:
    """Copy of ``data`` with the dotted ``path`` set to ``value``."""
    result = copy.deepcopy(data)
    keys = path.split(".")
    node = result
    for key in keys[:-1]:
        child = node.get(key)
        if not isinstance(child, dict):
            raise ConfigValidationError(f"sweep parameter '{path}' does not name a config section", [path])
        node = child
    node[keys[-1]] = copy.deepcopy(value)
    return result


def _check_tag(category: str, section: Any, valid) -> None:
    if isinstance(section, dict) and "kind" in section and section["kind"] not in valid:
        raise UnknownTagError(category, str(section["kind"]), valid)


def check_tags(data: Dict[str, Any]) -> None:
    """Report unknown tags before field validation so the message lists the valid ones."""
    _check_tag("problem", data.get("problem"), PROBLEMS.names())
    algorithm = data.get("algorithm")
    _check_tag("algorithm", algorithm, ALGORITHM_KINDS)
    if isinstance(algorithm, dict):
        if "metric" in algorithm and algorithm["metric"] not in METRICS:
            raise UnknownTagError("metric", str(algorithm["metric"]), METRICS.names())
        if "bregman" in algorithm and algorithm["bregman"] not in BREGMAN_FUNCTIONS:
            raise UnknownTagError("bregman", str(algorithm["bregman"]), BREGMAN_FUNCTIONS.names())
    _check_tag("noise", data.get("noise"), NOISE_KINDS)
    merits = data.get("merits")
    if isinstance(merits, dict) and isinstance(merits.get("names"), list):
        for name in merits["names"]:
            if name not in MERITS:
                raise UnknownTagError("merit", str(name), MERITS.names())


def parse_config(data: Any) -> ExperimentConfig:
    """Validate a config mapping.

    Raises:
        UnknownTagError: For an unknown problem, algorithm, noise, metric,
            Bregman or merit tag.
        ConfigValidationError: For any other invalid or unknown field.
    """
    if not isinstance(data, dict):
        raise ConfigValidationError("config must be a mapping of sections")
    check_tags(data)
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        fields = error_fields(exc)
        raise ConfigValidationError(f"invalid config ({', '.join(fields) or 'root'}): {exc}", fields) from exc


def bundled_configs() -> List[str]:
    """Names of the configs shipped with the package."""
    root = resources.files(CONFIG_PACKAGE)
    return sorted(p.name[: -len(CONFIG_SUFFIX)] for p in root.iterdir() if p.name.endswith(CONFIG_SUFFIX))


def read_config_text(source: Union[str, Path]) -> str:
    """Text of a config file, or of the bundled config named ``source``.

    Raises:
        ArtifactIOError: If neither exists or the file cannot be read.
    """
    path = Path(source)
    if not path.exists() and str(source) in bundled_configs():
        return resources.files(CONFIG_PACKAGE).joinpath(f"{source}{CONFIG_SUFFIX}").read_text(encoding="utf-8")
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ArtifactIOError(f"cannot read config ({exc.strerror or exc})", str(path)) from exc


def load_config(source: Union[str, Path]) -> ExperimentConfig:
    text = read_config_text(source)
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigValidationError(f"config is not valid YAML: {exc}") from exc
    config = parse_config(data)
    logger.debug("loaded config %s", source)
    return config


def dump_config(config: ExperimentConfig) -> str:
    """Normalized YAML with every default filled in."""
    return yaml.safe_dump(config.model_dump(mode="json"), sort_keys=False)
