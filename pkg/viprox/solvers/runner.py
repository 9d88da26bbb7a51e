"""
The experiment loop and its trace.

Scalars (step, residual, accumulated squared residual) are recorded every
iteration. Iterates are kept at checkpoint iterations only: every iteration
up to ``CHECKPOINT_DENSE``, log-spaced afterwards, and the last one. Merit
hooks run at the checkpoints.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Union

import numpy as np

from ..config import settings
from ..core.exceptions import ConfigurationError, DivergenceError, InvalidArgumentError
from ..geometry.bregman import BREGMAN_FUNCTIONS
from ..geometry.metrics import METRICS
from ..problems.base import VIProblem
from ..problems.oracle import NoNoise, StochasticOracle
from .algorithms import AdaProx, EGAdaptive, EGConstant, EGInverseSqrt
from .state import SolverState
from .steps import adaprox_step, eg_step, euclidean_projection

logger = logging.getLogger(__name__)

Algorithm = Union[EGConstant, EGInverseSqrt, EGAdaptive, AdaProx]


@dataclass
class CheckpointRecord:
    """Iterates around iteration ``n``: ``X_n``, ``X_{n+1/2}``, ``X_{n+1}`` and the running average."""
    n: int
    x: np.ndarray
    x_lead: np.ndarray
    x_next: np.ndarray
    avg: np.ndarray


MeritHook = Callable[[CheckpointRecord], float]

TRACE_SERIES = ("eta", "delta", "sum_delta_sq")


@dataclass
class Trace:
    """Record of one run."""
    algorithm: str
    seed: int
    iterations: int
    eta: np.ndarray
    delta: np.ndarray
    sum_delta_sq: np.ndarray
    records: List[CheckpointRecord] = field(default_factory=list)
    merits: Dict[str, Dict[int, float]] = field(default_factory=dict)
    diverged: bool = False
    diverged_at: Optional[int] = None
    next_eta: float = float("nan")

    @property
    def length(self) -> int:
        """Number of recorded iterations (shorter than ``iterations`` after divergence)."""
        return int(self.eta.shape[0])

    def series(self, name: str):
        """A complete scalar series, or ``(iterations, values)`` of a merit."""
        if name in TRACE_SERIES:
            return getattr(self, name)
        if name not in self.merits:
            raise KeyError(f"trace has no series '{name}'")
        points = sorted(self.merits[name].items())
        return (np.array([n for n, _ in points], dtype=int),
                np.array([v for _, v in points], dtype=float))

    def checkpoints(self) -> List[CheckpointRecord]:
        return list(self.records)

    def final(self) -> CheckpointRecord:
        if not self.records:
            raise ValueError("trace holds no checkpoints")
        return self.records[-1]

    def final_merit(self, name: str) -> float:
        values = self.merits.get(name)
        if not values:
            return float("nan")
        return values[max(values)]

    def to_rows(self, columns: Optional[List[str]] = None) -> List[dict]:
        """One dict per iteration; merit entries are ``None`` away from checkpoints."""
        names = columns if columns is not None else sorted(self.merits)
        rows = []
        for i in range(self.length):
            n = i + 1
            row = {"iter": n, "eta": self.eta[i], "delta": self.delta[i], "sum_delta_sq": self.sum_delta_sq[i]}
            for name in names:
                row[name] = self.merits.get(name, {}).get(n)
            row["diverged"] = self.diverged and self.diverged_at == n
            rows.append(row)
        return rows


def checkpoint_schedule(iterations: int, dense: Optional[int] = None,
                        per_decade: Optional[int] = None, every: Optional[int] = None) -> np.ndarray:
    """Sorted checkpoint iterations: ``1..dense``, then log-spaced, then ``iterations``.

    With ``every`` the schedule is every ``every``-th iteration plus the last one instead.
    """
    if every is not None:
        if every < 1:
            raise InvalidArgumentError("checkpoint cadence must be at least 1")
        return np.union1d(np.arange(every, iterations + 1, every), [iterations]).astype(int)
    dense = settings.CHECKPOINT_DENSE if dense is None else dense
    per_decade = settings.CHECKPOINTS_PER_DECADE if per_decade is None else per_decade
    points = set(range(1, min(dense, iterations) + 1))
    if iterations > dense:
        first = int(np.ceil(np.log10(dense) * per_decade))
        last = int(np.floor(np.log10(iterations) * per_decade))
        for k in range(first, last + 1):
            n = int(round(10 ** (k / per_decade)))
            if dense < n <= iterations:
                points.add(n)
    points.add(iterations)
    return np.array(sorted(points), dtype=int)


def as_oracle(target: Union[VIProblem, StochasticOracle], seed: int = 0) -> StochasticOracle:
    if isinstance(target, StochasticOracle):
        return target
    if isinstance(target, VIProblem):
        return StochasticOracle(target, NoNoise(), seed)
    raise InvalidArgumentError(f"expected a problem or an oracle, got {type(target).__name__}")


def make_stepper(algorithm: Algorithm, oracle: StochasticOracle, divergence_norm: Optional[float] = None):
    """Bind an algorithm spec to a ``state -> state`` step function."""
    domain = oracle.base.domain
    if isinstance(algorithm, AdaProx):
        metric = METRICS.get(algorithm.metric)
        h = BREGMAN_FUNCTIONS.get(algorithm.bregman)
        if not h.supports(domain):
            raise ConfigurationError(
                f"bregman '{algorithm.bregman}' is not compatible with the {domain.kind} domain of {oracle.base.kind}"
            )
        return lambda state: adaprox_step(state, oracle, metric, h, domain, divergence_norm)
    try:
        projection = euclidean_projection(domain)
    except InvalidArgumentError as exc:
        raise ConfigurationError(f"{algorithm.kind} needs a Euclidean projection: {exc}") from exc
    return lambda state: eg_step(state, oracle, projection, divergence_norm)


def run(target: Union[VIProblem, StochasticOracle], algorithm: Algorithm, iterations: int,
        seed: int = 0, x0=None, merit_hooks: Optional[Mapping[str, MeritHook]] = None,
        raise_on_divergence: bool = False, checkpoint_dense: Optional[int] = None,
        checkpoints_per_decade: Optional[int] = None,
        merit_every: Optional[int] = None,
        divergence_norm: Optional[float] = None) -> Trace:
    """Run ``iterations`` steps of ``algorithm`` from ``x0`` (default: the problem's initial point).

    Divergence truncates the trace and sets its flag; with
    ``raise_on_divergence`` a :class:`DivergenceError` is raised instead.
    """
    if iterations < 1:
        raise ConfigurationError("iterations must be at least 1")
    oracle = as_oracle(target, seed)
    problem = oracle.base
    start = problem.initial_point() if x0 is None else x0
    state = SolverState.initial(problem.check(start, "x0"), algorithm.policy())
    step = make_stepper(algorithm, oracle, divergence_norm)
    hooks = dict(merit_hooks or {})
    schedule = set(checkpoint_schedule(iterations, checkpoint_dense, checkpoints_per_decade,
                                       merit_every).tolist())

    eta = np.empty(iterations)
    delta = np.empty(iterations)
    sum_delta_sq = np.empty(iterations)
    trace = Trace(algorithm=algorithm.kind, seed=oracle.seed, iterations=iterations,
                  eta=eta, delta=delta, sum_delta_sq=sum_delta_sq,
                  merits={name: {} for name in hooks})
    logger.info("run start: %s on %s (dim=%d, T=%d, seed=%d)",
                algorithm.kind, problem.kind, problem.dim, iterations, oracle.seed)

    for i in range(iterations):
        n = i + 1
        x_n = state.x
        state = step(state)
        eta[i] = state.eta_used
        delta[i] = state.delta
        sum_delta_sq[i] = state.policy.sum_delta_sq if state.n > n else np.nan
        if state.diverged:
            trace.diverged = True
            trace.diverged_at = n
            trace.eta, trace.delta, trace.sum_delta_sq = eta[:n], delta[:n], sum_delta_sq[:n]
            logger.warning("run diverged at iteration %d (%s, seed=%d)", n, algorithm.kind, oracle.seed)
            if raise_on_divergence:
                raise DivergenceError(f"{algorithm.kind} diverged at iteration {n}", iteration=n)
            break
        if n in schedule:
            record = CheckpointRecord(n=n, x=x_n, x_lead=state.x_lead, x_next=state.x, avg=state.average)
            trace.records.append(record)
            for name, hook in hooks.items():
                trace.merits[name][n] = float(hook(record))
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug("iter %d: eta=%.6g delta=%.6g", n, eta[i], delta[i])

    trace.next_eta = state.policy.current
    logger.info("run finished: %d iterations, final eta=%.6g, diverged=%s",
                trace.length, trace.next_eta, trace.diverged)
    return trace


def eta_infinity_estimate(trace: Trace) -> float:
    """Observed limit of the step size: the step that would follow the last iteration."""
    return float(trace.next_eta)
