"""Order selection by AICc: KPSS-driven differencing, then stepwise or
exhaustive search over (p, q) and the mean term."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .arima import FittedModel, ModelOrder, _min_root_modulus, fit
from .criteria import aicc
from .diagnostics import kpss
from .errors import ArimaKitError, ConvergenceFailure, DegenerateInput, SelectionFailure
from .series import TimeSeries, as_array

__all__ = [
    "SearchKind",
    "SearchConfig",
    "TraceEntry",
    "SelectionReport",
    "aicc",
    "choose_d",
    "exhaustive_search",
    "stepwise_search",
    "select",
]

TIE_TOL = 1e-6
STEPWISE_SEEDS = ((0, 0), (1, 0), (0, 1), (2, 2))
# candidates with an AR or MA root this close to the unit circle are not
# eligible; such fits are boundary artefacts (usually cancelling roots)
ROOT_MARGIN = 1.01


class SearchKind(str, Enum):
    STEPWISE = "stepwise"
    EXHAUSTIVE = "exhaustive"
    BOTH = "both"


@dataclass(frozen=True)
class SearchConfig:
    max_p: int = 5
    max_q: int = 5
    max_d: int = 2
    stationarity_alpha: float = 0.05
    search_kind: SearchKind = SearchKind.BOTH
    workers: int = 1

    def __post_init__(self):
        if self.max_p < 0 or self.max_q < 0 or self.max_d < 0:
            raise DegenerateInput("search bounds must be non-negative")
        if self.max_d > 2:
            raise DegenerateInput("max_d is capped at 2")
        if not 0 < self.stationarity_alpha < 1:
            raise DegenerateInput("stationarity_alpha must lie in (0, 1)")
        object.__setattr__(self, "search_kind", SearchKind(self.search_kind))


@dataclass(frozen=True)
class TraceEntry:
    order: ModelOrder
    aicc: float
    error: str | None = None


@dataclass(frozen=True)
class SelectionReport:
    chosen: FittedModel
    trace: tuple
    d_chosen: int
    agreement: bool | None = None
    kind: str = ""
    other: "SelectionReport | None" = field(default=None, compare=False)


def choose_d(ts, cfg: SearchConfig = SearchConfig()) -> int:
    """Smallest d whose differenced series passes KPSS at ``stationarity_alpha``."""
    x = as_array(ts)
    if x.size < 10:
        raise DegenerateInput(f"choosing d needs at least 10 observations, got {x.size}")
    for d in range(cfg.max_d + 1):
        if np.ptp(x) == 0:
            return d
        if x.size < 10:
            return d
        if kpss(x).p_value >= cfg.stationarity_alpha:
            return d
        if d < cfg.max_d:
            x = np.diff(x)
    return cfg.max_d


def _rank(entry_order: ModelOrder):
    o = entry_order
    return (o.p + o.q, o.p, int(o.include_mean))


def _better(a: TraceEntry, b: TraceEntry | None) -> bool:
    """True when ``a`` beats ``b`` (ties within TIE_TOL broken by parsimony)."""
    if b is None or not math.isfinite(b.aicc):
        return math.isfinite(a.aicc)
    if not math.isfinite(a.aicc):
        return False
    if a.aicc < b.aicc - TIE_TOL:
        return True
    if abs(a.aicc - b.aicc) <= TIE_TOL:
        return _rank(a.order) < _rank(b.order)
    return False


class _FitCache:
    """Memoizes fits per order so both searches share work on one series."""

    def __init__(self, ts: TimeSeries):
        self.ts = ts
        self._store: dict = {}

    def get(self, order: ModelOrder):
        if order not in self._store:
            self._store[order] = self._compute(order)
        return self._store[order]

    def _compute(self, order):
        try:
            model = fit(self.ts, order)
        except ConvergenceFailure as exc:
            return None, TraceEntry(order, math.inf, f"ConvergenceFailure: {exc}")
        except ArimaKitError as exc:
            return None, TraceEntry(order, math.inf, f"{type(exc).__name__}: {exc}")
        except (np.linalg.LinAlgError, FloatingPointError, ValueError) as exc:
            return None, TraceEntry(order, math.inf, f"{type(exc).__name__}: {exc}")
        modulus = min(
            _min_root_modulus(model.params.phi, -1.0),
            _min_root_modulus(model.params.theta, 1.0),
        )
        if modulus < ROOT_MARGIN:
            return model, TraceEntry(order, math.inf, f"NearUnitRoot: smallest root modulus {modulus:.6f}")
        return model, TraceEntry(order, model.aicc)

    def prefetch(self, orders, workers: int):
        todo = [o for o in orders if o not in self._store]
        if workers > 1 and len(todo) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(self._compute, todo))
            for o, r in zip(todo, results):
                self._store[o] = r
        else:
            for o in todo:
                self.get(o)


def _as_series(ts) -> TimeSeries:
    return ts if isinstance(ts, TimeSeries) else TimeSeries(ts)


def _mean_options(d: int):
    return (False, True) if d == 0 else (False,)


def _grid(cfg: SearchConfig, d: int):
    return [
        ModelOrder(p, d, q, mean)
        for p in range(cfg.max_p + 1)
        for q in range(cfg.max_q + 1)
        for mean in _mean_options(d)
    ]


def _finish(kind, cache, visited, d) -> SelectionReport:
    best_model, best_entry = None, None
    trace = []
    for order in visited:
        model, entry = cache.get(order)
        trace.append(entry)
        if _better(entry, best_entry):
            best_model, best_entry = model, entry
    if best_model is None:
        raise SelectionFailure(f"{kind} search: every candidate fit failed")
    return SelectionReport(best_model, tuple(trace), d, None, kind)


def exhaustive_search(ts, cfg: SearchConfig = SearchConfig(), d=None, _cache=None):
    ts = _as_series(ts)
    d = choose_d(ts, cfg) if d is None else d
    cache = _cache or _FitCache(ts)
    grid = _grid(cfg, d)
    cache.prefetch(grid, cfg.workers)
    return _finish(SearchKind.EXHAUSTIVE.value, cache, grid, d)


def _neighbours(order: ModelOrder, cfg: SearchConfig):
    out = []
    for dp in (-1, 0, 1):
        for dq in (-1, 0, 1):
            if dp == 0 and dq == 0:
                continue
            p, q = order.p + dp, order.q + dq
            if 0 <= p <= cfg.max_p and 0 <= q <= cfg.max_q:
                out.append(ModelOrder(p, order.d, q, order.include_mean))
    if order.d == 0:
        out.append(ModelOrder(order.p, 0, order.q, not order.include_mean))
    return out


def stepwise_search(ts, cfg: SearchConfig = SearchConfig(), d=None, _cache=None):
    """Neighbourhood descent on AICc from a fixed set of seed models."""
    ts = _as_series(ts)
    d = choose_d(ts, cfg) if d is None else d
    cache = _cache or _FitCache(ts)
    visited: list = []
    seen: set = set()

    def visit(order):
        if order not in seen:
            seen.add(order)
            visited.append(order)
        return cache.get(order)[1]

    mean = d == 0
    current = None
    for p, q in STEPWISE_SEEDS:
        if p <= cfg.max_p and q <= cfg.max_q:
            entry = visit(ModelOrder(p, d, q, mean))
            if _better(entry, current):
                current = entry
    if current is None or not math.isfinite(current.aicc):
        # every seed failed; fall back to the smallest models before giving up
        for order in (ModelOrder(0, d, 0, mean), ModelOrder(0, d, 0, False)):
            entry = visit(order)
            if _better(entry, current):
                current = entry
    while current is not None and math.isfinite(current.aicc):
        step = None
        for nb in _neighbours(current.order, cfg):
            entry = visit(nb)
            if _better(entry, current) and _better(entry, step):
                step = entry
        if step is None:
            break
        current = step
    return _finish(SearchKind.STEPWISE.value, cache, visited, d)


def select(ts, cfg: SearchConfig = SearchConfig()) -> SelectionReport:
    """Run the configured search(es). With ``both``, the exhaustive result is
    returned and ``agreement`` records whether stepwise found the same order."""
    ts = _as_series(ts)
    d = choose_d(ts, cfg) if len(ts) >= 10 else 0
    cache = _FitCache(ts)
    kind = cfg.search_kind
    if kind == SearchKind.STEPWISE:
        return stepwise_search(ts, cfg, d, cache)
    if kind == SearchKind.EXHAUSTIVE:
        return exhaustive_search(ts, cfg, d, cache)
    ex = exhaustive_search(ts, cfg, d, cache)
    sw = stepwise_search(ts, cfg, d, cache)
    agree = ex.chosen.order == sw.chosen.order
    return SelectionReport(ex.chosen, ex.trace, d, agree, SearchKind.BOTH.value, sw)
