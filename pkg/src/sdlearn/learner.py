"""Query-efficient search for a welfare-optimal action sequence.

The learner keeps an over-estimating proxy of the hidden instance, computes
a maximum-weight Pareto-optimal matching of the proxy together with a
sequence that induces it, and runs that sequence through the oracle.  Each
failed run either reveals a new edge weight, lowers a proxy weight, or fixes
an inverted pair of proxy ranks, until the sequence's true welfare matches
both the proxy optimum and the best matching over known edges.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .instance import ActionSequence, Matching, Weight
from .matching import ProxyGraph, max_weight_matching_restricted, mwpo
from .oracle import Oracle, QueryLedger

C1, C2, C3, C4 = "C1-return", "C2-new-edge", "C3-weight-drop", "C4-rank-swap"


class BudgetExceeded(RuntimeError):
    """More than n**5 queries were used; always an implementation bug."""


class InconsistentState(RuntimeError):
    """The learner reached a state its correctness argument rules out."""


@dataclass(frozen=True)
class TraceEvent:
    kind: str
    iteration: int
    agent: int | None = None
    item: int | None = None
    value: Weight | None = None
    queries: int = 0
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"event": "iteration", "kind": self.kind, "iteration": self.iteration,
                "agent": self.agent, "item": self.item, "value": _enc(self.value),
                "queries": self.queries, "detail": self.detail}


@dataclass
class LearnerState:
    proxy: ProxyGraph
    m_star: Matching | None = None
    m_prime: Matching | None = None
    pi: ActionSequence = ()
    iteration: int = 0

    def w_star(self) -> Weight:
        return self.m_star.weight(self.proxy.weights)

    def w_prime(self) -> Weight:
        return self.m_prime.weight(self.proxy.weights)


@dataclass
class SolveResult:
    sequence: ActionSequence
    welfare: Weight
    ledger: QueryLedger
    events: list[TraceEvent]
    trace: list[dict]
    state: LearnerState

    @property
    def queries(self) -> int:
        return self.ledger.count

    def trace_jsonl(self) -> str:
        return "".join(json.dumps(rec, sort_keys=True) + "\n" for rec in self.trace)


class Observer:
    """Hooks for instrumented runs.  The default implementation does nothing."""

    def on_mutation(self, proxy: ProxyGraph, where: str) -> None:
        pass

    def before_iteration(self, state: LearnerState) -> None:
        pass

    def on_replay_break(self, state: LearnerState, position: int) -> None:
        """``pi[position - 1]`` is the agent whose query broke the replay."""

    def after_iteration(self, state: LearnerState, event: TraceEvent) -> None:
        pass


def _enc(x: Any):
    if x is None or isinstance(x, int):
        return x
    return str(x)


def rank_repair(proxy: ProxyGraph, agent: int) -> ProxyGraph:
    proxy.rank_repair(agent)
    return proxy


class _Budget:
    def __init__(self, oracle: Oracle):
        self.oracle = oracle
        self.limit = oracle.n ** 5

    def check(self):
        if self.oracle.query_count() > self.limit:
            raise BudgetExceeded(f"{self.oracle.query_count()} queries exceed n^5 = {self.limit}")


def phase1(oracle: Oracle, observer: Observer | None = None) -> ProxyGraph:
    """Learn every agent's favourite item and use its value as the row's upper bound."""
    observer = observer or Observer()
    n = oracle.n
    proxy = ProxyGraph(n)
    for i in range(1, n + 1):
        v, t = oracle.query(i, ())
        proxy.weights[i - 1] = [v] * n
        proxy.known.add((i, t))
        proxy.move_to_rank(i, t, 1)
        observer.on_mutation(proxy, f"phase1:{i}")
    return proxy


def phase2(oracle: Oracle, proxy: ProxyGraph, observer: Observer | None = None) -> ProxyGraph:
    """Run (1, ..., n) so the known edges contain a perfect matching."""
    observer = observer or Observer()
    n = oracle.n
    for i in range(2, n + 1):
        v, t = oracle.query(i, tuple(range(1, i)))
        top = proxy.w(i, proxy.item_at_rank(i, 1))
        proxy.weights[i - 1][t - 1] = v
        proxy.known.add((i, t))
        if v == top and t != proxy.item_at_rank(i, 1):
            proxy.move_to_rank(i, t, 2)
        elif v != top:
            proxy.move_to_rank(i, t, n)
        observer.on_mutation(proxy, f"phase2:{i}")
    return proxy


# Per-case proxy updates, kept separate so each can be inspected on its own.

def _learn_edge(proxy: ProxyGraph, agent: int, item: int, v: Weight) -> None:
    proxy.known.add((agent, item))
    proxy.weights[agent - 1][item - 1] = v


def _lower_weight(proxy: ProxyGraph, agent: int, item: int, v: Weight) -> None:
    proxy.weights[agent - 1][item - 1] = v


def _swap_ranks(proxy: ProxyGraph, agent: int, j1: int, j2: int) -> None:
    proxy.swap_ranks(agent, j1, j2)


def _refresh(state: LearnerState) -> None:
    proxy = state.proxy
    state.m_star = max_weight_matching_restricted(proxy.weights, proxy.known)
    if state.m_star is None:
        raise InconsistentState("known edges no longer contain a perfect matching")
    state.m_prime, state.pi = mwpo(proxy)


def solve(oracle: Oracle, observer: Observer | None = None) -> SolveResult:
    """Find a welfare-optimal action sequence using at most n**5 queries."""
    observer = observer or Observer()
    n = oracle.n
    budget = _Budget(oracle)
    trace: list[dict] = []
    events: list[TraceEvent] = []

    proxy = phase1(oracle, observer)
    budget.check()
    trace.append({"event": "phase", "phase": 1, "queries": oracle.query_count()})
    state = LearnerState(proxy)

    if n == 1:
        welfare = proxy.w(1, 1)
        state.m_star = state.m_prime = Matching((1,))
        state.pi = (1,)
        ev = TraceEvent(C1, 0, 1, 1, welfare, oracle.query_count(), {"shortcut": "n=1"})
        events.append(ev)
        trace.append(ev.to_json())
        return SolveResult((1,), welfare, oracle.ledger, events, trace, state)

    phase2(oracle, proxy, observer)
    budget.check()
    trace.append({"event": "phase", "phase": 2, "queries": oracle.query_count()})
    _refresh(state)

    while state.w_prime() >= state.w_star():
        state.iteration += 1
        observer.before_iteration(state)
        w_prime, w_star = state.w_prime(), state.w_star()
        pi, m_prime = state.pi, state.m_prime

        sw = oracle.query_social_welfare(pi)
        budget.check()
        if sw == w_prime == w_star:
            ev = TraceEvent(C1, state.iteration, None, None, sw, oracle.query_count(),
                            {"sequence": list(pi), "w_prime": _enc(w_prime), "w_star": _enc(w_star)})
            events.append(ev)
            trace.append(ev.to_json())
            observer.after_iteration(state, ev)
            return SolveResult(pi, sw, oracle.ledger, events, trace, state)

        taken: set[int] = set()
        for k in range(n):
            a = pi[k]
            v, t = oracle.query(a, pi[:k])
            budget.check()
            if not ((a, t) in proxy.known and m_prime[a] == t):
                break
            taken.add(t)
        else:
            raise InconsistentState(f"replay of {pi} stayed inside known M' edges although the welfare check failed")
        position = k + 1
        target = m_prime[a]
        observer.on_replay_break(state, position)

        if (a, t) not in proxy.known:
            kind = C2
            _learn_edge(proxy, a, t, v)
        else:
            if target in taken:
                raise InconsistentState(f"item {target} of agent {a} was taken before their turn")
            current = proxy.w(a, target)
            if v < current:
                kind = C3
                _lower_weight(proxy, a, target, v)
            elif v == current:
                kind = C4
                _swap_ranks(proxy, a, t, target)
            else:
                raise InconsistentState(
                    f"agent {a} picked known item {t} worth {v} over item {target} with proxy weight {current}")
        observer.on_mutation(proxy, kind)
        proxy.rank_repair(a)
        observer.on_mutation(proxy, "rank")

        ev = TraceEvent(kind, state.iteration, a, t, v, oracle.query_count(),
                        {"position": position, "m_prime_item": target, "welfare_probe": _enc(sw),
                         "w_prime": _enc(w_prime), "w_star": _enc(w_star)})
        events.append(ev)
        trace.append(ev.to_json())
        _refresh(state)
        observer.after_iteration(state, ev)

    raise InconsistentState("proxy optimum fell below the best known-edge matching")
