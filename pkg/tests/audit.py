"""Ground-truth auditor for instrumented learner runs.

Lives in the test harness only: it reads the hidden instance, which the
learner itself never does.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from sdlearn.instance import Instance, execute_sequence, pick_by_rank
from sdlearn.learner import C1, C2, C3, C4, Observer
from sdlearn.matching import ProxyGraph


@dataclass(frozen=True)
class PotentialTriple:
    known: int
    weight_gap: object
    rank_gap: int


def rank_distance(proxy: ProxyGraph, instance: Instance, agent: int) -> int:
    return sum(abs(proxy.r(agent, j) - instance.r(agent, j)) for j in range(1, instance.n + 1))


def inversions(proxy: ProxyGraph, instance: Instance, agent: int) -> int:
    n = instance.n
    return sum(1 for j1 in range(1, n + 1) for j2 in range(1, n + 1)
               if proxy.r(agent, j1) < proxy.r(agent, j2) and instance.r(agent, j1) > instance.r(agent, j2))


def potential(proxy: ProxyGraph, instance: Instance) -> PotentialTriple:
    n = instance.n
    gap = sum(proxy.w(i, j) - instance.w(i, j) for i in range(1, n + 1) for j in range(1, n + 1))
    ranks = sum(rank_distance(proxy, instance, i) for i in range(1, n + 1))
    return PotentialTriple(len(proxy.known), gap, ranks)


def true_prefix_items(instance: Instance, prefix) -> set[int]:
    remaining = set(range(1, instance.n + 1))
    for a in prefix:
        remaining.discard(pick_by_rank(instance.ranks, a, remaining))
    return set(range(1, instance.n + 1)) - remaining


@dataclass
class Auditor(Observer):
    instance: Instance
    by_category: dict = field(default_factory=dict)
    progress_violations: list[str] = field(default_factory=list)
    edge_updates: dict = field(default_factory=dict)
    known_updates: int = 0
    iterations: int = 0
    mutations: int = 0
    cases: dict = field(default_factory=dict)
    _prev_weights: list | None = None
    _prev_known: int = 0
    _before: dict | None = None
    _break: dict | None = None

    def _fail(self, category, msg):
        self.by_category.setdefault(category, []).append(msg)

    @property
    def violations(self) -> list[str]:
        return [m for msgs in self.by_category.values() for m in msgs]

    # -- per mutation --------------------------------------------------------

    def on_mutation(self, proxy: ProxyGraph, where: str) -> None:
        inst, n = self.instance, self.instance.n
        self.mutations += 1
        for i in range(1, n + 1):
            row_values = {inst.w(i, j) for j in range(1, n + 1)}
            for j in range(1, n + 1):
                wp = proxy.w(i, j)
                if wp is None:
                    continue
                if (i, j) in proxy.known and wp != inst.w(i, j):
                    self._fail("overestimate", f"{where}: known edge ({i},{j}) has proxy {wp} != true {inst.w(i, j)}")
                if wp < inst.w(i, j):
                    self._fail("overestimate", f"{where}: proxy ({i},{j}) = {wp} under-estimates {inst.w(i, j)}")
                if wp not in row_values:
                    self._fail("weight_values", f"{where}: proxy ({i},{j}) = {wp} is not a true weight of agent {i}")
                old = None if self._prev_weights is None else self._prev_weights[i - 1][j - 1]
                if wp != old:
                    self.edge_updates[(i, j)] = self.edge_updates.get((i, j), 0) + 1
            if all(x is not None for x in proxy.weights[i - 1]) and rank_distance(proxy, inst, i) > n * n:
                self._fail("rank_cap", f"{where}: rank distance of agent {i} exceeds n^2")
        if len(proxy.known) != self._prev_known:
            self.known_updates += 1
            self._prev_known = len(proxy.known)
        self._prev_weights = [row[:] for row in proxy.weights]
        if where not in (C2, C3, C4) and proxy.is_complete() and proxy.monotonicity_violations():
            self._fail("monotone", f"{where}: proxy ranks violate monotonicity")

    # -- per iteration -------------------------------------------------------

    def before_iteration(self, state) -> None:
        proxy = state.proxy
        if state.w_star() > state.w_prime():
            self._fail("state", f"iteration {state.iteration}: w'(M*) > w'(M')")
        if any((i, j) not in proxy.known for i, j in state.m_star.edges()):
            self._fail("state", f"iteration {state.iteration}: M* uses an unknown edge")
        self._before = {
            "proxy": proxy.copy(),
            "m_prime": state.m_prime,
            "pi": state.pi,
            "w_prime": state.w_prime(),
            "w_star": state.w_star(),
        }
        self._break = None

    def on_replay_break(self, state, position: int) -> None:
        pi, m_prime = state.pi, state.m_prime
        a = pi[position - 1]
        taken = true_prefix_items(self.instance, pi[:position - 1])
        self._break = {"agent": a, "target_available": m_prime[a] not in taken}

    def after_iteration(self, state, event) -> None:
        self.iterations += 1
        self.cases[event.kind] = self.cases.get(event.kind, 0) + 1
        inst = self.instance
        b = self._before
        proxy0, m_prime, pi = b["proxy"], b["m_prime"], b["pi"]
        sw = execute_sequence(inst, pi).weight(inst.weights)
        if sw > b["w_prime"]:
            self._fail("state", f"iteration {event.iteration}: SW(pi) = {sw} exceeds w'(M') = {b['w_prime']}")

        holds = []
        if sw == b["w_prime"] == b["w_star"]:
            holds.append(C1)
        else:
            seen = set()
            for k, a in enumerate(pi):
                t = pick_by_rank(inst.ranks, a, set(range(1, inst.n + 1)) - seen)
                if not ((a, t) in proxy0.known and m_prime[a] == t):
                    break
                seen.add(t)
            else:
                a = t = None
            if a is not None:
                target = m_prime[a]
                if (a, t) not in proxy0.known:
                    holds.append(C2)
                if (a, t) in proxy0.known and m_prime[a] != t and inst.w(a, t) < proxy0.w(a, target):
                    holds.append(C3)
                if (a, t) in proxy0.known and m_prime[a] != t and inst.w(a, t) == proxy0.w(a, target):
                    holds.append(C4)
                if (event.agent, event.item) != (a, t):
                    self._fail("case", f"iteration {event.iteration}: learner broke at {(event.agent, event.item)}, truth at {(a, t)}")
        if len(holds) != 1 or holds[0] != event.kind:
            self._fail("case", f"iteration {event.iteration}: conditions {holds} but learner reported {event.kind}")
        if event.kind in (C3, C4) and not (self._break and self._break["target_available"]):
            self._fail("case", f"iteration {event.iteration}: M'(a_i) not available at a_i's turn")
        if event.kind == C1:
            return

        a = event.agent
        proxy1 = state.proxy
        target = m_prime[a]
        grew = len(proxy1.known) > len(proxy0.known)
        gap0 = proxy0.w(a, target) - inst.w(a, target)
        gap1 = proxy1.w(a, target) - inst.w(a, target)
        rd0, rd1 = rank_distance(proxy0, inst, a), rank_distance(proxy1, inst, a)
        if not (grew or gap1 < gap0 or rd1 < rd0):
            self.progress_violations.append(
                f"iteration {event.iteration} ({event.kind}, agent {a}): |E*| {len(proxy0.known)}->{len(proxy1.known)}, "
                f"gap {gap0}->{gap1}, rank distance {rd0}->{rd1}, "
                f"inversions {inversions(proxy0, inst, a)}->{inversions(proxy1, inst, a)}")

    def cap_violations(self) -> list[str]:
        n = self.instance.n
        out = []
        if self.known_updates > n * n:
            out.append(f"|E*| updated {self.known_updates} > n^2 times")
        for e, c in self.edge_updates.items():
            if c > n:
                out.append(f"edge {e} proxy weight updated {c} > n times")
        return out
