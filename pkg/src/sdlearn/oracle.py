"""Query access to a hidden instance, with exact accounting."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .instance import Instance, InstanceError, Weight, check_sequence, pick_by_rank


class QueryResponse(NamedTuple):
    value: Weight
    item: int


@dataclass(frozen=True)
class QueryRecord:
    agent: int
    prefix: tuple[int, ...]
    value: Weight
    item: int
    kind: str = "pick"  # "welfare" for the picks making up a welfare probe

    def to_json(self) -> dict:
        value = self.value if isinstance(self.value, int) else str(self.value)
        return {"agent": self.agent, "prefix": list(self.prefix), "value": value,
                "item": self.item, "kind": self.kind}


@dataclass
class QueryLedger:
    """Query counter plus the full transcript.

    A welfare probe on a full sequence is charged n and stored as its n
    underlying pick queries, so ``count == len(transcript)`` always holds.
    """

    count: int = 0
    transcript: list[QueryRecord] = field(default_factory=list)

    def record(self, rec: QueryRecord) -> None:
        self.transcript.append(rec)
        self.count += 1

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r.to_json(), sort_keys=True) + "\n" for r in self.transcript)


class Oracle:
    """The only channel through which a learner sees the hidden instance."""

    def __init__(self, instance: Instance):
        self.__instance = instance
        self.n = instance.n
        self.ledger = QueryLedger()

    def _answer(self, agent: int, prefix: tuple[int, ...]) -> QueryResponse:
        inst = self.__instance
        remaining = set(range(1, self.n + 1))
        for a in prefix:
            remaining.discard(pick_by_rank(inst.ranks, a, remaining))
        item = pick_by_rank(inst.ranks, agent, remaining)
        return QueryResponse(inst.w(agent, item), item)

    def query(self, agent: int, prefix: Sequence[int] = ()) -> QueryResponse:
        prefix = check_sequence(prefix, self.n)
        check_sequence((agent,), self.n)
        if agent in prefix:
            raise InstanceError(f"agent {agent} already acts in prefix {prefix}")
        resp = self._answer(agent, prefix)
        self.ledger.record(QueryRecord(agent, prefix, resp.value, resp.item))
        return resp

    def query_social_welfare(self, seq: Sequence[int]) -> Weight:
        seq = check_sequence(seq, self.n, full=True)
        total = 0
        for k, agent in enumerate(seq):
            resp = self._answer(agent, seq[:k])
            self.ledger.record(QueryRecord(agent, seq[:k], resp.value, resp.item, "welfare"))
            total += resp.value
        return total

    def query_count(self) -> int:
        return self.ledger.count


class ReplayOracle(Oracle):
    """Answers only from a recorded transcript; unknown queries are an error."""

    def __init__(self, n: int, transcript: Sequence[QueryRecord]):
        self.n = n
        self.ledger = QueryLedger()
        self._table = {}
        for rec in transcript:
            self._table[(rec.agent, tuple(rec.prefix))] = QueryResponse(rec.value, rec.item)

    @classmethod
    def from_jsonl(cls, n: int, text: str) -> ReplayOracle:
        from fractions import Fraction

        records = []
        for line in text.splitlines():
            if not line.strip():
                continue
            d = json.loads(line)
            value = d["value"] if isinstance(d["value"], int) else Fraction(d["value"])
            records.append(QueryRecord(d["agent"], tuple(d["prefix"]), value, d["item"], d.get("kind", "pick")))
        return cls(n, records)

    def _answer(self, agent, prefix):
        try:
            return self._table[(agent, tuple(prefix))]
        except KeyError:
            raise InstanceError(f"query ({agent}, {tuple(prefix)}) is not in the recorded transcript") from None
