"""Thread-safe call accounting for every model capability."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

CAPABILITIES = ("embed", "score:cheap", "score:expensive", "spans", "generate")


@dataclass
class CapabilityStats:
    calls: int = 0
    failures: int = 0
    latency_seconds: float = 0.0


@dataclass
class CallLedger:
    """Per-capability counters plus the LLM-call count the pipeline reports.

    A "generate" call is an LLM call; every other capability is a small-model
    call and does not touch ``llm_calls``. Counters only ever increase.
    """

    _stats: dict[str, CapabilityStats] = field(
        default_factory=lambda: {c: CapabilityStats() for c in CAPABILITIES}
    )
    _llm_calls: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def record(self, capability: str, latency_seconds: float, ok: bool = True) -> None:
        with self._lock:
            stats = self._stats.setdefault(capability, CapabilityStats())
            stats.calls += 1
            stats.latency_seconds += max(latency_seconds, 0.0)
            if not ok:
                stats.failures += 1
            elif capability == "generate":
                self._llm_calls += 1

    @property
    def llm_calls(self) -> int:
        with self._lock:
            return self._llm_calls

    def calls(self, capability: str) -> int:
        with self._lock:
            stats = self._stats.get(capability)
            return stats.calls if stats else 0

    def snapshot(self) -> dict:
        with self._lock:
            return {
                "llm_calls": self._llm_calls,
                "capabilities": {
                    name: {
                        "calls": s.calls,
                        "failures": s.failures,
                        "latency_seconds": s.latency_seconds,
                    }
                    for name, s in self._stats.items()
                },
            }
