"""Service context threaded through every operation.

Bundles the store with the injectable pieces (clock, id/token source) so the
HTTP API, the CLI, and the tests all run the exact same code paths.
"""

from __future__ import annotations

import random
import secrets
import uuid
from dataclasses import dataclass, field

from zenith.clock import Clock, SystemClock
from zenith.config import AppConfig
from zenith.persistence.store import Store


class IdFactory:
    """UUIDs, session tokens, and salts; seedable for reproducible fixtures."""

    def __init__(self, rng: random.Random | None = None):
        self._rng = rng

    def uuid(self) -> uuid.UUID:
        if self._rng is None:
            return uuid.uuid4()
        return uuid.UUID(int=self._rng.getrandbits(128), version=4)

    def token(self) -> str:
        if self._rng is None:
            return secrets.token_hex(32)
        return self._rng.getrandbits(256).to_bytes(32, "big").hex()

    def salt(self) -> bytes:
        if self._rng is None:
            return secrets.token_bytes(16)
        return self._rng.getrandbits(128).to_bytes(16, "big")


@dataclass
class Runtime:
    store: Store
    config: AppConfig
    clock: Clock = field(default_factory=SystemClock)
    ids: IdFactory = field(default_factory=IdFactory)


def make_runtime(config: AppConfig) -> Runtime:
    return Runtime(store=Store(config.db.url), config=config)
