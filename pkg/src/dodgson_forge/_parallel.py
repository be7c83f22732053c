"""Minimal worker-pool context shared by the search-style operations.

Results are always reduced in submission order, so runs are deterministic
for any thread count.  CPU-bound pure-Python work gains little from threads
under the GIL; the pool exists so the CLI owns one knob and the call sites
stay structured for parallel execution.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


class Pool:
    def __init__(self, threads: int | None = None):
        if threads is None:
            threads = os.cpu_count() or 1
        self.threads = max(1, int(threads))

    def map(self, fn, items):
        items = list(items)
        if self.threads == 1 or len(items) <= 1:
            return [fn(x) for x in items]
        with ThreadPoolExecutor(max_workers=self.threads) as ex:
            return list(ex.map(fn, items))


SERIAL = Pool(1)
