"""Random well-formed frameworks for property tests and benchmarks."""

from __future__ import annotations

import numpy as np

from .aaf import Argument, ArgumentationFramework, ArgumentKind


def random_framework(rng: np.random.Generator, n: int, density: float,
                     decision_fraction: float = 0.3, self_attacks: bool = True) -> ArgumentationFramework:
    """``n`` arguments ``a00, a01, ...``; each ordered pair attacks with probability ``density``.

    Decision-decision attacks are completed in both directions and
    decision-to-belief attacks are dropped, so the result always validates.
    """
    width = max(2, len(str(max(n - 1, 0))))
    fw = ArgumentationFramework()
    for i in range(n):
        kind = ArgumentKind.DECISION if rng.random() < decision_fraction else ArgumentKind.BELIEF
        fw.add_argument(Argument(f"a{i:0{width}d}", kind))
    ids = fw.ids
    hits = rng.random((n, n)) < density
    for i in range(n):
        for j in range(n):
            if not hits[i, j] or (i == j and not self_attacks):
                continue
            a, b = ids[i], ids[j]
            if fw.argument(a).is_decision and not fw.argument(b).is_decision:
                continue
            fw.add_attack(a, b)
    return fw


def corpus(seed: int, count: int, max_n: int = 12, min_n: int = 0,
           density: tuple[float, float] = (0.1, 0.5)):
    """Yield ``count`` random frameworks with sizes in ``[min_n, max_n]``."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(min_n, max_n + 1))
        d = float(rng.uniform(*density))
        yield random_framework(rng, n, d, decision_fraction=float(rng.uniform(0.0, 0.6)))
