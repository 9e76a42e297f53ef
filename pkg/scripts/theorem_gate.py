"""Randomized check of the locality theorem and of the determinism implication.

Draws local models (active + passive locality + anticorrelation) and records
their largest CHSH value; draws passive-locality candidates and records the
λ-conditional values found by extraction.

    python3 scripts/theorem_gate.py --models 2000 --seed 1
"""

import argparse
import random
from collections import Counter
from dataclasses import dataclass

from bellcheck.catalog import random_local_model, random_passive_candidate
from bellcheck.inequalities import max_chsh_declared
from bellcheck.locality import (
    check_active_locality,
    check_passive_locality,
    extract_deterministic_event,
)
from bellcheck.model import anticorrelation_check


@dataclass
class GateConfig:
    models: int = 1000
    candidates: int = 1000
    seed: int = 0


def run(cfg: GateConfig):
    rng = random.Random(cfg.seed)
    hist = Counter()
    for _ in range(cfg.models):
        m = random_local_model(rng, exact=True)
        assert check_active_locality(m) and check_passive_locality(m) and anticorrelation_check(m)
        value, _ = max_chsh_declared(m)
        hist[value] += 1
    cond_values = Counter()
    accepted = 0
    for _ in range(cfg.candidates):
        m = random_passive_candidate(rng)
        if not (check_passive_locality(m) and anticorrelation_check(m)):
            continue
        accepted += 1
        for ax in m.shared_axes():
            for c in extract_deterministic_event(m, ax).conditional:
                cond_values[c] += 1
    return hist, accepted, cond_values


def main():
    p = argparse.ArgumentParser(description="randomized locality-theorem gate")
    p.add_argument("--models", type=int, default=GateConfig.models)
    p.add_argument("--candidates", type=int, default=GateConfig.candidates)
    p.add_argument("--seed", type=int, default=GateConfig.seed)
    a = p.parse_args()
    hist, accepted, cond = run(GateConfig(a.models, a.candidates, a.seed))
    print("max CHSH over declared axes (local models):")
    for v in sorted(hist):
        print(f"  {str(v):>8}  {hist[v]}")
    print(f"passive + anticorrelated candidates accepted: {accepted}/{a.candidates}")
    print("lambda-conditional P(sigma1=up) values seen:", dict(sorted((str(k), v) for k, v in cond.items())))


if __name__ == "__main__":
    main()
