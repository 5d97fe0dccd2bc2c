"""Round-trip experiment: assemble canonical summands, conjugate, recover.

Usage::

    python3 scripts/round_trip.py --kind real --trials 200 --field rational
    python3 scripts/round_trip.py --kind complex --trials 50 --field complex --factors 3
"""

import argparse
import json
import time
from dataclasses import asdict, dataclass

import numpy as np

from sympcanon.canonical import canonicalize
from sympcanon.errors import IndeterminateError
from sympcanon.matrices import convert
from sympcanon.randomized import (
    conjugated_instance,
    random_complex_decomposition,
    random_real_decomposition,
    random_symplectic,
)
from sympcanon.scalars import COMPLEX, REAL


@dataclass
class Config:
    kind: str = "real"
    trials: int = 100
    field: str = "rational"
    max_summands: int = 6
    max_n: int = 3
    factors: int = 8
    seed: int = 0


def instance(cfg: Config, seed: int):
    make = random_real_decomposition if cfg.kind == "real" else random_complex_decomposition
    dec = make(seed, cfg.max_summands, cfg.max_n)
    if cfg.field in ("rational", "gaussian"):
        A, _ = conjugated_instance(dec, seed, factors=cfg.factors)
        return dec, A
    f = REAL if cfg.kind == "real" else COMPLEX
    C = np.asarray(dec.assemble(f))
    S = np.asarray(convert(random_symplectic(C.shape[0] // 2, REAL, seed, cfg.factors), f))
    A = S.T @ C @ S
    return dec, (A + A.T) / 2


def run(cfg: Config) -> dict:
    ok = wrong = indeterminate = 0
    worst = 0.0
    misses = []
    t0 = time.perf_counter()
    for k in range(cfg.trials):
        seed = cfg.seed + k
        dec, A = instance(cfg, seed)
        try:
            got = canonicalize(A, cfg.kind)
        except IndeterminateError:
            indeterminate += 1
            continue
        if got.matches(dec):
            ok += 1
            if got.residual is not None:
                worst = max(worst, got.residual)
        else:
            wrong += 1
            misses.append({"seed": seed, "expected": str(dec.summands), "got": str(got.summands)})
    return {
        "config": asdict(cfg),
        "recovered": ok,
        "wrong": wrong,
        "indeterminate": indeterminate,
        "worst_certificate_residual": worst,
        "seconds": round(time.perf_counter() - t0, 2),
        "misses": misses[:10],
    }


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in asdict(Config()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    cfg = Config(**vars(p.parse_args()))
    print(json.dumps(run(cfg), indent=2))


if __name__ == "__main__":
    main()
