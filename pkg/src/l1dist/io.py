"""Count, distribution and polynomial files."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .approx import BivarPolyCoeffs, PolyCoeffs
from .prob import CountVector, Distribution


def _lines(path) -> list[str]:
    text = Path(path).read_text(encoding="utf-8")
    return [ln.strip() for ln in text.splitlines() if ln.strip()]


def read_counts(path, rate_n: float | None = None) -> CountVector:
    """One non-negative integer per line, or a JSON object ``{"rate_n", "counts"}``.

    Plain files take ``rate_n`` from the argument, defaulting to the total count.
    """
    text = Path(path).read_text(encoding="utf-8").lstrip()
    if text.startswith("{"):
        obj = json.loads(text)
        return CountVector(np.asarray(obj["counts"], dtype=np.int64),
                           obj["rate_n"] if rate_n is None else rate_n)
    counts = []
    for ln in _lines(path):
        v = int(ln)
        if v < 0:
            raise ValueError(f"negative count {v} in {path}")
        counts.append(v)
    counts = np.asarray(counts, dtype=np.int64)
    if rate_n is None:
        rate_n = int(counts.sum())
    return CountVector(counts, rate_n)


def write_counts(X: CountVector, path, header: bool = False) -> None:
    path = Path(path)
    if header:
        path.write_text(json.dumps({"rate_n": X.rate_n, "counts": X.counts.tolist()}), encoding="utf-8")
    else:
        path.write_text("".join(f"{int(c)}\n" for c in X.counts), encoding="utf-8")


def read_distribution(path) -> Distribution:
    return Distribution(np.array([float(ln) for ln in _lines(path)]))


def write_distribution(P: Distribution, path) -> None:
    Path(path).write_text("".join(f"{p!r}\n" for p in P.probs.tolist()), encoding="utf-8")


def poly_to_json(poly) -> dict:
    return poly.to_json()


def poly_from_json(obj: dict):
    if "cheb" in obj:
        return BivarPolyCoeffs.from_json(obj)
    return PolyCoeffs.from_json(obj)
