"""Per-subspace density detectors and their weighted-vote ensemble.

Each detector accepts exactly the smallest set of training cells whose
empirical mass reaches 1 - alpha; anything outside, including cells never
seen in training, is rejected. Detector votes are weighted by validation
accuracy and the decision threshold is the largest cut that keeps the
validation false-positive rate within alpha.

Models are immutable once fitted; scoring is reentrant and safe to call
from multiple threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import SchemaError
from .preprocess import PreprocessModel
from .table import DiscreteTable, validate_attrs

NORMAL = "normal"
ANOMALY = "anomaly"


@dataclass
class SubspaceDetector:
    subspace: tuple[int, ...]
    cell_mass: dict[tuple[int, ...], float]
    accepted_cells: set[tuple[int, ...]]
    alpha: float

    def predict(self, row) -> int:
        """1 if the row's projection falls in the accepted region, else 0."""
        key = tuple(int(row[a]) for a in self.subspace)
        return 1 if key in self.accepted_cells else 0


def fit_detector(train: DiscreteTable, subspace, alpha: float) -> SubspaceDetector:
    """Build the minimum-volume cell set for one subspace.

    Cells are ranked by descending training mass (ties by tuple order)
    and accumulated until the mass reaches 1 - alpha; that prefix is the
    smallest acceptance region with type-I error at most alpha on the
    training distribution.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    subspace = validate_attrs(train, subspace)
    n = train.n_rows
    counts: dict[tuple[int, ...], int] = {}
    cols = train.codes[:, subspace]
    for row in cols:
        key = tuple(int(v) for v in row)
        counts[key] = counts.get(key, 0) + 1
    cell_mass = {key: c / n for key, c in counts.items()}
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    needed = (1.0 - alpha) * n
    accepted: set[tuple[int, ...]] = set()
    covered = 0
    for key, c in ranked:
        if covered >= needed - 1e-9:
            break
        accepted.add(key)
        covered += c
    return SubspaceDetector(subspace, cell_mass, accepted, alpha)


def detector_predict(detector: SubspaceDetector, row) -> int:
    return detector.predict(row)


@dataclass
class EnsembleModel:
    detectors: list[SubspaceDetector]
    weights: np.ndarray
    rho: float
    alpha: float
    preprocess: PreprocessModel | None = None

    def score(self, row) -> float:
        return float(sum(w * d.predict(row) for w, d in zip(self.weights, self.detectors)))

    def to_json_dict(self) -> dict:
        dets = []
        for d in self.detectors:
            cells = sorted(d.cell_mass.items())
            dets.append({
                "attrs": list(d.subspace),
                "cells": [[list(key), mass] for key, mass in cells],
                "accepted": [list(key) for key in sorted(d.accepted_cells)],
            })
        doc = {
            "alpha": self.alpha,
            "rho": self.rho,
            "weights": [float(w) for w in self.weights],
            "detectors": dets,
        }
        if self.preprocess is not None:
            doc["preprocess"] = self.preprocess.to_json_dict()
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json_dict(cls, doc: dict) -> "EnsembleModel":
        detectors = []
        for d in doc["detectors"]:
            mass = {tuple(key): float(m) for key, m in d["cells"]}
            detectors.append(SubspaceDetector(
                subspace=tuple(d["attrs"]),
                cell_mass=mass,
                accepted_cells={tuple(key) for key in d["accepted"]},
                alpha=float(doc["alpha"]),
            ))
        pp = PreprocessModel.from_json_dict(doc["preprocess"]) if "preprocess" in doc else None
        return cls(
            detectors=detectors,
            weights=np.asarray(doc["weights"], dtype=np.float64),
            rho=float(doc["rho"]),
            alpha=float(doc["alpha"]),
            preprocess=pp,
        )

    @classmethod
    def from_json(cls, text: str) -> "EnsembleModel":
        return cls.from_json_dict(json.loads(text))


def split_indices(n_rows: int, val_fraction: float, seed) -> tuple[np.ndarray, np.ndarray]:
    """Seeded shuffle split into (fit, validation) row indices."""
    if not 0.0 < val_fraction < 1.0:
        raise ValueError("val_fraction must be in (0, 1)")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n_rows)
    n_val = int(round(n_rows * val_fraction))
    n_val = min(max(n_val, 1), n_rows - 1)
    return perm[n_val:], perm[:n_val]


def fit_ensemble(
    train: DiscreteTable,
    subspaces,
    alpha: float = 0.05,
    val_fraction: float = 0.3,
    seed=0,
    preprocess: PreprocessModel | None = None,
) -> EnsembleModel:
    """Fit one detector per subspace and calibrate weights and threshold.

    The training rows are split by a seeded shuffle. Detectors fit on the
    fit part; each detector's validation error (fraction of held-out
    normals it rejects) turns into a weight proportional to 1 - error.
    The threshold rho is the largest value that keeps the fraction of
    validation rows scoring below it within alpha, i.e. the empirical
    alpha-quantile of validation scores taken from below.
    """
    attr_sets = [validate_attrs(train, s) for s in subspaces]
    if not attr_sets:
        raise ValueError("no subspaces given")
    if train.n_rows < 10:
        raise ValueError("need at least 10 training rows")
    fit_idx, val_idx = split_indices(train.n_rows, val_fraction, seed)
    if fit_idx.size == 0 or val_idx.size == 0:
        raise ValueError("split left an empty part")
    fit_part = train.take_rows(fit_idx)
    val_rows = train.codes[val_idx]

    detectors = [fit_detector(fit_part, attrs, alpha) for attrs in attr_sets]
    votes = np.array([[d.predict(row) for row in val_rows] for d in detectors], dtype=np.float64)
    errors = 1.0 - votes.mean(axis=1)
    raw = 1.0 - errors
    total = raw.sum()
    if total <= 0.0:
        weights = np.full(len(detectors), 1.0 / len(detectors))
    else:
        weights = raw / total

    scores = weights @ votes
    order = np.sort(scores)
    cut = int(np.floor(alpha * scores.size))
    rho = float(order[min(cut, scores.size - 1)])
    return EnsembleModel(detectors=detectors, weights=weights, rho=rho, alpha=alpha,
                         preprocess=preprocess)


def classify(model: EnsembleModel, row) -> tuple[float, str]:
    """Weighted vote for one coded row: (score, "normal" | "anomaly")."""
    n_attrs = max(max(d.subspace) for d in model.detectors) + 1
    if len(row) < n_attrs:
        raise SchemaError(f"row has {len(row)} codes, model needs at least {n_attrs}")
    score = model.score(row)
    return score, (NORMAL if score >= model.rho else ANOMALY)


def classify_table(model: EnsembleModel, table: DiscreteTable) -> tuple[np.ndarray, list[str]]:
    """Score every row of a coded table."""
    scores = np.empty(table.n_rows, dtype=np.float64)
    labels = []
    for i, row in enumerate(table.codes):
        s, label = classify(model, row)
        scores[i] = s
        labels.append(label)
    return scores, labels
