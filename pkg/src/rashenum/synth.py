"""Seeded synthetic binary datasets for tests and benchmarks.

Feature bits are i.i.d. fair coin flips; labels come from a random depth-2
tree over the features, then flipped (classification) or perturbed
(regression) at the given noise rate.
"""
from __future__ import annotations

import numpy as np

from .dataset import BinaryDataset
from .trees import predict


def _random_depth2_tree(rng, num_features, num_classes):
    f_root, f_left, f_right = rng.integers(0, num_features, size=3)
    leaves = rng.integers(0, num_classes, size=4)
    return ("split", int(f_root),
            ("split", int(f_left),
             ("leaf", int(leaves[0])), ("leaf", int(leaves[1]))),
            ("split", int(f_right),
             ("leaf", int(leaves[2])), ("leaf", int(leaves[3]))))


def generate_dataset(num_samples, num_features, seed, noise=0.1,
                     task="classification", num_classes=2) -> BinaryDataset:
    """Random dataset with labels from a hidden random depth-2 tree plus noise.

    Classification noise: each label resampled uniformly with probability
    `noise`. Regression: leaf values are standard normals and `noise` is the
    standard deviation of additive Gaussian noise.
    """
    if num_samples < 1 or num_features < 1:
        raise ValueError("need at least one sample and one feature")
    rng = np.random.default_rng(seed)
    X = rng.integers(0, 2, size=(num_samples, num_features)).astype(np.int8)
    tree = _random_depth2_tree(rng, num_features, num_classes)
    base = np.array([predict(tree, X[i]) for i in range(num_samples)])
    if task == "classification":
        labels = base.astype(np.int64)
        flip = rng.random(num_samples) < noise
        labels[flip] = rng.integers(0, num_classes, size=int(flip.sum()))
    elif task == "regression":
        leaf_values = {k: float(v) for k, v in
                       enumerate(rng.normal(size=num_classes))}
        labels = np.array([leaf_values[int(b)] for b in base])
        labels = labels + noise * rng.normal(size=num_samples)
    else:
        raise ValueError(f"unknown task {task!r}")
    return BinaryDataset.from_arrays(X, labels, task=task)
