"""Structured convex regularizers described by their behavior at the true signal.

A :class:`RegularizerSpec` records everything the error analysis needs to know
about the pair (regularizer, signal): the flavor of the norm, the ambient
dimension, and the support/sign pattern of the signal.  Signal magnitudes are
deliberately absent; every downstream quantity depends only on the shape of
the subdifferential at the signal, which the support pattern determines.

Two primitives are exported for each flavor:

* ``project_subdiff`` -- Euclidean projection onto the scaled subdifferential
  (consumed by the Gaussian-distance Monte Carlo),
* ``prox`` -- proximal operator of ``gamma * f`` (consumed by the solver).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

L1 = "l1"
BLOCK_L12 = "block_l12"

_UNIT_NORM_TOL = 1e-12


@dataclass
class RegularizerSpec:
    """Structure class plus the signal's support pattern.

    kind:
        ``"l1"`` (sparse vectors) or ``"block_l12"`` (block-sparse vectors
        penalized by the sum of block Euclidean norms).
    n:
        Ambient dimension.
    support:
        Sorted indices of the nonzero coordinates (l1) or nonzero blocks
        (block_l12).  Must be nonempty: the machinery assumes the signal is
        not a minimizer of the regularizer.
    signs:
        For l1 a length-k array of +-1.  For block_l12 a (k, block_size)
        array whose rows are the unit directions of the active blocks.
    block_size:
        Coordinates per block (block_l12 only; l1 behaves as block_size 1).
    """

    kind: str
    n: int
    support: tuple[int, ...]
    signs: np.ndarray
    block_size: int = 1

    def __post_init__(self):
        if self.kind not in (L1, BLOCK_L12):
            raise ValueError(f"unknown regularizer kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("ambient dimension n must be positive")
        if self.block_size < 1:
            raise ValueError("block_size must be positive")
        if self.kind == L1 and self.block_size != 1:
            raise ValueError("block_size is only meaningful for block_l12")
        if self.kind == BLOCK_L12 and self.n % self.block_size != 0:
            raise ValueError("n must be an exact multiple of block_size")

        self.support = tuple(int(i) for i in self.support)
        if len(self.support) == 0:
            raise ValueError("support must be nonempty")
        if list(self.support) != sorted(set(self.support)):
            raise ValueError("support indices must be sorted and distinct")
        if self.support[0] < 0 or self.support[-1] >= self.num_blocks:
            bound = "n" if self.kind == L1 else "n/block_size"
            raise ValueError(f"support indices must lie in [0, {bound})")

        self.signs = np.asarray(self.signs, dtype=float)
        if self.kind == L1:
            if self.signs.shape != (self.k,):
                raise ValueError("signs must have one entry per support index")
            if not np.all(np.abs(self.signs) == 1.0):
                raise ValueError("l1 signs must be +1 or -1")
        else:
            if self.signs.shape != (self.k, self.block_size):
                raise ValueError("need one unit direction per active block")
            norms = np.linalg.norm(self.signs, axis=1)
            if np.any(np.abs(norms - 1.0) > _UNIT_NORM_TOL):
                raise ValueError("block directions must have unit norm")

    @property
    def k(self) -> int:
        return len(self.support)

    @property
    def num_blocks(self) -> int:
        return self.n // self.block_size

    def to_json_dict(self) -> dict:
        doc = {
            "kind": self.kind,
            "n": self.n,
            "support": list(self.support),
            "signs": self.signs.tolist(),
        }
        if self.kind == BLOCK_L12:
            doc["block_size"] = self.block_size
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "RegularizerSpec":
        return cls(
            kind=doc["kind"],
            n=int(doc["n"]),
            support=tuple(doc["support"]),
            signs=np.asarray(doc["signs"], dtype=float),
            block_size=int(doc.get("block_size", 1)),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json(cls, text: str) -> "RegularizerSpec":
        return cls.from_json_dict(json.loads(text))


def _check_vector(spec: RegularizerSpec, h: np.ndarray) -> np.ndarray:
    h = np.asarray(h, dtype=float)
    if h.shape[-1] != spec.n:
        raise ValueError(f"expected vectors of length {spec.n}, got shape {h.shape}")
    return h


def project_subdiff(spec, h, tau):
    """Project ``h`` onto the subdifferential at the signal, scaled by ``tau``.

    ``h`` may be a single length-n vector or an array of row vectors with
    trailing axis n; rows are projected independently (used to vectorize the
    Monte Carlo estimators over samples).

    For l1 the scaled subdifferential fixes support coordinates at
    ``tau * sign`` and confines off-support coordinates to ``[-tau, tau]``,
    so the projection pins the former and clamps the latter.  For block_l12
    active blocks are pinned at ``tau * direction`` and inactive blocks are
    radially shrunk into the ball of radius ``tau``.
    """
    h = _check_vector(spec, h)
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    if spec.kind == L1:
        out = np.clip(h, -tau, tau)
        out[..., list(spec.support)] = tau * spec.signs
        return out

    blocks = h.reshape(h.shape[:-1] + (spec.num_blocks, spec.block_size))
    norms = np.linalg.norm(blocks, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(norms > 0.0, np.minimum(1.0, tau / norms), 0.0)
    out = blocks * scale[..., None]
    out[..., list(spec.support), :] = tau * spec.signs
    return out.reshape(h.shape)


def prox(spec, z, gamma):
    """Proximal map of ``gamma * f``: argmin_x 0.5*||x - z||^2 + gamma*f(x).

    Soft-thresholding coordinatewise for l1, radial shrinkage blockwise for
    block_l12.  ``gamma = 0`` is the identity.
    """
    z = _check_vector(spec, z)
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    if spec.kind == L1:
        return np.sign(z) * np.maximum(np.abs(z) - gamma, 0.0)

    blocks = z.reshape(z.shape[:-1] + (spec.num_blocks, spec.block_size))
    norms = np.linalg.norm(blocks, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(norms > 0.0, np.maximum(1.0 - gamma / norms, 0.0), 0.0)
    return (blocks * scale[..., None]).reshape(z.shape)


def regularizer_value(spec, x):
    """Evaluate f(x): the l1 norm, or the sum of block Euclidean norms."""
    x = _check_vector(spec, x)
    if spec.kind == L1:
        return float(np.sum(np.abs(x)))
    blocks = x.reshape(spec.num_blocks, spec.block_size)
    return float(np.sum(np.linalg.norm(blocks, axis=-1)))


def dist_to_subdiff(spec, h, tau):
    """Euclidean distance from a single vector ``h`` to the scaled subdifferential."""
    h = _check_vector(spec, np.asarray(h, dtype=float))
    if h.ndim != 1:
        raise ValueError("dist_to_subdiff expects a single vector")
    return float(np.linalg.norm(h - project_subdiff(spec, h, tau)))
