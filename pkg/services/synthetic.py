"""Synthetic paired corpus driven by a shared Gaussian latent."""

import logging

import numpy as np
from scipy.cluster.vq import kmeans2
from scipy.special import expit

from config.settings import SYNTHETIC_DEFAULTS
from .data import FeatureMatrix, ModalityDataset, PairedCorpus, SpaceKind
from utils.errors import InvalidArgumentError

logger = logging.getLogger(__name__)


def make_synthetic_corpus(
    n: int = SYNTHETIC_DEFAULTS["n"],
    latent_dim: int = SYNTHETIC_DEFAULTS["latent_dim"],
    dim_a: int = SYNTHETIC_DEFAULTS["dim_a"],
    dim_b: int = SYNTHETIC_DEFAULTS["dim_b"],
    n_labels: int = SYNTHETIC_DEFAULTS["n_labels"],
    seed: int = SYNTHETIC_DEFAULTS["seed"],
) -> PairedCorpus:
    """
    Build an image-like and a text-like modality from one latent.

    Z ~ N(0,1)^{n x latent_dim}; modality A is ZA (linear), modality B is
    sigmoid(ZB); labels are k-means clusters of Z. Object i of A is paired
    with object i of B.
    """
    if n < 2 or latent_dim < 1 or dim_a < 1 or dim_b < 1:
        raise InvalidArgumentError("synthetic corpus sizes must be positive (n >= 2)")
    if not 1 <= n_labels <= n:
        raise InvalidArgumentError(f"n_labels must be in [1, {n}], got {n_labels}")

    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, latent_dim))
    a = rng.standard_normal((latent_dim, dim_a))
    b = rng.standard_normal((latent_dim, dim_b))

    _, assignment = kmeans2(z, n_labels, minit="++", seed=seed)
    labels = tuple(f"c{int(c)}" for c in assignment)
    ids = tuple(str(i) for i in range(n))

    mod_a = ModalityDataset(FeatureMatrix(z @ a), ids, labels, SpaceKind.EUCLIDEAN)
    mod_b = ModalityDataset(FeatureMatrix(expit(z @ b)), ids, labels, SpaceKind.EUCLIDEAN)

    logger.info(
        "Synthetic corpus: n=%d, latent=%d, A dim=%d, B dim=%d, %d labels",
        n, latent_dim, dim_a, dim_b, len(set(labels)),
    )
    return PairedCorpus(mod_a, mod_b, tuple((i, i) for i in range(n)))
