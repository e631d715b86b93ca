"""Shared helpers: seeded random states and ensembles."""

import numpy as np
import pytest

from twocopy import DensityOperator, Ket, PureEnsemble, QubitLayout, tensor_product
from twocopy.states import DeFinettiEnsemble


def random_ket(rng, labels=("A", "B")) -> Ket:
    dim = 2 ** len(labels)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return Ket(QubitLayout(tuple(labels)), v / np.linalg.norm(v))


def random_product_ket(rng, labels=("A", "B")) -> Ket:
    parts = [random_ket(rng, (lbl,)) for lbl in labels]
    out = parts[0]
    for p in parts[1:]:
        out = tensor_product(out, p)
    return out


def random_density(rng, labels=("A", "B"), rank=None) -> DensityOperator:
    dim = 2 ** len(labels)
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    return DensityOperator(QubitLayout(tuple(labels)), m / np.trace(m).real)


def random_weights(rng, k: int) -> np.ndarray:
    w = rng.random(k) + 1e-3
    return w / w.sum()


def random_pure_ensemble(rng, k: int = 3) -> PureEnsemble:
    w = random_weights(rng, k)
    return PureEnsemble(tuple((float(wi), random_ket(rng)) for wi in w))


def random_de_finetti_ensemble(rng, k: int = 3, pure: bool = False) -> DeFinettiEnsemble:
    w = random_weights(rng, k)
    if pure:
        members = tuple((float(wi), random_ket(rng).density()) for wi in w)
    else:
        members = tuple((float(wi), random_density(rng)) for wi in w)
    return DeFinettiEnsemble(members)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
