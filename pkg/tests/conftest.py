import itertools

import pytest

from bgcompact import fingroup
from bgcompact.exactmat import ExactMatrix
from bgcompact.fingroup import NotAHomomorphism, catalog_group, hom_from_generators, normal_closure
from bgcompact.weyl import weyl_group

KERNEL_SOURCES = ["S3", "S4", "D8", "Q8", "Z/2xZ/2", "A4", "Z/6", "D12"]


@pytest.fixture(autouse=True)
def _no_disk_cache():
    fingroup.set_cache_dir(None)
    yield
    fingroup.set_cache_dir(None)


def _sign_images(K):
    """Every +-1 character of K, given by generator images."""
    out = []
    for signs in itertools.product((1, -1), repeat=len(K.generators)):
        images = [ExactMatrix([[s]]) for s in signs]
        try:
            hom_from_generators(K, images)
        except NotAHomomorphism:
            continue
        out.append(images)
    return out


def _normal_subgroups(K):
    seen = {}
    for g in range(K.order):
        N = normal_closure(K, [g])
        seen.setdefault(N.members.tobytes(), N)
    return list(seen.values())


@pytest.fixture(scope="session")
def kernel_triples():
    """(K, generator images of q, nu) with nu normal in K, drawn from the catalog and small Weyl groups."""
    groups = [catalog_group(n) for n in KERNEL_SOURCES] + [weyl_group("B2"), weyl_group("A2"), weyl_group("B3")]
    triples = []
    for K in groups:
        maps = _sign_images(K) + [K.generator_matrices()]
        for images in maps:
            for nu in _normal_subgroups(K):
                triples.append((K, images, nu))
    return triples
