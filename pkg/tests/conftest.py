import random

import pytest

from kcover import Batch, Instance, Setting


def batch(*pairs) -> Batch:
    return Batch(tuple(Batch.single(a, b).parts[0] for a, b in pairs))


def unit_instance(pairs, k, count="UN", target=None):
    items = tuple(Batch.single(a, b) for a, b in pairs)
    a = target if target is not None else max(b for _, b in pairs)
    return Instance(a, k, Setting("UL", count), items)


def al_instance(pairs, k, count="AN", target=None):
    items = tuple(Batch.single(a, b) for a, b in pairs)
    a = target if target is not None else max(b for _, b in pairs)
    return Instance(a, k, Setting("AL", count), items)


@pytest.fixture
def rng():
    return random.Random(20260808)
