import os
import random
from functools import lru_cache
from itertools import combinations, permutations

import pytest

from posetrec.complex import Complex, closure_of
from posetrec.enumeration import iter_labeled

EXTENDED = os.environ.get("POSETREC_EXTENDED") == "1"


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def pytest_collection_modifyitems(config, items):
    if EXTENDED:
        return
    skip = pytest.mark.skip(reason="extended run; set POSETREC_EXTENDED=1")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


# --- independent oracles: frozenset families, no bitmask helpers ----------


def as_sets(A):
    return frozenset(frozenset(i for i in range(A.n) if f >> i & 1) for f in A.faces)


def invariants_of(family, n):
    out = []
    for v in range(n):
        out.append(tuple(sum(1 for s in family if v in s and len(s) == j) for j in range(1, n + 1)))
    return out


def encoding(family):
    """Ascending list of face masks."""
    return tuple(sorted(sum(1 << v for v in s) for s in family))


def brute_canonical(A):
    """Lexmin encoding over all n! relabelings whose image lists vertex
    invariants in nondecreasing order."""
    fam = as_sets(A)
    best = None
    for perm in permutations(range(A.n)):
        img = frozenset(frozenset(perm[v] for v in s) for s in fam)
        inv = invariants_of(img, A.n)
        if any(inv[i] > inv[i + 1] for i in range(A.n - 1)):
            continue
        enc = encoding(img)
        if best is None or enc < best:
            best = enc
    return best


def _chomp(fam, x):
    return frozenset(s for s in fam if not x <= s)


@lru_cache(maxsize=None)
def naive_grundy(fam):
    vals = {naive_grundy(_chomp(fam, x)) for x in fam if x}
    g = 0
    while g in vals:
        g += 1
    return g


@lru_cache(maxsize=None)
def naive_loses(fam):
    return all(not naive_loses(_chomp(fam, x)) for x in fam if x)


@lru_cache(maxsize=None)
def naive_extensions(fam):
    if not fam:
        return 1
    maximal = [m for m in fam if not any(m < s for s in fam)]
    return sum(naive_extensions(fam - {m}) for m in maximal)


def count_by_permutations(A):
    """Orderings of the faces in which every face follows its subsets."""
    faces = A.faces
    total = 0
    for order in permutations(faces):
        pos = {f: i for i, f in enumerate(order)}
        if all(pos[g] < pos[f] for f in faces for g in faces if g != f and g & f == g):
            total += 1
    return total


def all_complexes(max_n):
    for n in range(max_n + 1):
        yield from iter_labeled(n)


def random_complex(rng, n, max_gens=6, max_size=None):
    gens = []
    for _ in range(rng.randint(0, max_gens)):
        size = rng.randint(0, n if max_size is None else min(n, max_size))
        gens.append(sum(1 << v for v in rng.sample(range(n), size)))
    return closure_of(gens, n)


def random_permutation(rng, n):
    p = list(range(n))
    rng.shuffle(p)
    return tuple(p)


@pytest.fixture
def rng():
    return random.Random(20240607)
