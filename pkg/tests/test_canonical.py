import random

import pytest

from posetrec import _kernels
from posetrec.canonical import (
    CanonicalKey,
    apply_permutation,
    canonical_key,
    canonicalize,
    invert,
    vertex_invariants,
)
from posetrec.complex import build_pnk, closure_of, face
from posetrec.errors import InvalidParameterError

from conftest import all_complexes, brute_canonical, encoding, as_sets, random_complex, random_permutation


def test_vertex_invariants_examples():
    assert vertex_invariants(build_pnk(2, 2)) == [(1, 1), (1, 1)]
    A = closure_of([face(0, 1), face(2)], 3)
    assert vertex_invariants(A) == [(1, 1, 0), (1, 1, 0), (1, 0, 0)]


def test_vertex_invariants_follow_relabeling(rng):
    for _ in range(200):
        n = rng.randint(1, 7)
        A = random_complex(rng, n)
        s = random_permutation(rng, n)
        inv, inv2 = vertex_invariants(A), vertex_invariants(apply_permutation(A, s))
        assert all(inv2[s[i]] == inv[i] for i in range(n))


def test_apply_permutation_examples():
    A = closure_of([face(1)], 2)
    assert apply_permutation(A, (0, 1)) == A
    assert apply_permutation(A, (1, 0)).faces == (0, 1)
    with pytest.raises(InvalidParameterError):
        apply_permutation(A, (0, 0))
    with pytest.raises(InvalidParameterError):
        apply_permutation(A, (0, 1, 2))


def test_apply_permutation_group_action(rng):
    for _ in range(100):
        n = rng.randint(0, 7)
        A = random_complex(rng, n)
        s = random_permutation(rng, n)
        B = apply_permutation(A, s)
        assert len(B) == len(A)
        assert apply_permutation(B, invert(s)) == A


def test_canonicalize_examples():
    # absent vertices carry the zero invariant and so take the lowest labels
    key, _ = canonicalize(closure_of([face(1)], 2))
    assert key.representative().faces == (0, 0b10)
    key, _ = canonicalize(closure_of([face(0), face(1)], 3))
    assert key.representative().faces == (0, 0b010, 0b100)
    a = canonicalize(closure_of([face(1, 2), face(0)], 3))[0]
    b = canonicalize(closure_of([face(0, 1), face(2)], 3))[0]
    assert a == b


def test_key_text_roundtrip():
    key, _ = canonicalize(build_pnk(7, 3))
    text = str(key)
    assert text.startswith("7:") and len(text) == 2 + 32
    assert CanonicalKey.parse(text) == key


def test_complete_against_brute_force_small():
    """For every complex on at most 4 points the key is the exhaustive minimum."""
    count = 0
    for A in all_complexes(4):
        key, witness = canonicalize(A)
        assert encoding(as_sets(key.representative())) == brute_canonical(A)
        assert apply_permutation(A, witness) == key.representative()
        count += 1
    assert count == 2 + 3 + 6 + 20 + 168


def test_brute_force_n5_sample(rng):
    for _ in range(40):
        A = random_complex(rng, 5)
        key, _ = canonicalize(A)
        assert encoding(as_sets(key.representative())) == brute_canonical(A)


def test_idempotent_and_invariant_sorted(rng):
    for _ in range(300):
        n = rng.randint(0, 8)
        A = random_complex(rng, n)
        key, _ = canonicalize(A)
        R = key.representative()
        key2, witness2 = canonicalize(R)
        assert key2 == key
        assert apply_permutation(R, witness2) == R
        inv = vertex_invariants(R)
        assert inv == sorted(inv)


def test_compiled_matches_python(rng):
    for _ in range(400):
        n = rng.randint(0, 8)
        A = random_complex(rng, n, max_gens=8)
        key, witness = canonicalize(A)
        assert canonical_key(A) == key
        assert _kernels.canonical_with_witness(n, A.bits) == (key.bits, witness)


def test_highly_symmetric_inputs():
    for n in range(9):
        for k in range(n + 1):
            A = build_pnk(n, k)
            assert canonical_key(A).bits == A.bits
            if n <= 6:
                assert canonicalize(A)[0].bits == A.bits


def test_invariance_under_relabeling(rng):
    for _ in range(500):
        n = rng.randint(0, 7)
        A = random_complex(rng, n, max_gens=8)
        s = random_permutation(rng, n)
        assert canonical_key(apply_permutation(A, s)) == canonical_key(A)
