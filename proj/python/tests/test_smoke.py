import pytest

import dancewalk as dw


def test_walk_parameters():
    assert dw.walk_length(2**16, 2, 4.0) == 16
    assert dw.walk_length(2**16, 16, 4.0) == 4
    assert dw.attempt_cap(2**16, 4.0) == 64


def test_orienter_on_balanced_merges():
    n = 1024
    o = dw.Orienter(n, seed=3)
    for u, v in dw.generate_workload("balanced-binary", n):
        report = o.insert(u, v)
        assert report["flips"] <= o.walk_cap
    assert o.insertions == n - 1
    assert o.max_out_degree <= 3
    assert o.check() == []
    assert o.rank(0) == 10


def test_never_flip_piles_up():
    o = dw.Orienter(256, variant="never-flip")
    for u, v in dw.generate_workload("balanced-binary", 256):
        o.insert(u, v)
    assert o.out_degree(0) == 8
    assert o.total_flips == 0


def test_orienter_errors():
    o = dw.Orienter(4)
    with pytest.raises(dw.StructuralError):
        o.insert(1, 1)
    o.insert(0, 1)
    with pytest.raises(dw.StructuralError):
        o.insert(1, 0)
    with pytest.raises(ValueError):
        dw.Orienter(4, variant="nope")


def test_cuckoo_matches_dict():
    n = 1024
    t = dw.CuckooTable(n, epsilon=0.5, stash=4, seed=1, hash_seed=2)
    ref = {}
    for kind, key, value in dw.generate_script(n, load=0.3, mutations=4000, seed=5):
        if kind == "I":
            t.insert(key, value)
            ref[key] = value
        elif kind == "D":
            t.erase(key)
            ref.pop(key, None)
        else:
            assert t.query(key) == ref.get(key)
    assert len(t) == len(ref)
    assert all(t.query(k) == v for k, v in ref.items())
    stats = t.stats()
    assert stats["phases_completed"] > 0
    assert stats["max_d_writes_per_op"] <= 8


def test_cuckoo_stash_overflow():
    t = dw.CuckooTable(16, epsilon=1.0, stash=0)
    key = next(k for k in range(100000) if t.bins(k)[0] == t.bins(k)[1])
    t.insert(key, 1)
    other = next(k for k in range(key + 1, 200000) if t.bins(k) == (t.bins(key)[0],) * 2)
    with pytest.raises(dw.ViabilityViolation):
        t.insert(other, 2)
    assert key in t and other not in t


def test_check_viability():
    assert dw.check_viability([(0, 1), (1, 2), (2, 0)], 3) == 0
    assert dw.check_viability([(0, 1)] * 4, 2) == 2
