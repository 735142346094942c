import numpy as np

from docsynth.probnet import RngStream


def test_identical_identity_identical_sequence():
    a = RngStream(42, (3, 1, 4)).generator.random(64)
    b = RngStream(42, (3, 1, 4)).generator.random(64)
    assert np.array_equal(a, b)


def test_distinct_paths_differ():
    a = RngStream(42, (0,)).generator.random(64)
    b = RngStream(42, (1,)).generator.random(64)
    assert not np.array_equal(a, b)
    # crude independence check: near-zero correlation between sibling streams
    corr = np.corrcoef(a, b)[0, 1]
    assert abs(corr) < 0.35


def test_child_paths_compose():
    s = RngStream(7)
    assert s.child(2, 5).path == (2, 5)
    assert s.child(2).child(5).path == (2, 5)


def test_sibling_consumption_does_not_perturb():
    root = RngStream(9)
    direct = root.child(2).generator.random(16)

    root2 = RngStream(9)
    root2.child(5).generator.random(1000)  # consume an unrelated branch first
    root2.child(0).generator.random(3)
    again = root2.child(2).generator.random(16)
    assert np.array_equal(direct, again)


def test_seed_changes_everything():
    a = RngStream(1, (0,)).generator.random(16)
    b = RngStream(2, (0,)).generator.random(16)
    assert not np.array_equal(a, b)
