"""Naive local model fibers: enumeration against admissible-locus counts."""

import random

import pytest

from loopweyl.errors import (ResourceCapError, SpecParseError,
                             UnsupportedFieldError)
from loopweyl.loops.chains import validate_chain
from loopweyl.loops.fiber import (enumerate_fiber, member_exponents,
                                  normalize_tokens, rebuild_members,
                                  ustable_subspaces)


def test_member_exponents():
    assert member_exponents(3, 0) == [0, 0, 0]
    assert member_exponents(3, 2) == [-1, -1, 0]
    assert member_exponents(3, 4) == [-2, -1, -1]
    assert member_exponents(4, -1) == [0, 0, 0, 1]
    assert member_exponents(4, 4) == [-1, -1, -1, -1]


def test_normalize_tokens():
    assert normalize_tokens(3, {0, 1}) == ([0, 1], [0, 1])
    assert normalize_tokens(4, {0, 2}) == ([0, 2], [0, 2])
    assert normalize_tokens(4, {2, "m'"}) == (["m'", 2], [1, 2])
    with pytest.raises(SpecParseError):
        normalize_tokens(3, set())
    with pytest.raises(SpecParseError):
        normalize_tokens(3, {0, "m'"})
    with pytest.raises(SpecParseError):
        normalize_tokens(4, {0, "m'"})
    with pytest.raises(SpecParseError):
        normalize_tokens(3, {0, 2})
    with pytest.raises(SpecParseError):
        normalize_tokens(4, {1, 5})


def test_ustable_counts():
    assert len(set(ustable_subspaces(3, 3))) == 157
    seen = set(ustable_subspaces(3, 3))
    for key in list(seen)[:10]:
        assert len(key) == 3


def test_su3_fibers():
    for toks, expect_naive, expect_adm in (
        ({0}, 13, 4),
        ({1}, 13, 4),
        ({0, 1}, 25, 25),
    ):
        out = enumerate_fiber(3, 1, 2, 3, toks)
        assert out["naive_count"] == expect_naive
        assert out["adm_count"] == expect_adm
        assert out["admissible_points"] == expect_naive
        assert out["flat_match"]
        assert out["contains_admissible"] is True
        assert out["cells_checked"]
    out = enumerate_fiber(3, 1, 2, 5, {0})
    assert out["naive_count"] == 31
    assert out["adm_count"] == 6
    assert out["flat_match"] and out["contains_admissible"] is True


def test_su3_rank_zero_signature():
    out = enumerate_fiber(3, 0, 3, 3, {0}, collect=True)
    assert out["naive_count"] == out["adm_count"] == 1
    assert out["contains_admissible"] is True
    assert out["points"] == []


def test_su3_points_rebuild_to_valid_chains():
    out = enumerate_fiber(3, 1, 2, 3, {0, 1}, collect=True)
    window = out["window"]
    assert window == [0, 1, 2]
    assert len(out["points"]) == out["naive_count"]
    rng = random.Random(5)
    for point in rng.sample(out["points"], 8):
        members = rebuild_members(3, 3, window, point)
        report = validate_chain(members, tokens=window)
        assert report["ok"], report


def test_su4_pi_modular_vertex():
    # the naive fiber picks up both Kottwitz components: 161 = 40 + 121
    out1 = enumerate_fiber(4, 1, 3, 3, {2})
    out2 = enumerate_fiber(4, 2, 2, 3, {2})
    assert out1["naive_count"] == out2["naive_count"] == 161
    assert out1["admissible_points"] == 40
    assert out2["admissible_points"] == 121
    assert not out1["flat_match"] and not out2["flat_match"]
    assert out1["contains_admissible"] is None
    assert not out1["cells_checked"]
    assert out1["y"] == [0]


def test_su4_self_dual_vertex():
    out = enumerate_fiber(4, 2, 2, 3, {0})
    assert out["naive_count"] == 265
    assert out["admissible_points"] == 265
    assert out["flat_match"]
    assert out["y"] == [1]


def test_cap_and_rejections():
    with pytest.raises(ResourceCapError):
        enumerate_fiber(4, 1, 3, 3, {0, 2, "m'"})
    with pytest.raises(UnsupportedFieldError):
        enumerate_fiber(3, 1, 2, 2, {0})
    with pytest.raises(SpecParseError):
        enumerate_fiber(3, 1, 1, 3, {0})
    with pytest.raises(SpecParseError):
        enumerate_fiber(5, 2, 3, 3, {0})
