import dataclasses
from itertools import product

import pytest

from oracles import (
    cl_oracle,
    hh_base_members,
    hh_brute_closure_contains,
    hh_members,
    hh_universe,
)
from thetatopo.hedgehog import (
    ROOT,
    Embedding,
    FinBase,
    HedgehogOracle,
    MalformedToken,
    MappedSet,
    NotHausdorffWitnessed,
    OracleError,
    PermutedOracle,
    RegularAtPoint,
    RootBase,
    Singleton,
    StalkBase,
    SumOracle,
    VerificationFailure,
    basic_str,
    certify_hedgehog_profile,
    embed_hedgehog,
    hedgehog,
    token_key,
    token_str,
    verify_embedding,
)
from thetatopo.space import UnknownPoint, build_space

SIERPINSKI = build_space(["a", "b"], {"a": ["a"], "b": ["a", "b"]})
DISCRETE2 = build_space(["0", "1"], {"0": ["0"], "1": ["1"]})


def catalog(limit):
    for n in range(1, limit + 1):
        yield RootBase(n)
        for m in range(1, limit + 1):
            yield StalkBase(n, m)
            yield Singleton(n, m)


# ---------------------------------------------------------------------------
# Tokens.
# ---------------------------------------------------------------------------

def test_token_validation():
    o = hedgehog()
    assert o.validate(()) == ()
    assert o.validate([3]) == (3,)
    assert o.validate((2, 7)) == (2, 7)
    for bad in ["x", 5, (0,), (-1,), (1, 0), (0, 1), (1, 2, 3), (1.5,), ("fin", "a")]:
        with pytest.raises(MalformedToken):
            o.validate(bad)


def test_token_order_and_rendering():
    tokens = [(), (1,), (2,), (1, 1), (1, 2), (2, 1), ("fin", "a")]
    assert sorted(tokens, key=token_key) == tokens
    assert [token_str(t) for t in tokens] == [
        "()",
        "(1)",
        "(2)",
        "(1,1)",
        "(1,2)",
        "(2,1)",
        "fin:a",
    ]


def test_basic_set_rendering():
    assert basic_str(Singleton(1, 2)) == "{(1,2)}"
    assert basic_str(StalkBase(1, 2)) == "U(1,2)"
    assert basic_str(RootBase(3)) == "U(3)"
    assert basic_str(FinBase("a")) == "N(a)"
    assert basic_str(MappedSet(StalkBase(2, 1))) == "mapped:U(2,1)"


# ---------------------------------------------------------------------------
# Membership and closure against the truncated member-set formulas.
# ---------------------------------------------------------------------------

def test_bases_by_kind():
    o = hedgehog()
    assert o.nbhd_base(ROOT, 0) == RootBase(1)
    assert o.nbhd_base(ROOT, 4) == RootBase(5)
    assert o.nbhd_base((3,), 0) == StalkBase(3, 1)
    assert o.nbhd_base((2, 5), 9) == Singleton(2, 5)
    with pytest.raises(OracleError):
        o.nbhd_base(ROOT, -1)
    with pytest.raises(OracleError):
        o.contains(object(), ROOT)
    with pytest.raises(OracleError):
        o.closure_contains(object(), ROOT)


def test_contains_and_closure_exhaustive():
    o = hedgehog()
    depth = 8
    tokens = hh_universe(depth)
    for b in catalog(depth):
        members = hh_members(b, depth)
        for t in tokens:
            assert o.contains(b, t) == (t in members)
            assert o.closure_contains(b, t) == hh_brute_closure_contains(b, t, depth)


def test_contains_and_closure_deep_spots():
    o = hedgehog()
    pairs = [
        (RootBase(50), (49,)),
        (RootBase(50), (50,)),
        (RootBase(37), (41, 50)),
        (StalkBase(50, 50), (50,)),
        (StalkBase(50, 50), (50, 49)),
        (StalkBase(13, 7), (13, 50)),
        (Singleton(50, 50), (50, 50)),
        (Singleton(50, 50), ()),
    ]
    for b, t in pairs:
        assert o.contains(b, t) == (t in hh_members(b, 51))
        assert o.closure_contains(b, t) == hh_brute_closure_contains(b, t, 50)


def test_pinned_membership_facts():
    o = hedgehog()
    # Stalk bases are clopen; in particular the root does not adhere.
    assert not o.closure_contains(StalkBase(1, 1), ())
    assert o.closure_contains(StalkBase(1, 1), (1,))
    assert not o.contains(RootBase(3), (2, 5))
    assert not o.closure_contains(RootBase(2), (1,))
    # A stalk adheres to a root base exactly from that index on.
    for n in range(1, 9):
        for k in range(1, 9):
            assert o.closure_contains(RootBase(n), (k,)) == (k >= n)
    # Root bases contain no stalk points at all.
    assert not any(o.contains(RootBase(n), (k,)) for n in range(1, 6) for k in range(1, 6))
    # Tips are isolated and closed.
    assert o.contains(Singleton(2, 3), (2, 3))
    assert not any(
        o.closure_contains(Singleton(2, 3), t) for t in hh_universe(5) if t != (2, 3)
    )


def test_decreasing_bases():
    limit = 9
    o = hedgehog()
    for x in [ROOT, (1,), (3,), (2, 2), (7, 7)]:
        for k in range(6):
            smaller = hh_members(o.nbhd_base(x, k + 1), limit)
            bigger = hh_members(o.nbhd_base(x, k), limit)
            assert smaller <= bigger
            assert x in bigger


# ---------------------------------------------------------------------------
# Separation.
# ---------------------------------------------------------------------------

def test_separate_exhaustive():
    o = hedgehog()
    depth = 6
    tokens = hh_universe(depth)
    limit = depth + 3
    for a in tokens:
        for b in tokens:
            if a == b:
                continue
            ia, ib = o.separate(a, b)
            na = o.nbhd_base(a, ia)
            nb = o.nbhd_base(b, ib)
            assert a in hh_members(na, limit)
            assert b in hh_members(nb, limit)
            assert not hh_members(na, limit) & hh_members(nb, limit)


def test_separate_self():
    o = hedgehog()
    for t in [ROOT, (2,), (3, 4)]:
        with pytest.raises(NotHausdorffWitnessed):
            o.separate(t, t)


# ---------------------------------------------------------------------------
# Choice functions.
# ---------------------------------------------------------------------------

def test_pick_in_closure_minus_is_least():
    o = hedgehog()
    limit = 5
    universe = hh_universe(limit)
    sets = list(catalog(3))
    for a in sets:
        for b in [None] + sets:
            expect = [
                t
                for t in universe
                if hh_brute_closure_contains(a, t, limit)
                and (b is None or t not in hh_members(b, limit))
            ]
            expect = min(expect, key=token_key) if expect else None
            assert o.pick_in_closure_minus(a, b) == expect


def test_pick_foreign_set():
    with pytest.raises(OracleError):
        hedgehog().pick_in_closure_minus(object())


def test_approach_within():
    o = hedgehog()
    row = o.approach_within((2,), [StalkBase(2, 3), StalkBase(2, 5), RootBase(1)], 4)
    assert row == ((2, 5), (2, 6), (2, 7), (2, 8))
    root_row = o.approach_within(ROOT, [RootBase(3), RootBase(5)], 3)
    assert root_row == ((5, 1), (6, 1), (7, 1))

    for x, constraints, count in [
        ((2,), [StalkBase(2, 1)], 6),
        ((1,), [], 5),
        (ROOT, [RootBase(2)], 5),
    ]:
        row = o.approach_within(x, constraints, count)
        assert len(row) == count and len(set(row)) == count
        limit = 40
        for c in constraints:
            assert set(row) <= hh_members(c, limit)
        # The sequence really converges: it settles into every base.
        for k in range(count):
            assert row[-1] in hh_members(o.nbhd_base(x, k), limit)

    assert o.approach_within((1, 1), [], 3) is None
    assert o.approach_within((2,), [StalkBase(3, 1)], 3) is None
    assert o.approach_within((2,), [RootBase(3)], 3) is None
    assert o.approach_within((2,), [Singleton(2, 1)], 3) is None
    assert o.approach_within(ROOT, [StalkBase(1, 1)], 3) is None
    assert o.approach_within(ROOT, [], 0) == ()


# ---------------------------------------------------------------------------
# Profile certification.
# ---------------------------------------------------------------------------

def test_profile_depths():
    empty = certify_hedgehog_profile(0)
    assert empty.ok and empty.layers == () and empty.decreasing_checks == 0

    for depth in (1, 5, 50):
        r = certify_hedgehog_profile(depth)
        assert r.ok and not r.failures
        assert r.depth == depth
        assert r.decreasing_checks == (depth + 2) * depth
        assert r.layers == ("tips", "stalks", "root")
        assert r.clopen_checks == 16 * depth * depth + 5 * depth
        assert len(r.witnesses) == depth
        assert r.witnesses[0] == "(1)"
        assert r.to_obj()["verdict"] == "pass"


def test_profile_text_golden():
    assert certify_hedgehog_profile(3).to_text() == "\n".join(
        [
            "hedgehog profile, depth 3",
            "first-countable: decreasing bases (15 inclusions)",
            "scattered: layers tips, stalks, root exhaust the space",
            "locally regular: 159 closure checks",
            "not regular at root: 3 witnesses, least (1) in cl(U(1)) outside U(1)",
            "verdict: pass",
        ]
    )


# ---------------------------------------------------------------------------
# Embedding construction.
# ---------------------------------------------------------------------------

def test_embed_pure_frozen():
    e = embed_hedgehog(hedgehog(), depth=8)
    assert e.root_image == ROOT and e.u0_index == 0 and e.depth == 8
    assert e.stalk_images == tuple((n,) for n in range(1, 9))
    assert e.ks == tuple(range(9))
    assert e.v_indices == (0,) * 8
    assert e.tips == tuple(
        tuple((n, m) for m in range(1, 9)) for n in range(1, 9)
    )


def test_embed_images_are_distinct_tokens_of_the_target():
    o = hedgehog()
    e = embed_hedgehog(o, depth=6)
    seen = set()
    for t in [e.root_image, *e.stalk_images, *(t for row in e.tips for t in row)]:
        assert o.validate(t) == t
        assert t not in seen
        seen.add(t)


def test_embedding_h_and_truncation():
    e = embed_hedgehog(hedgehog(), depth=4)
    assert e.h(()) == ()
    assert e.h((3,)) == (3,)
    assert e.h((2, 4)) == (2, 4)
    with pytest.raises(OracleError):
        e.h((5,))
    with pytest.raises(OracleError):
        e.h((1, 5))
    with pytest.raises(MalformedToken):
        e.h("root")


def test_embed_depth_validation():
    with pytest.raises(OracleError):
        embed_hedgehog(hedgehog(), depth=0)


def test_embed_text_golden():
    assert embed_hedgehog(hedgehog(), depth=3).to_text() == "\n".join(
        [
            "embedding, depth 3, u0_index 0",
            "h(()) = ()",
            "h((1)) = (1)  [k=0, V=U(1,1)]",
            "  tips: (1,1) (1,2) (1,3)",
            "h((2)) = (2)  [k=1, V=U(2,1)]",
            "  tips: (2,1) (2,2) (2,3)",
            "h((3)) = (3)  [k=2, V=U(3,1)]",
            "  tips: (3,1) (3,2) (3,3)",
        ]
    )


def test_embed_rooted_at_stalk_is_refused():
    # Away from the root the space is locally regular, so the precondition
    # trips immediately.
    with pytest.raises(RegularAtPoint):
        embed_hedgehog(hedgehog(), x=(1,), depth=3)
    with pytest.raises(RegularAtPoint):
        embed_hedgehog(hedgehog(), x=(2, 2), depth=3)


def test_embed_deeper_u0():
    o = hedgehog()
    e = embed_hedgehog(o, u0_index=2, depth=4)
    assert e.u0_index == 2 and e.ks[0] == 2
    assert verify_embedding(o, e, 4)["verdict"] == "pass"
    u0 = o.nbhd_base(ROOT, 2)
    for x_n in e.stalk_images:
        assert not o.contains(u0, x_n)


# ---------------------------------------------------------------------------
# Verification.
# ---------------------------------------------------------------------------

def test_verify_all_depths():
    o = hedgehog()
    e = embed_hedgehog(o, depth=8)
    for d in range(1, 9):
        out = verify_embedding(o, e, d)
        assert out["verdict"] == "pass" and out["depth"] == d
        n_images = 1 + d + d * d
        assert out["checks"]["distinctness"] == n_images * (n_images - 1) // 2
        assert out["checks"]["stalk_convergence"] == d * d * d
        assert out["checks"]["root_pattern"] == d * d * d


def test_verify_depth_range():
    o = hedgehog()
    e = embed_hedgehog(o, depth=3)
    for bad in (0, -1, 4):
        with pytest.raises(OracleError):
            verify_embedding(o, e, bad)


def tamper(e, **kw):
    return dataclasses.replace(e, **kw)


def test_verify_detects_duplicate_image():
    o = hedgehog()
    e = embed_hedgehog(o, depth=3)
    row = (e.tips[0][1], e.tips[0][1], e.tips[0][2])
    bad = tamper(e, tips=(row,) + e.tips[1:])
    with pytest.raises(VerificationFailure) as ei:
        verify_embedding(o, bad, 3)
    assert ei.value.clause == "distinctness"


def test_verify_detects_diverging_tips():
    o = hedgehog()
    e = embed_hedgehog(o, depth=3)
    bad = tamper(e, tips=(tuple(reversed(e.tips[0])),) + e.tips[1:])
    with pytest.raises(VerificationFailure) as ei:
        verify_embedding(o, bad, 3)
    assert ei.value.clause == "stalk_convergence"


def test_verify_detects_wrong_root():
    o = hedgehog()
    e = embed_hedgehog(o, depth=3)
    bad = tamper(e, root_image=(9, 9))
    with pytest.raises(VerificationFailure) as ei:
        verify_embedding(o, bad, 3)
    assert ei.value.clause == "root_pattern"


def test_verify_detects_adhering_tail():
    o = hedgehog()
    e = embed_hedgehog(o, depth=3)
    bad = tamper(e, ks=(e.ks[0], 0) + e.ks[2:])
    with pytest.raises(VerificationFailure, match="still adheres") as ei:
        verify_embedding(o, bad, 3)
    assert ei.value.clause == "separation"


def test_verify_detects_leaky_v():
    o = hedgehog()
    e = embed_hedgehog(o, depth=3)
    bad = tamper(e, v_indices=(5,) + e.v_indices[1:])
    with pytest.raises(VerificationFailure, match="misses its own tip") as ei:
        verify_embedding(o, bad, 3)
    assert ei.value.clause == "separation"


# ---------------------------------------------------------------------------
# Sum with a finite summand.
# ---------------------------------------------------------------------------

def test_sum_tokens_and_membership():
    o = SumOracle(SIERPINSKI)
    assert o.validate(("fin", "a")) == ("fin", "a")
    with pytest.raises(UnknownPoint):
        o.validate(("fin", "zz"))

    assert o.nbhd_base(("fin", "b"), 7) == FinBase("b")
    assert o.contains(FinBase("b"), ("fin", "a"))
    assert o.contains(FinBase("b"), ("fin", "b"))
    assert not o.contains(FinBase("a"), ("fin", "b"))
    # Summands never mix.
    assert not o.contains(FinBase("b"), (1,))
    assert not o.contains(RootBase(1), ("fin", "a"))
    assert not o.closure_contains(RootBase(1), ("fin", "a"))
    assert not o.closure_contains(FinBase("a"), (1, 1))
    assert o.contains(StalkBase(2, 1), (2, 3))


def test_sum_closure_matches_finite_closure():
    o = SumOracle(SIERPINSKI)
    for name in SIERPINSKI.names:
        i = SIERPINSKI.index(name)
        cl = cl_oracle(SIERPINSKI, SIERPINSKI.nbhd[i], SIERPINSKI.full_mask)
        for tname in SIERPINSKI.names:
            j = SIERPINSKI.index(tname)
            assert o.closure_contains(FinBase(name), ("fin", tname)) == bool(
                cl >> j & 1
            )


def test_sum_separation():
    o = SumOracle(SIERPINSKI)
    with pytest.raises(NotHausdorffWitnessed, match="meet"):
        o.separate(("fin", "a"), ("fin", "b"))
    with pytest.raises(NotHausdorffWitnessed, match="itself"):
        o.separate(("fin", "a"), ("fin", "a"))
    # Cross-kind pairs separate by the clopen summand split.
    ia, ib = o.separate(("fin", "a"), (1,))
    assert not o.contains(o.nbhd_base(("fin", "a"), ia), (1,))
    assert not o.contains(o.nbhd_base((1,), ib), ("fin", "a"))

    d = SumOracle(DISCRETE2)
    assert d.separate(("fin", "0"), ("fin", "1")) == (0, 0)


def test_sum_picks():
    o = SumOracle(SIERPINSKI)
    assert o.pick_in_closure_minus(FinBase("a")) == ("fin", "a")
    assert o.pick_in_closure_minus(FinBase("a"), FinBase("a")) == ("fin", "b")
    assert o.pick_in_closure_minus(FinBase("a"), FinBase("b")) is None
    # A finite obstacle cannot block a hedgehog-side pick.
    assert o.pick_in_closure_minus(StalkBase(1, 1), FinBase("a")) == (1,)
    assert o.approach_within(("fin", "a"), [], 3) is None
    assert o.approach_within((1,), [FinBase("a")], 3) is None
    assert o.approach_within((1,), [StalkBase(1, 2)], 2) == ((1, 2), (1, 3))


def test_sum_embed_at_root_ignores_summand():
    o = SumOracle(DISCRETE2)
    e = embed_hedgehog(o, depth=5)
    pure = embed_hedgehog(hedgehog(), depth=5)
    assert e.to_obj() == pure.to_obj()
    assert verify_embedding(o, e, 5)["verdict"] == "pass"


def test_sum_embed_at_finite_point():
    with pytest.raises(RegularAtPoint):
        embed_hedgehog(SumOracle(DISCRETE2), x=("fin", "0"), depth=3)
    with pytest.raises(RegularAtPoint):
        embed_hedgehog(SumOracle(SIERPINSKI), x=("fin", "b"), depth=3)
    # The open point of the connected doubleton is not regular, but the
    # witness pair cannot be separated, so the embedding fails loudly.
    with pytest.raises(NotHausdorffWitnessed):
        embed_hedgehog(SumOracle(SIERPINSKI), x=("fin", "a"), depth=3)


# ---------------------------------------------------------------------------
# Relabeled stalks.
# ---------------------------------------------------------------------------

def test_permuted_validation():
    with pytest.raises(OracleError):
        PermutedOracle({1: 2})
    with pytest.raises(OracleError):
        PermutedOracle({0: 1, 1: 0})
    assert PermutedOracle({}).fwd == {}
    assert PermutedOracle({1: 1, 2: 2}).fwd == {}


def test_permuted_membership():
    o = PermutedOracle({1: 2, 2: 1})
    b1 = o.nbhd_base((2,), 0)
    assert b1 == MappedSet(StalkBase(1, 1))
    assert o.contains(b1, (2, 5))
    assert not o.contains(b1, (1, 5))
    r = o.nbhd_base(ROOT, 1)
    assert r == MappedSet(RootBase(2))
    # Visible stalk 1 is hidden stalk 2, so it still adheres to U(2).
    assert o.closure_contains(r, (1,))
    assert not o.closure_contains(r, (2,))
    with pytest.raises(OracleError):
        o.contains(StalkBase(1, 1), (1,))


def test_permuted_pick_prefers_visible_names():
    o = PermutedOracle({1: 5, 5: 1})
    # Hidden stalk 5 adheres to U(2) and is visible as stalk 1, which scans
    # before the identity-named stalk 2.
    t = o.pick_in_closure_minus(MappedSet(RootBase(2)), MappedSet(RootBase(1)))
    assert t == (1,)
    assert hedgehog().pick_in_closure_minus(RootBase(2), RootBase(1)) == (2,)


def test_permuted_embed_frozen_swap():
    o = PermutedOracle({1: 2, 2: 1})
    e = embed_hedgehog(o, depth=5)
    assert e.stalk_images == ((1,), (3,), (4,), (5,), (6,))
    assert e.ks == (0, 2, 3, 4, 5, 6)
    assert e.tips[0] == tuple((1, m) for m in range(1, 6))
    assert e.tips[1] == tuple((3, m) for m in range(1, 6))
    assert [
        basic_str(o.nbhd_base(x, v))
        for x, v in zip(e.stalk_images, e.v_indices)
    ] == [
        "mapped:U(2,1)",
        "mapped:U(3,1)",
        "mapped:U(4,1)",
        "mapped:U(5,1)",
        "mapped:U(6,1)",
    ]
    for d in range(1, 6):
        assert verify_embedding(o, e, d)["verdict"] == "pass"


def test_permuted_embed_three_cycle():
    o = PermutedOracle({1: 2, 2: 3, 3: 1})
    e = embed_hedgehog(o, depth=6)
    assert verify_embedding(o, e, 6)["verdict"] == "pass"
    # Every hidden stalk adheres to cl(U(1)), so the visible scan takes the
    # least visible name first.
    assert e.stalk_images == ((1,), (4,), (5,), (6,), (7,), (8,))
    seen = {e.root_image, *e.stalk_images}
    assert len(seen) == 7


def test_permuted_approach_relabels_output():
    o = PermutedOracle({1: 2, 2: 1})
    row = o.approach_within((1,), [o.nbhd_base((1,), 0)], 3)
    assert row == ((1, 1), (1, 2), (1, 3))
    assert o.approach_within((1,), [MappedSet(StalkBase(1, 1))], 3) is None
