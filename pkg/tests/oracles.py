"""Independent brute-force implementations used to cross-check the package.

Everything here is computed from first definitions: the open-set family is
materialized as the set of all unions of minimal neighborhoods, and every
notion (closure, interior, theta-openness, continuity, the regularity
variants) is decided by exhaustive quantification over that family. Nothing
below calls the package's own closure/interior/classification code.
"""

from __future__ import annotations

from itertools import product

from thetatopo.space import FinSpace


def bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# ---------------------------------------------------------------------------
# Topology from the raw neighborhood rows.
# ---------------------------------------------------------------------------

def all_opens(space: FinSpace, a: int | None = None) -> tuple[int, ...]:
    """Every open set of the subspace on ``a``, as the traces of all unions
    of minimal neighborhoods (the empty union included)."""
    n = len(space)
    full = (1 << n) - 1
    if a is None:
        a = full
    opens = set()
    for smask in range(1 << n):
        u = 0
        for i in bits(smask):
            u |= space.nbhd[i]
        opens.add(u & a)
    return tuple(sorted(opens))


def cl_oracle(space: FinSpace, s: int, a: int | None = None) -> int:
    """Relative closure: intersection of all relatively closed supersets."""
    if a is None:
        a = space.full_mask
    s &= a
    out = a
    for v in all_opens(space, a):
        closed = a & ~v
        if s & ~closed == 0:
            out &= closed
    return out


def int_oracle(space: FinSpace, s: int, a: int | None = None) -> int:
    """Relative interior: union of relatively open subsets of s."""
    if a is None:
        a = space.full_mask
    out = 0
    for v in all_opens(space, a):
        if v & ~s == 0:
            out |= v
    return out


def theta_open_oracle(space: FinSpace, u: int, a: int | None = None) -> bool:
    """u is theta-open in the subspace on a: every point of u has a
    relatively open neighborhood whose relative closure stays inside u."""
    if a is None:
        a = space.full_mask
    assert u & ~a == 0
    opens = all_opens(space, a)
    for x in bits(u):
        xb = 1 << x
        if not any(v & xb and cl_oracle(space, v, a) & ~u == 0 for v in opens):
            return False
    return True


def submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def theta_part_oracle(space: FinSpace, s: int, a: int | None = None) -> int:
    """Union of all theta-open (in a) subsets of s."""
    if a is None:
        a = space.full_mask
    out = 0
    for u in submasks(s & a):
        if u and theta_open_oracle(space, u, a):
            out |= u
    return out


def theta_step_oracle(space: FinSpace, s: int, a: int | None = None) -> int:
    """Points of s owning a relatively open neighborhood with relative
    closure inside s (one refinement step, not yet a fixpoint)."""
    if a is None:
        a = space.full_mask
    s &= a
    out = 0
    for x in bits(s):
        xb = 1 << x
        for v in all_opens(space, a):
            if v & xb and cl_oracle(space, v, a) & ~s == 0:
                out |= xb
                break
    return out


# ---------------------------------------------------------------------------
# Continuity, by quantifying over open pairs.
# ---------------------------------------------------------------------------

def image_mask(f, s: int) -> int:
    out = 0
    for i in bits(s):
        out |= 1 << f.img[i]
    return out


def cont_points_oracle(f, a: int | None = None) -> int:
    """Continuity points of the restriction of f to the subspace on a."""
    x_space, y_space = f.domain, f.codomain
    if a is None:
        a = x_space.full_mask
    x_opens = all_opens(x_space, a)
    y_opens = all_opens(y_space)
    out = 0
    for x in bits(a):
        xb = 1 << x
        fb = 1 << f.img[x]
        good = True
        for w in y_opens:
            if not w & fb:
                continue
            if not any(v & xb and image_mask(f, v) & ~w == 0 for v in x_opens):
                good = False
                break
        if good:
            out |= xb
    return out


def nonempty_subsets(full: int):
    for a in range(1, full + 1):
        if a & ~full == 0:
            yield a


def tier_oracle(f) -> str:
    full = f.domain.full_mask
    if cont_points_oracle(f, full) == full:
        return "continuous"
    theta_ok = weak_ok = scat_ok = True
    for a in nonempty_subsets(full):
        c = cont_points_oracle(f, a)
        if c == 0:
            scat_ok = False
        if weak_ok and int_oracle(f.domain, c, a) == 0:
            weak_ok = False
        if theta_ok and theta_part_oracle(f.domain, c, a) == 0:
            theta_ok = False
        if not scat_ok:
            break
    if theta_ok:
        return "theta_weakly_discontinuous"
    if weak_ok:
        return "weakly_discontinuous"
    if scat_ok:
        return "scatteredly_continuous"
    return "none"


def reaches_oracle(f, tier: str) -> bool:
    order = (
        "continuous",
        "theta_weakly_discontinuous",
        "weakly_discontinuous",
        "scatteredly_continuous",
        "none",
    )
    return order.index(tier_oracle(f)) <= order.index(tier)


# ---------------------------------------------------------------------------
# Regularity variants, straight from their definitions.
# ---------------------------------------------------------------------------

def regular_oracle(space: FinSpace, a: int | None = None) -> bool:
    """The subspace on a is regular: each of its open sets is theta-open."""
    if a is None:
        a = space.full_mask
    return all(theta_open_oracle(space, u, a) for u in all_opens(space, a))


def regular_at_oracle(space: FinSpace, x: int) -> bool:
    """Every open neighborhood of x contains the closure of another one."""
    xb = 1 << x
    opens = all_opens(space)
    for u in opens:
        if not u & xb:
            continue
        if not any(v & xb and cl_oracle(space, v) & ~u == 0 for v in opens):
            return False
    return True


def nowhere_regular_oracle(space: FinSpace) -> bool:
    return all(not regular_at_oracle(space, x) for x in range(len(space)))


def locally_regular_oracle(space: FinSpace) -> bool:
    """Some open cover consists of regular subspaces; pointwise this means
    every point has an open neighborhood that is regular as a subspace."""
    opens = all_opens(space)
    for x in range(len(space)):
        xb = 1 << x
        if not any(u & xb and regular_oracle(space, u) for u in opens):
            return False
    return True


def quasi_regular_oracle(space: FinSpace, a: int | None = None) -> bool:
    """Each nonempty relatively open set contains the relative closure of
    some nonempty relatively open set."""
    if a is None:
        a = space.full_mask
    opens = all_opens(space, a)
    for u in opens:
        if u == 0:
            continue
        if not any(v and cl_oracle(space, v, a) & ~u == 0 for v in opens):
            return False
    return True


def hereditarily_quasi_regular_oracle(space: FinSpace) -> bool:
    return all(
        quasi_regular_oracle(space, a) for a in nonempty_subsets(space.full_mask)
    )


def weakly_regular_oracle(space: FinSpace) -> bool:
    """Every nonempty subspace contains a nonempty relatively open regular
    subspace."""
    for a in nonempty_subsets(space.full_mask):
        if not any(u and regular_oracle(space, u) for u in all_opens(space, a)):
            return False
    return True


def theta_weakly_regular_oracle(space: FinSpace) -> bool:
    """Every nonempty subspace contains a nonempty theta-open regular
    subspace."""
    for a in nonempty_subsets(space.full_mask):
        found = False
        for u in submasks(a):
            if u and theta_open_oracle(space, u, a) and regular_oracle(space, u):
                found = True
                break
        if not found:
            return False
    return True


def w_theta_regular_oracle(space: FinSpace) -> bool:
    """In every subspace, each nonempty relatively open set contains a
    nonempty relatively theta-open set."""
    for a in nonempty_subsets(space.full_mask):
        for u in all_opens(space, a):
            if u and theta_part_oracle(space, u, a) == 0:
                return False
    return True


def scattered_oracle(space: FinSpace) -> bool:
    """Every nonempty subspace has a relatively isolated point."""
    opens = all_opens(space)
    for a in nonempty_subsets(space.full_mask):
        if not any(u & a in (1 << x for x in bits(a)) for u in opens):
            return False
    return True


def t1_oracle(space: FinSpace) -> bool:
    opens = all_opens(space)
    n = len(space)
    for x in range(n):
        for y in range(n):
            if x == y:
                continue
            if not any(u & (1 << x) and not u & (1 << y) for u in opens):
                return False
    return True


PROPERTY_ORACLES = {
    "regular": regular_oracle,
    "locally_regular": locally_regular_oracle,
    "quasi_regular": quasi_regular_oracle,
    "hereditarily_quasi_regular": hereditarily_quasi_regular_oracle,
    "weakly_regular": weakly_regular_oracle,
    "theta_weakly_regular": theta_weakly_regular_oracle,
    "w_theta_regular": w_theta_regular_oracle,
    "scattered": scattered_oracle,
    "t1": t1_oracle,
    "nowhere_regular": nowhere_regular_oracle,
}


# ---------------------------------------------------------------------------
# Brute domain enumeration for the scattered-vs-weak witness search.
# ---------------------------------------------------------------------------

def brute_spaces(n: int):
    """All labeled spaces on n points, by filtering every candidate row
    tuple against the two neighborhood axioms."""
    names = tuple(str(i) for i in range(n))
    for rows in product(range(1 << n), repeat=n):
        if any(not rows[i] >> i & 1 for i in range(n)):
            continue
        ok = True
        for i in range(n):
            for j in bits(rows[i]):
                if rows[j] & ~rows[i]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield FinSpace(names, rows)


def sw_witness_exists_oracle(space: FinSpace, bound: int) -> bool:
    """Is there a scatteredly continuous, not weakly discontinuous map into
    the space from some domain with at most ``bound`` points?"""
    from thetatopo.maps import FinMap

    nx = len(space)
    for n in range(1, bound + 1):
        for z in brute_spaces(n):
            for img in product(range(nx), repeat=n):
                f = FinMap(z, space, img)
                if tier_oracle(f) == "scatteredly_continuous":
                    return True
    return False


# ---------------------------------------------------------------------------
# Truncated hedgehog: member sets straight from the base formulas.
# ---------------------------------------------------------------------------

def hh_universe(limit: int) -> tuple:
    """All hedgehog tokens with indices up to the limit."""
    tokens = [()]
    tokens += [(n,) for n in range(1, limit + 1)]
    tokens += [(n, m) for n in range(1, limit + 1) for m in range(1, limit + 1)]
    return tuple(tokens)


def hh_members(b, limit: int) -> frozenset:
    """Token set of a basic-set descriptor, truncated at the limit.

    Reads only the descriptor's parameters; membership follows the base
    formulas for the three kinds of basic sets.
    """
    kind = type(b).__name__
    if kind == "Singleton":
        return frozenset([(b.n, b.m)])
    if kind == "StalkBase":
        return frozenset([(b.n,)]) | frozenset(
            (b.n, j) for j in range(b.m, limit + 1)
        )
    if kind == "RootBase":
        tips = frozenset(
            (i, j)
            for i in range(b.n, limit + 1)
            for j in range(1, limit + 1)
        )
        return frozenset([()]) | tips
    if kind == "MappedSet":
        raise AssertionError("relabeled sets have no direct member formula")
    raise AssertionError(f"unexpected descriptor {b!r}")


def hh_base_members(t, k: int, limit: int) -> frozenset:
    """Members of the k-th basic neighborhood of token t, truncated."""
    if t == ():
        return frozenset([()]) | frozenset(
            (i, j)
            for i in range(k + 1, limit + 1)
            for j in range(1, limit + 1)
        )
    if len(t) == 1:
        n = t[0]
        return frozenset([(n,)]) | frozenset((n, j) for j in range(k + 1, limit + 1))
    return frozenset([t])


def hh_brute_closure_contains(b, t, depth: int) -> bool:
    """t adheres to b, decided by intersecting truncated member sets.

    Any nonempty intersection of base sets with parameters at most depth has
    a witness with indices at most depth + 1, so the truncation at
    depth + 1 is exact for such descriptors and tokens.
    """
    limit = depth + 1
    target = hh_members(b, limit)
    return all(hh_base_members(t, k, limit) & target for k in range(depth + 1))
