"""Countable spines-and-tips space behind decidable oracles.

Points are finite tokens: () is the root, (n,) a stalk point, (n, m) a
tip, all indices starting at 1. The topology is generated by singleton
tips, stalk bases U(n,m) = {(n)} u {(n,j): j >= m}, and root bases
U(n) = {()} u {(i,j): i >= n}. Everything is answered in closed form,
so closures and separations are exact, never sampled.

The space is first-countable, Hausdorff, scattered and locally regular
but not regular at the root, and any space with a certified failure of
regularity at a point contains a copy of it; embed_hedgehog builds that
copy step by step through the oracle interface and verify_embedding
re-checks the result from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .space import FinSpace, TopologyError, closure_mask

Token = tuple


class OracleError(TopologyError):
    """Base for oracle-space failures."""


class MalformedToken(OracleError):
    """Token is not a well-formed point identifier."""


class NotHausdorffWitnessed(OracleError):
    """separate() could not produce disjoint basic neighborhoods."""


class RegularAtPoint(OracleError):
    """Embedding precondition failed: closures of the base at the chosen
    point stay inside the reference neighborhood."""


class OracleRefusal(OracleError):
    """An oracle declined to produce a point; carries the failing step."""


class VerificationFailure(OracleError):
    """An embedding check failed; .clause names the violated condition."""

    def __init__(self, clause: str, detail: str):
        super().__init__(f"{clause}: {detail}")
        self.clause = clause


# ---------------------------------------------------------------------------
# Tokens.
# ---------------------------------------------------------------------------

ROOT: Token = ()


def is_root(t: Token) -> bool:
    return t == ()


def is_stalk(t: Token) -> bool:
    return len(t) == 1


def is_tip(t: Token) -> bool:
    return len(t) == 2 and t[0] != "fin"


def is_fin(t: Token) -> bool:
    return len(t) == 2 and t[0] == "fin"


def token_key(t: Token) -> tuple:
    """Total order on tokens: root, then stalks, then tips, then finite
    summand points; index order within a kind."""
    if is_root(t):
        return (0, 0, 0, "")
    if is_stalk(t):
        return (1, t[0], 0, "")
    if is_fin(t):
        return (3, 0, 0, t[1])
    return (2, t[0], t[1], "")


def token_str(t: Token) -> str:
    if is_root(t):
        return "()"
    if is_stalk(t):
        return f"({t[0]})"
    if is_fin(t):
        return f"fin:{t[1]}"
    return f"({t[0]},{t[1]})"


def _check_token(t, allow_fin: bool = False) -> Token:
    if isinstance(t, list):
        t = tuple(t)
    if not isinstance(t, tuple):
        raise MalformedToken(f"token must be a tuple, got {t!r}")
    if t == ():
        return t
    if len(t) == 1 and isinstance(t[0], int) and t[0] >= 1:
        return t
    if len(t) == 2 and t[0] == "fin":
        if allow_fin and isinstance(t[1], str):
            return t
        raise MalformedToken(f"finite-summand token {t!r} not valid here")
    if len(t) == 2 and all(isinstance(v, int) and v >= 1 for v in t):
        return t
    raise MalformedToken(f"not a well-formed token: {t!r}")


# ---------------------------------------------------------------------------
# Basic sets.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Singleton:
    n: int
    m: int

    def __str__(self) -> str:
        return f"{{({self.n},{self.m})}}"


@dataclass(frozen=True)
class StalkBase:
    """U(n,m) = {(n)} u {(n,j): j >= m}; clopen."""

    n: int
    m: int

    def __str__(self) -> str:
        return f"U({self.n},{self.m})"


@dataclass(frozen=True)
class RootBase:
    """U(n) = {()} u {(i,j): i >= n}; contains no stalk points."""

    n: int

    def __str__(self) -> str:
        return f"U({self.n})"


@dataclass(frozen=True)
class FinBase:
    """Minimal neighborhood of one point of a finite summand."""

    name: str

    def __str__(self) -> str:
        return f"N({self.name})"


@dataclass(frozen=True)
class MappedSet:
    """A basic set transported along a stalk relabeling."""

    base: object

    def __str__(self) -> str:
        return f"mapped:{self.base}"


def basic_str(b) -> str:
    return str(b)


# ---------------------------------------------------------------------------
# Oracle spaces.
# ---------------------------------------------------------------------------


class OracleSpace:
    """Interface: validate, nbhd_base, contains, closure_contains, separate,
    pick_in_closure_minus, approach_within. All deterministic; refusals are
    returned as None, never guessed."""

    def validate(self, t) -> Token:
        raise NotImplementedError

    def nbhd_base(self, x: Token, k: int):
        raise NotImplementedError

    def contains(self, b, t: Token) -> bool:
        raise NotImplementedError

    def closure_contains(self, b, t: Token) -> bool:
        raise NotImplementedError

    def separate(self, a: Token, b: Token) -> tuple[int, int]:
        raise NotImplementedError

    def pick_in_closure_minus(self, a, b=None) -> Token | None:
        raise NotImplementedError

    def approach_within(
        self, x: Token, constraints: Sequence, count: int
    ) -> tuple[Token, ...] | None:
        raise NotImplementedError


class HedgehogOracle(OracleSpace):
    def validate(self, t) -> Token:
        return _check_token(t)

    def nbhd_base(self, x: Token, k: int):
        x = self.validate(x)
        if k < 0:
            raise OracleError("base index must be non-negative")
        if is_root(x):
            return RootBase(k + 1)
        if is_stalk(x):
            return StalkBase(x[0], k + 1)
        return Singleton(x[0], x[1])

    def contains(self, b, t: Token) -> bool:
        t = self.validate(t)
        if isinstance(b, Singleton):
            return t == (b.n, b.m)
        if isinstance(b, StalkBase):
            if t == (b.n,):
                return True
            return is_tip(t) and t[0] == b.n and t[1] >= b.m
        if isinstance(b, RootBase):
            if is_root(t):
                return True
            return is_tip(t) and t[0] >= b.n
        raise OracleError(f"foreign basic set {b!r}")

    def closure_contains(self, b, t: Token) -> bool:
        t = self.validate(t)
        if isinstance(b, Singleton):
            # Tips are isolated and closed.
            return t == (b.n, b.m)
        if isinstance(b, StalkBase):
            # U(n,m) is clopen: no root base U(k) with k > n meets it, and
            # no other stalk base meets it at all.
            return self.contains(b, t)
        if isinstance(b, RootBase):
            # Stalk (k) adheres iff k >= n: U(k,m) always meets the tips of
            # U(n) on stalk k in a tail.
            if is_stalk(t):
                return t[0] >= b.n
            return self.contains(b, t)
        raise OracleError(f"foreign basic set {b!r}")

    def separate(self, a: Token, b: Token) -> tuple[int, int]:
        """Base indices (ia, ib) with nbhd_base(a, ia) and nbhd_base(b, ib)
        disjoint."""
        a = self.validate(a)
        b = self.validate(b)
        if a == b:
            raise NotHausdorffWitnessed(f"cannot separate {token_str(a)} from itself")
        if token_key(a) > token_key(b):
            ib, ia = self.separate(b, a)
            return ia, ib
        # a is now the earlier kind.
        if is_root(a):
            # U(n+1) misses both (n) and every (n,m).
            return b[0], 0
        if is_stalk(a) and is_stalk(b):
            return 0, 0
        if is_stalk(a):
            if b[0] == a[0]:
                # U(a, m+1) skips the tip (a, m).
                return b[1], 0
            return 0, 0
        return 0, 0

    def pick_in_closure_minus(self, a, b=None) -> Token | None:
        """Least token of cl(a) \\ b, or None when the difference is empty."""

        def blocked(t: Token) -> bool:
            return b is not None and self.contains(b, t)

        if isinstance(a, Singleton):
            t = (a.n, a.m)
            return None if blocked(t) else t
        if isinstance(a, StalkBase):
            if not blocked((a.n,)):
                return (a.n,)
            return self._least_tip_tail(a.n, a.m, b)
        if isinstance(a, RootBase):
            if not blocked(ROOT):
                return ROOT
            # Stalks (k), k >= n, ascending; only a StalkBase can block one,
            # and it blocks exactly one index.
            k = a.n
            if isinstance(b, StalkBase) and b.n == k:
                k += 1
            return (k,)
        raise OracleError(f"foreign basic set {a!r}")

    def _least_tip_tail(self, n: int, m: int, b) -> Token | None:
        # Least (n, j), j >= m, outside b.
        if b is None:
            return (n, m)
        if isinstance(b, Singleton):
            if b.n == n and b.m == m:
                return (n, m + 1)
            return (n, m)
        if isinstance(b, StalkBase):
            if b.n != n:
                return (n, m)
            return (n, m) if m < b.m else None
        if isinstance(b, RootBase):
            return None if n >= b.n else (n, m)
        return (n, m)

    def approach_within(
        self, x: Token, constraints: Sequence, count: int
    ) -> tuple[Token, ...] | None:
        """count distinct points inside every constraint converging to x, or
        None. Tips admit no such sequence; singleton constraints are refused."""
        x = self.validate(x)
        if count <= 0:
            return ()
        if is_tip(x):
            return None
        if is_stalk(x):
            n = x[0]
            j = 1
            for c in constraints:
                if isinstance(c, StalkBase):
                    if c.n != n:
                        return None
                    j = max(j, c.m)
                elif isinstance(c, RootBase):
                    if n < c.n:
                        return None
                else:
                    return None
            return tuple((n, j + i) for i in range(count))
        lo = 1
        for c in constraints:
            if isinstance(c, RootBase):
                lo = max(lo, c.n)
            else:
                return None
        return tuple((lo + i, 1) for i in range(count))


class SumOracle(OracleSpace):
    """Disjoint sum of the hedgehog and a finite space.

    Finite points are tokens ("fin", name) with constant neighborhood base
    equal to their minimal neighborhood; the summands are mutually clopen.
    """

    def __init__(self, summand: FinSpace):
        self.hh = HedgehogOracle()
        self.summand = summand

    def validate(self, t) -> Token:
        t = _check_token(t, allow_fin=True)
        if is_fin(t):
            self.summand.index(t[1])
        return t

    def _fin_mask(self, b: FinBase) -> int:
        return self.summand.nbhd[self.summand.index(b.name)]

    def nbhd_base(self, x: Token, k: int):
        x = self.validate(x)
        if is_fin(x):
            return FinBase(x[1])
        return self.hh.nbhd_base(x, k)

    def contains(self, b, t: Token) -> bool:
        t = self.validate(t)
        if isinstance(b, FinBase):
            return is_fin(t) and bool(self._fin_mask(b) >> self.summand.index(t[1]) & 1)
        return not is_fin(t) and self.hh.contains(b, t)

    def closure_contains(self, b, t: Token) -> bool:
        t = self.validate(t)
        if isinstance(b, FinBase):
            if not is_fin(t):
                return False
            cl = closure_mask(self.summand, self._fin_mask(b))
            return bool(cl >> self.summand.index(t[1]) & 1)
        return not is_fin(t) and self.hh.closure_contains(b, t)

    def separate(self, a: Token, b: Token) -> tuple[int, int]:
        a = self.validate(a)
        b = self.validate(b)
        if a == b:
            raise NotHausdorffWitnessed(f"cannot separate {token_str(a)} from itself")
        if is_fin(a) and is_fin(b):
            ma = self.summand.nbhd[self.summand.index(a[1])]
            mb = self.summand.nbhd[self.summand.index(b[1])]
            if ma & mb:
                raise NotHausdorffWitnessed(
                    f"minimal neighborhoods of {token_str(a)} and {token_str(b)} meet"
                )
            return 0, 0
        if is_fin(a) or is_fin(b):
            return 0, 0
        return self.hh.separate(a, b)

    def pick_in_closure_minus(self, a, b=None) -> Token | None:
        if isinstance(a, FinBase):
            cl = closure_mask(self.summand, self._fin_mask(a))
            for i, name in enumerate(self.summand.names):
                if not cl >> i & 1:
                    continue
                t = ("fin", name)
                if b is None or not self.contains(b, t):
                    return t
            return None
        return self.hh.pick_in_closure_minus(a, None if isinstance(b, FinBase) else b)

    def approach_within(
        self, x: Token, constraints: Sequence, count: int
    ) -> tuple[Token, ...] | None:
        x = self.validate(x)
        if is_fin(x) or any(isinstance(c, FinBase) for c in constraints):
            return None
        return self.hh.approach_within(x, constraints, count)


class PermutedOracle(OracleSpace):
    """The hedgehog with stalk indices relabeled by a finite-support
    permutation; pick_in_closure_minus scans tokens in the relabeled
    coordinates so ties break by the visible names, not the hidden ones."""

    def __init__(self, images: dict[int, int], scan_limit: int = 128):
        fwd = {int(k): int(v) for k, v in images.items()}
        if sorted(fwd) != sorted(fwd.values()) or min(fwd, default=1) < 1:
            raise OracleError("stalk relabeling must permute a finite set of indices >= 1")
        self.fwd = {k: v for k, v in fwd.items() if k != v}
        self.inv = {v: k for k, v in self.fwd.items()}
        self.hh = HedgehogOracle()
        self.scan_limit = max(scan_limit, 2 * (max(self.fwd, default=1) + 1))

    def _fwd_token(self, t: Token) -> Token:
        if is_stalk(t):
            return (self.fwd.get(t[0], t[0]),)
        if is_tip(t):
            return (self.fwd.get(t[0], t[0]), t[1])
        return t

    def _inv_token(self, t: Token) -> Token:
        if is_stalk(t):
            return (self.inv.get(t[0], t[0]),)
        if is_tip(t):
            return (self.inv.get(t[0], t[0]), t[1])
        return t

    def _unwrap(self, b):
        if not isinstance(b, MappedSet):
            raise OracleError(f"foreign basic set {b!r}")
        return b.base

    def validate(self, t) -> Token:
        return _check_token(t)

    def nbhd_base(self, x: Token, k: int):
        return MappedSet(self.hh.nbhd_base(self._inv_token(self.validate(x)), k))

    def contains(self, b, t: Token) -> bool:
        return self.hh.contains(self._unwrap(b), self._inv_token(self.validate(t)))

    def closure_contains(self, b, t: Token) -> bool:
        return self.hh.closure_contains(self._unwrap(b), self._inv_token(self.validate(t)))

    def separate(self, a: Token, b: Token) -> tuple[int, int]:
        return self.hh.separate(
            self._inv_token(self.validate(a)), self._inv_token(self.validate(b))
        )

    def _tokens_ascending(self):
        yield ROOT
        for n in range(1, self.scan_limit + 1):
            yield (n,)
        for n in range(1, self.scan_limit + 1):
            for m in range(1, self.scan_limit + 1):
                yield (n, m)

    def pick_in_closure_minus(self, a, b=None) -> Token | None:
        inner_a = self._unwrap(a)
        inner_b = None if b is None else self._unwrap(b)
        for t in self._tokens_ascending():
            s = self._inv_token(t)
            if self.hh.closure_contains(inner_a, s):
                if inner_b is None or not self.hh.contains(inner_b, s):
                    return t
        return None

    def approach_within(
        self, x: Token, constraints: Sequence, count: int
    ) -> tuple[Token, ...] | None:
        inner = self.hh.approach_within(
            self._inv_token(self.validate(x)),
            [self._unwrap(c) for c in constraints],
            count,
        )
        if inner is None:
            return None
        return tuple(self._fwd_token(t) for t in inner)


def hedgehog() -> HedgehogOracle:
    return HedgehogOracle()


# ---------------------------------------------------------------------------
# Profile certification.
# ---------------------------------------------------------------------------


@dataclass
class ProfileReport:
    depth: int
    decreasing_checks: int
    layers: tuple[str, ...]
    clopen_checks: int
    witnesses: tuple[str, ...]
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_obj(self) -> dict:
        return {
            "depth": self.depth,
            "decreasing_checks": self.decreasing_checks,
            "layers": list(self.layers),
            "clopen_checks": self.clopen_checks,
            "non_regularity_witnesses": list(self.witnesses),
            "failures": list(self.failures),
            "verdict": "pass" if self.ok else "fail",
        }

    def to_text(self) -> str:
        lines = [
            f"hedgehog profile, depth {self.depth}",
            f"first-countable: decreasing bases ({self.decreasing_checks} inclusions)",
            "scattered: layers " + ", ".join(self.layers) + " exhaust the space",
            f"locally regular: {self.clopen_checks} closure checks",
            f"not regular at root: {len(self.witnesses)} witnesses"
            + (f", least {self.witnesses[0]} in cl(U(1)) outside U(1)" if self.witnesses else ""),
        ]
        for f in self.failures:
            lines.append(f"FAILED: {f}")
        lines.append(f"verdict: {'pass' if self.ok else 'fail'}")
        return "\n".join(lines)


def _basic_subset(a, b) -> bool:
    # Containment between basic sets of the pure hedgehog, closed form.
    if isinstance(a, Singleton):
        if isinstance(b, Singleton):
            return a == b
        if isinstance(b, StalkBase):
            return a.n == b.n and a.m >= b.m
        return a.n >= b.n
    if isinstance(a, StalkBase) and isinstance(b, StalkBase):
        return a.n == b.n and a.m >= b.m
    if isinstance(a, RootBase) and isinstance(b, RootBase):
        return a.n >= b.n
    return False


def certify_hedgehog_profile(depth: int) -> ProfileReport:
    """Check, to the given depth, the profile: first-countable via decreasing
    bases, scattered in three layers, locally regular via clopen basic sets,
    and not regular at the root with explicit witnesses."""
    o = hedgehog()
    failures: list[str] = []
    if depth <= 0:
        return ProfileReport(depth, 0, (), 0, (), ())

    decreasing = 0
    points: list[Token] = [ROOT] + [(n,) for n in range(1, depth + 1)] + [(1, 1)]
    for x in points:
        for k in range(depth):
            if not _basic_subset(o.nbhd_base(x, k + 1), o.nbhd_base(x, k)):
                failures.append(f"base at {token_str(x)} not decreasing at index {k}")
            decreasing += 1

    # Scattered layers: tips are isolated outright, stalks once tips are
    # removed, the root once stalks are removed too.
    layers = ("tips", "stalks", "root")
    for n in range(1, depth + 1):
        if o.nbhd_base((n, 1), 0) != Singleton(n, 1):
            failures.append(f"tip ({n},1) not isolated")
        b = o.nbhd_base((n,), 0)
        for k in range(1, depth + 1):
            if k != n and o.contains(b, (k,)):
                failures.append(f"stalk ({n}) not isolated among stalks")
        if o.contains(b, ROOT):
            failures.append(f"stalk base U({n},1) contains the root")
    if o.contains(o.nbhd_base(ROOT, 0), (1,)):
        failures.append("root base U(1) contains a stalk")

    # Local regularity: stalk bases and tip singletons are clopen, and root
    # bases are relatively clopen inside U(1); spot sample around each set.
    clopen = 0

    def sample(n: int, m: int) -> list[Token]:
        return [
            ROOT,
            (n,),
            (n + 1,),
            (n, max(1, m - 1)),
            (n, m),
            (n, m + 1),
            (n + 1, m),
            (1, 1),
        ]

    for n in range(1, depth + 1):
        for m in range(1, depth + 1):
            b = StalkBase(n, m)
            s = Singleton(n, m)
            for t in sample(n, m):
                if o.closure_contains(b, t) != o.contains(b, t):
                    failures.append(f"U({n},{m}) not clopen at {token_str(t)}")
                if o.closure_contains(s, t) != (t == (n, m)):
                    failures.append(f"singleton ({n},{m}) not closed at {token_str(t)}")
                clopen += 2
    u1 = RootBase(1)
    for k in range(1, depth + 1):
        b = RootBase(k)
        for t in [ROOT, (k, 1), (max(1, k - 1), 1), (k + 1, 1), (k, k)]:
            if o.contains(u1, t) and o.closure_contains(b, t) != o.contains(b, t):
                failures.append(f"U({k}) not relatively clopen in U(1) at {token_str(t)}")
            clopen += 1

    # Non-regularity at the root: (k) lies in cl(U(k)) but in no root base.
    witnesses = []
    for k in range(1, depth + 1):
        t = (k,)
        if o.closure_contains(RootBase(k), t) and not o.contains(u1, t):
            witnesses.append(token_str(t))
        else:
            failures.append(f"missing non-regularity witness at index {k}")

    return ProfileReport(
        depth, decreasing, layers, clopen, tuple(witnesses), tuple(failures)
    )


# ---------------------------------------------------------------------------
# Embedding.
# ---------------------------------------------------------------------------

SHRINK_BOUND = 64


@dataclass
class Embedding:
    space: OracleSpace
    root_image: Token
    u0_index: int
    depth: int
    ks: tuple[int, ...]
    stalk_images: tuple[Token, ...]
    v_indices: tuple[int, ...]
    tips: tuple[tuple[Token, ...], ...]

    def h(self, t) -> Token:
        t = _check_token(t)
        if is_root(t):
            return self.root_image
        if is_stalk(t):
            if t[0] > self.depth:
                raise OracleError(f"embedding truncated at depth {self.depth}")
            return self.stalk_images[t[0] - 1]
        if t[0] > self.depth or t[1] > self.depth:
            raise OracleError(f"embedding truncated at depth {self.depth}")
        return self.tips[t[0] - 1][t[1] - 1]

    def to_obj(self) -> dict:
        return {
            "u0_index": self.u0_index,
            "depth": self.depth,
            "root": token_str(self.root_image),
            "stalks": [token_str(t) for t in self.stalk_images],
            "tips": [[token_str(t) for t in row] for row in self.tips],
            "ks": list(self.ks),
            "v_indices": list(self.v_indices),
        }

    def to_text(self) -> str:
        lines = [f"embedding, depth {self.depth}, u0_index {self.u0_index}"]
        lines.append(f"h(()) = {token_str(self.root_image)}")
        for n in range(1, self.depth + 1):
            v = basic_str(self.space.nbhd_base(self.stalk_images[n - 1], self.v_indices[n - 1]))
            lines.append(
                f"h(({n})) = {token_str(self.stalk_images[n - 1])}"
                f"  [k={self.ks[n - 1]}, V={v}]"
            )
            lines.append("  tips: " + " ".join(token_str(t) for t in self.tips[n - 1]))
        return "\n".join(lines)


def embed_hedgehog(
    o: OracleSpace, x: Token = ROOT, u0_index: int = 0, depth: int = 20
) -> Embedding:
    """Build a copy of the hedgehog inside o, rooted at x.

    U0 is the u0_index-th basic neighborhood of x. The construction first
    certifies that no deeper basic neighborhood has closure inside U0 (else
    RegularAtPoint), then, for n = 1..depth, picks x_n in cl(U_{k_n}) \\ U0,
    separates it from x to fix V_n and the next k, shrinks V_n until its
    closure avoids the earlier picks, and extracts a tip sequence inside
    V_n and U_{k_n} converging to x_n."""
    if depth < 1:
        raise OracleError("depth must be at least 1")
    x = o.validate(x)
    u0 = o.nbhd_base(x, u0_index)

    for j in range(u0_index, u0_index + depth + 1):
        if o.pick_in_closure_minus(o.nbhd_base(x, j), u0) is None:
            raise RegularAtPoint(
                f"closure of base {j} at {token_str(x)} lies inside base {u0_index}"
            )

    ks = [u0_index]
    stalks: list[Token] = []
    v_indices: list[int] = []
    tips: list[tuple[Token, ...]] = []
    for n in range(1, depth + 1):
        k_n = ks[-1]
        u_kn = o.nbhd_base(x, k_n)
        x_n = o.pick_in_closure_minus(u_kn, u0)
        if x_n is None:
            raise OracleRefusal(f"step {n}: no point in cl(base {k_n}) outside base {u0_index}")
        vi, ri = o.separate(x_n, x)
        ks.append(max(k_n + 1, ri))
        # Shrink V_n until its closure avoids x_1 .. x_{n-1}.
        base_vi = vi
        while any(o.closure_contains(o.nbhd_base(x_n, vi), s) for s in stalks):
            vi += 1
            if vi - base_vi > SHRINK_BOUND:
                raise OracleRefusal(f"step {n}: could not shrink V past earlier picks")
        v_n = o.nbhd_base(x_n, vi)
        row = o.approach_within(x_n, (v_n, u_kn), depth)
        if row is None:
            raise OracleRefusal(f"step {n}: no approach sequence inside V and base {k_n}")
        stalks.append(x_n)
        v_indices.append(vi)
        tips.append(tuple(row))

    return Embedding(
        space=o,
        root_image=x,
        u0_index=u0_index,
        depth=depth,
        ks=tuple(ks),
        stalk_images=tuple(stalks),
        v_indices=tuple(v_indices),
        tips=tuple(tips),
    )


def verify_embedding(o: OracleSpace, e: Embedding, depth: int) -> dict:
    """Re-check an embedding to the given depth (at most the built depth).

    Clauses: (distinctness) all image tokens differ; (stalk_convergence)
    tips of stalk n eventually enter every basic neighborhood of the stalk
    image; (root_pattern) tips of all stalks from some index on eventually
    enter every basic neighborhood of the root image; (separation) each V_n
    holds exactly its own stalk and tips, and the tail neighborhood at the
    next k holds all later tips while excluding the stalk image."""
    if depth < 1 or depth > e.depth:
        raise OracleError(f"verify depth must be in 1..{e.depth}")
    checks = {"distinctness": 0, "stalk_convergence": 0, "root_pattern": 0, "separation": 0}

    images = [e.root_image] + [e.stalk_images[n] for n in range(depth)]
    for n in range(depth):
        images.extend(e.tips[n][:depth])
    checks["distinctness"] = len(images) * (len(images) - 1) // 2
    seen: dict[Token, int] = {}
    for i, t in enumerate(images):
        if t in seen:
            raise VerificationFailure(
                "distinctness", f"images {seen[t]} and {i} are both {token_str(t)}"
            )
        seen[t] = i

    for n in range(1, depth + 1):
        xn = e.stalk_images[n - 1]
        row = e.tips[n - 1]
        for k in range(depth):
            b = o.nbhd_base(xn, k)
            inside = [o.contains(b, t) for t in row[:depth]]
            checks["stalk_convergence"] += len(inside)
            if not inside[-1]:
                raise VerificationFailure(
                    "stalk_convergence",
                    f"tip images of stalk {n} never settle into base {k} at "
                    f"{token_str(xn)}",
                )

    for k in range(depth):
        b = o.nbhd_base(e.root_image, k)
        stalk_ok = []
        for n in range(1, depth + 1):
            inside = [o.contains(b, t) for t in e.tips[n - 1][:depth]]
            checks["root_pattern"] += len(inside)
            stalk_ok.append(all(inside))
        if not stalk_ok[-1]:
            raise VerificationFailure(
                "root_pattern",
                f"no stalk tail has all tips inside base {k} at the root image",
            )

    for n in range(1, depth + 1):
        xn = e.stalk_images[n - 1]
        v_n = o.nbhd_base(xn, e.v_indices[n - 1])
        if not o.contains(v_n, xn):
            raise VerificationFailure("separation", f"V_{n} misses its own stalk image")
        checks["separation"] += 1
        for t in e.tips[n - 1][:depth]:
            checks["separation"] += 1
            if not o.contains(v_n, t):
                raise VerificationFailure(
                    "separation", f"V_{n} misses its own tip image {token_str(t)}"
                )
        for m in range(1, depth + 1):
            if m == n:
                continue
            checks["separation"] += 1
            if o.contains(v_n, e.stalk_images[m - 1]):
                raise VerificationFailure(
                    "separation", f"V_{n} captures the stalk image of {m}"
                )
            for t in e.tips[m - 1][:depth]:
                checks["separation"] += 1
                if o.contains(v_n, t):
                    raise VerificationFailure(
                        "separation", f"V_{n} captures a tip image of stalk {m}"
                    )
        w_n = o.nbhd_base(e.root_image, e.ks[n])
        checks["separation"] += 1
        if o.closure_contains(w_n, xn):
            raise VerificationFailure(
                "separation", f"tail base at k_{n + 1} still adheres to stalk image {n}"
            )
        for m in range(n + 1, depth + 1):
            for t in e.tips[m - 1][:depth]:
                checks["separation"] += 1
                if not o.contains(w_n, t):
                    raise VerificationFailure(
                        "separation",
                        f"tail base at k_{n + 1} misses tip image {token_str(t)} "
                        f"of stalk {m}",
                    )

    return {"depth": depth, "checks": checks, "verdict": "pass"}
