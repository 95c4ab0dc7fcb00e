"""Finite maps between finite spaces and the discontinuity ladder.

A map is classified by quantifying over all non-empty restrictions A of its
domain: the continuity set C(f|A) must be non-empty (scatteredly continuous),
have non-empty interior in A (weakly discontinuous), or contain a non-empty
theta-open-in-A subset (theta-weakly discontinuous). Continuity of the whole
map tops the ladder. Witnesses are the least failing restriction under the
sorted-index-tuple order, so reports are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .bitset import bits, index_tuple, subsets_gray
from .space import (
    POINT_CAP,
    CapExceeded,
    FinSpace,
    ForeignSet,
    PointSet,
    SpaceFormatError,
    TopologyError,
    UnknownPoint,
    format_names,
    interior_mask,
    space_from_obj,
    space_to_obj,
    theta_open_part_mask,
)


class DomainMismatch(TopologyError):
    """Two maps or a map and a set that do not share the needed space."""


class BijectivityError(TopologyError):
    """An operation that needs a bijection got a non-bijective map."""


TIERS = (
    "continuous",
    "theta_weakly_discontinuous",
    "weakly_discontinuous",
    "scatteredly_continuous",
    "none",
)
TIER_RANK = {name: i for i, name in enumerate(TIERS)}
TIER_LABELS = {
    "continuous": "continuous",
    "theta_weakly_discontinuous": "θ-weakly discontinuous",
    "weakly_discontinuous": "weakly discontinuous",
    "scatteredly_continuous": "scatteredly continuous",
}


class FinMap:
    """A total point function between two finite spaces.

    img[i] is the codomain index of the image of domain point i.
    """

    __slots__ = ("domain", "codomain", "img")

    domain: FinSpace
    codomain: FinSpace
    img: tuple[int, ...]

    def __init__(self, domain: FinSpace, codomain: FinSpace, img: tuple[int, ...]):
        img = tuple(img)
        if len(img) != len(domain):
            raise SpaceFormatError("one image per domain point required")
        for i in img:
            if not 0 <= i < len(codomain):
                raise UnknownPoint(f"image index {i} outside the codomain")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "codomain", codomain)
        object.__setattr__(self, "img", img)

    def __setattr__(self, *_):
        raise AttributeError("FinMap is immutable")

    def __reduce__(self):
        return (FinMap, (self.domain, self.codomain, self.img))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FinMap)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self.img == other.img
        )

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, self.img))

    def __call__(self, name: str) -> str:
        return self.codomain.names[self.img[self.domain.index(name)]]

    def __repr__(self) -> str:
        body = ", ".join(
            f"{a} -> {self.codomain.names[i]}" for a, i in zip(self.domain.names, self.img)
        )
        return f"FinMap({body})"

    def is_bijective(self) -> bool:
        return len(self.domain) == len(self.codomain) == len(set(self.img))

    def inverse(self) -> "FinMap":
        if not self.is_bijective():
            raise BijectivityError("only bijections can be inverted")
        back = [0] * len(self.img)
        for i, j in enumerate(self.img):
            back[j] = i
        return FinMap(self.codomain, self.domain, tuple(back))


def build_map(domain: FinSpace, codomain: FinSpace, assignment: Mapping[str, str]) -> FinMap:
    for a in assignment:
        domain.index(a)
    img = []
    for a in domain.names:
        if a not in assignment:
            raise UnknownPoint(f"no image given for domain point {a!r}")
        img.append(codomain.index(assignment[a]))
    return FinMap(domain, codomain, tuple(img))


def identity_map(space: FinSpace) -> FinMap:
    return FinMap(space, space, tuple(range(len(space))))


def compose(g: FinMap, f: FinMap) -> FinMap:
    """g after f."""
    if f.codomain != g.domain:
        raise DomainMismatch("codomain of the first map must be the domain of the second")
    return FinMap(f.domain, g.codomain, tuple(g.img[i] for i in f.img))


# ---------------------------------------------------------------------------
# Continuity sets.
# ---------------------------------------------------------------------------

def ok_masks(f: FinMap) -> tuple[int, ...]:
    """ok[x] = domain points whose image lies in the minimal neighborhood of
    f(x). x is a continuity point of f|A iff N(x) ∩ A ⊆ ok[x]: the minimal
    relative neighborhood is the best witness on both sides."""
    cod = f.codomain.nbhd
    n = len(f.domain)
    out = []
    for x in range(n):
        target = cod[f.img[x]]
        m = 0
        for y in range(n):
            if (target >> f.img[y]) & 1:
                m |= 1 << y
        out.append(m)
    return tuple(out)


def continuity_set_mask(f: FinMap, a: int, ok: tuple[int, ...] | None = None) -> int:
    if ok is None:
        ok = ok_masks(f)
    nbhd = f.domain.nbhd
    out = 0
    for x in bits(a):
        if nbhd[x] & a & ~ok[x] == 0:
            out |= 1 << x
    return out


def continuity_points(f: FinMap, a: PointSet) -> PointSet:
    """The continuity points of the restriction of f to a."""
    if a.space != f.domain:
        raise ForeignSet("restriction set must live in the map's domain")
    return PointSet(f.domain, continuity_set_mask(f, a.mask))


# ---------------------------------------------------------------------------
# Classification.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MapClass:
    """The strongest ladder tier a map reaches, plus least witnesses for the
    failed tiers. For the restriction tiers the witness is the least failing
    restriction A; for continuity it is the set of discontinuity points."""

    tier: str
    witnesses: dict[str, tuple[str, ...]]

    def reaches(self, tier: str) -> bool:
        return TIER_RANK[self.tier] <= TIER_RANK[tier]

    def to_obj(self) -> dict:
        return {
            "tier": self.tier,
            "reaches": {t: self.reaches(t) for t in TIERS[:-1]},
            "witnesses": {t: list(w) for t, w in self.witnesses.items()},
        }

    def headline(self) -> str:
        if self.tier == "continuous":
            return "continuous"
        missed = TIERS[TIER_RANK[self.tier] - 1]
        witness = format_names(self.witnesses[missed])
        if missed == "continuous":
            return f"{self.tier} (not continuous; discontinuous on {witness})"
        return f"{self.tier} (not {TIER_LABELS[missed]}; witness A = {witness})"


def classify_map(f: FinMap, max_points: int = 16) -> MapClass:
    """Sweep all non-empty restrictions of the domain once.

    Subsets run in Gray-code order so the per-point discontinuity counters
    update by one flip per step; witnesses are still selected globally as the
    least failing restriction, independent of sweep order. Exponential in the
    domain size, hence the cap.
    """
    n = len(f.domain)
    if n > max_points:
        raise CapExceeded(
            f"classification sweeps 2^{n} restrictions; cap is {max_points} points"
        )
    names = f.domain.names_of
    if n == 0:
        return MapClass("continuous", {})
    nbhd = f.domain.nbhd
    ok = ok_masks(f)
    full = f.domain.full_mask

    # bad_src[p] = points x whose neighborhood gains a discontinuity witness
    # when p enters the restriction.
    bad_src = [0] * n
    for x in range(n):
        for p in bits(nbhd[x] & ~ok[x]):
            bad_src[p] |= 1 << x

    bad_count = [0] * n
    calm = full  # points whose current restriction shows no bad neighbor
    c_full = 0
    fails: dict[str, tuple[tuple[int, ...], int]] = {}

    def note(tier: str, a: int) -> None:
        key = index_tuple(a)
        cur = fails.get(tier)
        if cur is None or key < cur[0]:
            fails[tier] = (key, a)

    for a, flipped in subsets_gray(full):
        if flipped >= 0:
            if (a >> flipped) & 1:
                for x in bits(bad_src[flipped]):
                    bad_count[x] += 1
                    if bad_count[x] == 1:
                        calm &= ~(1 << x)
            else:
                for x in bits(bad_src[flipped]):
                    bad_count[x] -= 1
                    if bad_count[x] == 0:
                        calm |= 1 << x
        if a == 0:
            continue
        c = a & calm
        if a == full:
            c_full = c
        if c == 0:
            note("scatteredly_continuous", a)
            note("weakly_discontinuous", a)
            note("theta_weakly_discontinuous", a)
        elif interior_mask(f.domain, c, a) == 0:
            note("weakly_discontinuous", a)
            note("theta_weakly_discontinuous", a)
        elif theta_open_part_mask(f.domain, c, a) == 0:
            note("theta_weakly_discontinuous", a)

    witnesses: dict[str, tuple[str, ...]] = {}
    if c_full != full:
        witnesses["continuous"] = names(full & ~c_full)
    for t, (_, a) in fails.items():
        witnesses[t] = names(a)

    if "scatteredly_continuous" in witnesses:
        tier = "none"
    elif "weakly_discontinuous" in witnesses:
        tier = "scatteredly_continuous"
    elif "theta_weakly_discontinuous" in witnesses:
        tier = "weakly_discontinuous"
    elif "continuous" in witnesses:
        tier = "theta_weakly_discontinuous"
    else:
        tier = "continuous"
    return MapClass(tier, witnesses)


def is_weak_homeomorphism(f: FinMap, theta: bool = False, max_points: int = 16) -> bool:
    """True iff f is a bijection and f, f⁻¹ both reach the requested tier."""
    if not f.is_bijective():
        raise BijectivityError("weak homeomorphisms are bijections")
    tier = "theta_weakly_discontinuous" if theta else "weakly_discontinuous"
    return (
        classify_map(f, max_points).reaches(tier)
        and classify_map(f.inverse(), max_points).reaches(tier)
    )


def map_class_text(mc: MapClass) -> str:
    lines = [mc.headline()]
    for t in TIERS[:-1]:
        if mc.reaches(t):
            lines.append(f"{t}: true")
        elif t == "continuous":
            lines.append(f"{t}: false [witness: discontinuous on {format_names(mc.witnesses[t])}]")
        else:
            lines.append(f"{t}: false [witness: A = {format_names(mc.witnesses[t])}]")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# JSON forms.
# ---------------------------------------------------------------------------

def map_to_obj(f: FinMap) -> dict:
    return {
        "domain": space_to_obj(f.domain),
        "codomain": space_to_obj(f.codomain),
        "map": {a: f.codomain.names[i] for a, i in zip(f.domain.names, f.img)},
    }


def _space_operand(value, base_dir: Path | None, max_points: int) -> FinSpace:
    if isinstance(value, str):
        path = Path(value)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise SpaceFormatError(f"cannot read space file {str(path)!r}: {e}") from None
        import json

        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise SpaceFormatError(f"{str(path)!r} is not valid JSON: {e}") from None
        return space_from_obj(obj, max_points=max_points)
    return space_from_obj(value, max_points=max_points)


def map_from_obj(obj, base_dir: Path | None = None, max_points: int = POINT_CAP) -> FinMap:
    """Parse {"domain": <space or path>, "codomain": <space or path>,
    "map": {point: point}}. Relative paths resolve against base_dir."""
    if not isinstance(obj, dict):
        raise SpaceFormatError("map description must be an object")
    for key in ("domain", "codomain", "map"):
        if key not in obj:
            raise SpaceFormatError(f'map description is missing "{key}"')
    dom = _space_operand(obj["domain"], base_dir, max_points)
    cod = _space_operand(obj["codomain"], base_dir, max_points)
    if not isinstance(obj["map"], dict):
        raise SpaceFormatError('"map" must be an object mapping points to points')
    return build_map(dom, cod, obj["map"])
