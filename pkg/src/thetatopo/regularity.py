"""Regularity variants for finite spaces, with witnesses.

Every decider reduces its quantifier to minimal neighborhoods where that is
exact, and otherwise scans subsets in sorted-index-tuple order so the first
failure found is the least witness. The kernel operations used by the
decomposition module live here too: the union of all (theta-)open regular
subspaces of a subset.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .bitset import bits, index_tuple, submasks, subsets_lex
from .generate import labeled_rows, space_from_rows
from .maps import FinMap, classify_map, map_to_obj
from .space import (
    CapExceeded,
    FinSpace,
    TopologyError,
    closure_mask,
    format_names,
    is_open_mask,
    theta_interior_mask,
    theta_open_part_mask,
)

# Properties a finite space either has or lacks, in report order. The search
# grammar exposes exactly these names.
DECIDABLE_PROPERTIES = (
    "regular",
    "locally_regular",
    "quasi_regular",
    "hereditarily_quasi_regular",
    "weakly_regular",
    "theta_weakly_regular",
    "w_theta_regular",
    "scattered",
    "t1",
)
REPORT_PROPERTIES = DECIDABLE_PROPERTIES + ("nowhere_regular",)

# Provable implications between decidable properties: if every premise holds,
# the conclusion must. Checked on every report and exhaustively by the
# diagram verifier.
ARROWS: tuple[tuple[tuple[str, ...], str], ...] = (
    (("regular",), "theta_weakly_regular"),
    (("regular",), "w_theta_regular"),
    (("theta_weakly_regular",), "weakly_regular"),
    (("theta_weakly_regular",), "w_theta_regular"),
    (("w_theta_regular",), "hereditarily_quasi_regular"),
    (("hereditarily_quasi_regular",), "quasi_regular"),
    (("locally_regular",), "weakly_regular"),
    (("scattered", "t1"), "theta_weakly_regular"),
)

# Properties that force "no scatteredly-continuous-but-not-weakly-
# discontinuous map into the space can exist", at any search bound.
SW_SAFE_PREMISES = ("regular", "theta_weakly_regular", "locally_regular")

PROPERTY_CAP = 10
SW_BOUND_CAP = 4


def arrow_name(premises: tuple[str, ...], conclusion: str) -> str:
    return " && ".join(premises) + " => " + conclusion


# ---------------------------------------------------------------------------
# Point-local deciders.
# ---------------------------------------------------------------------------

def regular_at_mask(space: FinSpace, x: int, within: int | None = None) -> bool:
    """Every relatively open set containing x contains a closed neighborhood
    of x; the closure of the minimal neighborhood is the smallest candidate,
    so it must already fit inside the minimal neighborhood."""
    w = space.full_mask if within is None else within
    nb = space.nbhd[x] & w
    return closure_mask(space, nb, w) & ~nb == 0


def is_regular_mask(space: FinSpace, a: int) -> bool:
    return all(regular_at_mask(space, x, a) for x in bits(a))


def is_regular_at(space: FinSpace, x: str) -> bool:
    return regular_at_mask(space, space.index(x))


def is_regular(space: FinSpace) -> bool:
    return is_regular_mask(space, space.full_mask)


def is_nowhere_regular(space: FinSpace) -> bool:
    return not any(regular_at_mask(space, x) for x in range(len(space)))


def is_locally_regular(space: FinSpace) -> bool:
    """Regularity is hereditary, so an open regular neighborhood of x exists
    iff the minimal one is regular."""
    return all(is_regular_mask(space, space.nbhd[x]) for x in range(len(space)))


def quasi_regular_mask(space: FinSpace, a: int) -> bool:
    """Every non-empty relatively open set contains the relative closure of a
    non-empty relatively open set; minimal neighborhoods suffice on both
    sides (shrinking the inner set and the outer set only helps)."""
    for x in bits(a):
        target = space.nbhd[x] & a
        if not any(
            closure_mask(space, space.nbhd[y] & a, a) & ~target == 0 for y in bits(a)
        ):
            return False
    return True


def is_quasi_regular(space: FinSpace) -> bool:
    return quasi_regular_mask(space, space.full_mask)


def is_scattered(space: FinSpace) -> bool:
    return scattered_residue_mask(space) == 0


def scattered_residue_mask(space: FinSpace) -> int:
    """Delete isolated points until none remain; the residue is the largest
    subset that is dense in itself (empty iff the space is scattered)."""
    a = space.full_mask
    while a:
        isolated = 0
        for x in bits(a):
            if space.nbhd[x] & a == 1 << x:
                isolated |= 1 << x
        if not isolated:
            return a
        a &= ~isolated
    return 0


def t1_violation(space: FinSpace) -> int | None:
    for x in range(len(space)):
        if space.nbhd[x] != 1 << x:
            return x
    return None


# ---------------------------------------------------------------------------
# Theta machinery and kernels.
# ---------------------------------------------------------------------------

def minimal_theta_nbhd_mask(space: FinSpace, x: int, within: int | None = None) -> int:
    """The smallest theta-open (relative to `within`) set containing x: close
    {x} under taking relative closures of minimal neighborhoods."""
    w = space.full_mask if within is None else within
    m = 1 << x
    while True:
        nxt = m
        for y in bits(m):
            nxt |= closure_mask(space, space.nbhd[y] & w, w)
        if nxt == m:
            return m
        m = nxt


def theta_kernel_mask(space: FinSpace, a: int) -> int:
    """Union of all subsets of a that are theta-open in the subspace on a and
    regular as subspaces. Scans submasks, cheapest test first; the result is
    itself theta-open in a and regular, which is asserted."""
    out = 0
    for v in submasks(a):
        if v == 0 or v & ~out == 0:
            continue
        if theta_interior_mask(space, v, a) != v:
            continue
        if is_regular_mask(space, v):
            out |= v
    if out:
        if theta_interior_mask(space, out, a) != out or not is_regular_mask(space, out):
            raise TopologyError("internal: theta kernel lost theta-openness or regularity")
    return out


def open_kernel_mask(space: FinSpace, a: int) -> int:
    """Union of all relatively open regular subspaces of a. A relatively open
    regular set is a union of regular minimal pieces, so those suffice."""
    out = 0
    for x in bits(a):
        m = space.nbhd[x] & a
        if is_regular_mask(space, m):
            out |= m
    if out:
        if not is_open_mask(space, out, a) or not is_regular_mask(space, out):
            raise TopologyError("internal: open kernel lost openness or regularity")
    return out


def _closed_nonempty_lex(space: FinSpace):
    full = space.full_mask
    for a in subsets_lex(full):
        if is_open_mask(space, full & ~a):
            yield a


def is_weakly_regular(space: FinSpace) -> bool:
    return weakly_regular_witness(space) is None


def weakly_regular_witness(space: FinSpace) -> int | None:
    """Least non-empty closed subset with no non-empty relatively open
    regular subspace, or None."""
    for a in _closed_nonempty_lex(space):
        if open_kernel_mask(space, a) == 0:
            return a
    return None


def is_theta_weakly_regular(space: FinSpace) -> bool:
    return theta_weakly_regular_witness(space) is None


def theta_weakly_regular_witness(space: FinSpace) -> int | None:
    for a in _closed_nonempty_lex(space):
        if theta_kernel_mask(space, a) == 0:
            return a
    return None


def is_w_theta_regular(space: FinSpace) -> bool:
    return w_theta_regular_witness(space) is None


def w_theta_regular_witness(space: FinSpace) -> tuple[int, int] | None:
    """Least (subspace, relatively open set) such that the open set contains
    no non-empty theta-open-in-the-subspace subset. Relatively open sets are
    unions of minimal pieces, so checking the pieces is exact."""
    for a in subsets_lex(space.full_mask):
        for x in bits(a):
            u = space.nbhd[x] & a
            if theta_open_part_mask(space, u, a) == 0:
                return a, u
    return None


def hereditarily_quasi_regular_witness(space: FinSpace) -> int | None:
    for a in subsets_lex(space.full_mask):
        if not quasi_regular_mask(space, a):
            return a
    return None


def is_hereditarily_quasi_regular(space: FinSpace) -> bool:
    return hereditarily_quasi_regular_witness(space) is None


# ---------------------------------------------------------------------------
# Bounded witness search against scattered-but-not-weak maps.
# ---------------------------------------------------------------------------

def sw_witness_search(
    space: FinSpace, max_domain_size: int = 3
) -> tuple[FinSpace, FinMap] | None:
    """Search all finite domains Z up to the bound and all maps f: Z -> X for
    a scatteredly continuous map that is not weakly discontinuous. A hit
    disproves that every scatteredly continuous map into X is weakly
    discontinuous; exhausting the bound proves nothing."""
    if max_domain_size > SW_BOUND_CAP:
        raise CapExceeded(f"witness search capped at domain size {SW_BOUND_CAP}")
    nx = len(space)
    if nx == 0:
        return None
    for n in range(1, max_domain_size + 1):
        for rows in labeled_rows(n):
            z = space_from_rows(rows)
            for img in product(range(nx), repeat=n):
                f = FinMap(z, space, img)
                mc = classify_map(f)
                if mc.reaches("scatteredly_continuous") and not mc.reaches(
                    "weakly_discontinuous"
                ):
                    return z, f
    return None


# ---------------------------------------------------------------------------
# Full report.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PropertyReport:
    space: FinSpace
    verdicts: dict[str, bool]
    witnesses: dict[str, dict]
    sw: dict

    def to_obj(self) -> dict:
        return {
            "points": list(self.space.names),
            "verdicts": dict(self.verdicts),
            "witnesses": {k: v for k, v in self.witnesses.items()},
            "sw_regular": dict(self.sw),
        }

    def to_text(self) -> str:
        lines = [f"points: {format_names(self.space.names)}"]
        for prop in REPORT_PROPERTIES:
            v = self.verdicts[prop]
            if v:
                lines.append(f"{prop}: true")
            else:
                lines.append(f"{prop}: false [witness: {_witness_text(self.witnesses[prop])}]")
        lines.append(_sw_text(self.sw))
        return "\n".join(lines)


def _witness_text(w: dict) -> str:
    parts = []
    for key, value in w.items():
        label = key.replace("_", " ")
        if isinstance(value, list):
            parts.append(f"{label} {format_names(value)}")
        else:
            parts.append(f"{label} {value}")
    return ", ".join(parts)


def _sw_text(sw: dict) -> str:
    verdict = sw["verdict"]
    if verdict == "implied_true":
        return "sw_regular: implied_true (regular)"
    if verdict == "none_up_to_bound":
        return f"sw_regular: none_up_to_bound (bound {sw['bound']})"
    w = sw["witness"]
    z = w["domain"]
    body = ",".join(
        f"{p}:{format_names(z['min_nbhds'][p])}" for p in z["points"]
    )
    assign = ",".join(f"{a}->{b}" for a, b in w["map"].items())
    return (
        f"sw_regular: witnessed_false (bound {sw['bound']}) "
        f"[witness: Z = {{{body}}}, f = {{{assign}}}]"
    )


def property_verdicts(
    space: FinSpace, max_points: int = PROPERTY_CAP
) -> tuple[dict[str, bool], dict[str, dict]]:
    """All decidable verdicts plus witnesses for the false ones."""
    n = len(space)
    if n > max_points:
        raise CapExceeded(
            f"property sweeps scan 2^{n} subsets; cap is {max_points} points"
        )
    names = space.names_of
    verdicts: dict[str, bool] = {}
    witnesses: dict[str, dict] = {}

    bad_reg = next((x for x in range(n) if not regular_at_mask(space, x)), None)
    verdicts["regular"] = bad_reg is None
    if bad_reg is not None:
        witnesses["regular"] = {"point": space.names[bad_reg]}

    bad_loc = next(
        (x for x in range(n) if not is_regular_mask(space, space.nbhd[x])), None
    )
    verdicts["locally_regular"] = bad_loc is None
    if bad_loc is not None:
        witnesses["locally_regular"] = {"point": space.names[bad_loc]}

    bad_quasi = None
    for x in range(n):
        target = space.nbhd[x]
        if not any(
            closure_mask(space, space.nbhd[y]) & ~target == 0 for y in range(n)
        ):
            bad_quasi = x
            break
    verdicts["quasi_regular"] = bad_quasi is None
    if bad_quasi is not None:
        witnesses["quasi_regular"] = {"open": list(names(space.nbhd[bad_quasi]))}

    w_hqr = hereditarily_quasi_regular_witness(space)
    verdicts["hereditarily_quasi_regular"] = w_hqr is None
    if w_hqr is not None:
        witnesses["hereditarily_quasi_regular"] = {"subspace": list(names(w_hqr))}

    w_wr = weakly_regular_witness(space)
    verdicts["weakly_regular"] = w_wr is None
    if w_wr is not None:
        witnesses["weakly_regular"] = {"closed_subspace": list(names(w_wr))}

    w_twr = theta_weakly_regular_witness(space)
    verdicts["theta_weakly_regular"] = w_twr is None
    if w_twr is not None:
        witnesses["theta_weakly_regular"] = {"closed_subspace": list(names(w_twr))}

    w_wt = w_theta_regular_witness(space)
    verdicts["w_theta_regular"] = w_wt is None
    if w_wt is not None:
        witnesses["w_theta_regular"] = {
            "subspace": list(names(w_wt[0])),
            "open": list(names(w_wt[1])),
        }

    residue = scattered_residue_mask(space)
    verdicts["scattered"] = residue == 0
    if residue:
        witnesses["scattered"] = {"subspace": list(names(residue))}

    bad_t1 = t1_violation(space)
    verdicts["t1"] = bad_t1 is None
    if bad_t1 is not None:
        witnesses["t1"] = {"point": space.names[bad_t1]}

    reg_at = next((x for x in range(n) if regular_at_mask(space, x)), None)
    verdicts["nowhere_regular"] = reg_at is None
    if reg_at is not None:
        witnesses["nowhere_regular"] = {"point": space.names[reg_at]}

    return verdicts, witnesses


def check_arrows(verdicts: dict[str, bool]) -> list[str]:
    """Names of provable implications the verdicts violate (must be empty)."""
    out = []
    for premises, conclusion in ARROWS:
        if all(verdicts[p] for p in premises) and not verdicts[conclusion]:
            out.append(arrow_name(premises, conclusion))
    return out


def classify_report(
    space: FinSpace, sw_bound: int = 3, max_points: int = PROPERTY_CAP
) -> PropertyReport:
    verdicts, witnesses = property_verdicts(space, max_points)
    if verdicts["regular"]:
        sw = {"verdict": "implied_true", "bound": sw_bound, "witness": None}
    else:
        hit = sw_witness_search(space, sw_bound)
        if hit is None:
            sw = {"verdict": "none_up_to_bound", "bound": sw_bound, "witness": None}
        else:
            z, f = hit
            obj = map_to_obj(f)
            sw = {
                "verdict": "witnessed_false",
                "bound": sw_bound,
                "witness": {"domain": obj["domain"], "map": obj["map"]},
            }

    broken = check_arrows(verdicts)
    if broken:
        raise TopologyError(f"internal: report violates implications {broken}")
    if sw["verdict"] == "witnessed_false" and any(
        verdicts[p] for p in SW_SAFE_PREMISES
    ):
        raise TopologyError("internal: witness found for a space that forbids one")
    return PropertyReport(space, verdicts, witnesses, sw)
