"""Sweeps over enumerated spaces and maps.

Three entry points: find_space scans for the least space satisfying a
property predicate, verify_diagram checks every provable implication,
sw-witness exclusion, and transfer statement against all labeled spaces
up to a size bound, and check_composition_laws exercises the ladder
composition table either exhaustively or on randomized triples.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterator

from .generate import (
    HOMEO_CAP,
    LABELED_CAP,
    homeo_rows,
    labeled_rows,
    random_space,
    sharded_labeled_rows,
    space_from_rows,
)
from .maps import FinMap, MapClass, classify_map, compose, map_to_obj
from .parallel import run_tasks
from .regularity import (
    ARROWS,
    DECIDABLE_PROPERTIES,
    REPORT_PROPERTIES,
    SW_SAFE_PREMISES,
    check_arrows,
    property_verdicts,
    sw_witness_search,
)
from .space import CapExceeded, FinSpace, TopologyError, space_to_obj

# ---------------------------------------------------------------------------
# Property predicates.
# ---------------------------------------------------------------------------


class ParseError(TopologyError):
    """Malformed property predicate."""


def _tokens(text: str) -> list[str]:
    out: list[str] = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif text.startswith("&&", i):
            out.append("&&")
            i += 2
        elif text.startswith("||", i):
            out.append("||")
            i += 2
        elif c in "!()":
            out.append(c)
            i += 1
        elif c.isalpha() or c == "_":
            j = i + 1
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(text[i:j])
            i = j
        else:
            raise ParseError(f"unexpected character {c!r} at position {i}")
    return out


def parse_predicate(text: str) -> tuple:
    """Parse `! && || ( )` over property names into a nested-tuple AST.

    Nodes are ("prop", name), ("not", x), ("and", x, y), ("or", x, y);
    ! binds tightest, then &&, then ||.
    """
    toks = _tokens(text)
    if not toks:
        raise ParseError("empty predicate")
    pos = 0

    def take(expected: str | None = None) -> str:
        nonlocal pos
        if pos >= len(toks):
            raise ParseError("unexpected end of predicate")
        t = toks[pos]
        if expected is not None and t != expected:
            raise ParseError(f"expected {expected!r}, got {t!r}")
        pos += 1
        return t

    def parse_or() -> tuple:
        node = parse_and()
        while pos < len(toks) and toks[pos] == "||":
            take()
            node = ("or", node, parse_and())
        return node

    def parse_and() -> tuple:
        node = parse_unary()
        while pos < len(toks) and toks[pos] == "&&":
            take()
            node = ("and", node, parse_unary())
        return node

    def parse_unary() -> tuple:
        t = take()
        if t == "!":
            return ("not", parse_unary())
        if t == "(":
            node = parse_or()
            take(")")
            return node
        if t in REPORT_PROPERTIES:
            return ("prop", t)
        raise ParseError(
            f"unknown property {t!r}; choose from " + ", ".join(REPORT_PROPERTIES)
        )

    node = parse_or()
    if pos != len(toks):
        raise ParseError(f"trailing input at token {toks[pos]!r}")
    return node


def eval_predicate(node: tuple, verdicts: dict[str, bool]) -> bool:
    op = node[0]
    if op == "prop":
        return verdicts[node[1]]
    if op == "not":
        return not eval_predicate(node[1], verdicts)
    if op == "and":
        return eval_predicate(node[1], verdicts) and eval_predicate(node[2], verdicts)
    return eval_predicate(node[1], verdicts) or eval_predicate(node[2], verdicts)


def find_space(
    predicate: str | tuple, n_max: int = 5, homeo_cap: int = HOMEO_CAP
) -> FinSpace | None:
    """Least space satisfying the predicate, or None.

    Scans one representative per homeomorphism class, smallest point count
    first, canonical order within a count, so the answer is deterministic.
    """
    node = parse_predicate(predicate) if isinstance(predicate, str) else predicate
    if n_max > homeo_cap:
        raise CapExceeded(f"search capped at {homeo_cap} points")
    for n in range(1, n_max + 1):
        for rows in homeo_rows(n):
            space = space_from_rows(rows)
            verdicts, _ = property_verdicts(space)
            if eval_predicate(node, verdicts):
                return space
    return None


# ---------------------------------------------------------------------------
# Diagram verification.
# ---------------------------------------------------------------------------


@dataclass
class DiagramReport:
    n_max: int
    sw_bound: int
    transfer_max: int
    counts: dict[int, int]
    arrow_violations: list[dict]
    sw_spaces_checked: int
    sw_violations: list[dict]
    matrix: dict[str, dict]
    transfer_scanned: int
    transfer_qualifying: int
    wtheta_transfer_violations: list[dict]
    sw_transfer_checked: int
    sw_transfer_violations: list[dict]

    @property
    def ok(self) -> bool:
        return not (
            self.arrow_violations
            or self.sw_violations
            or self.wtheta_transfer_violations
            or self.sw_transfer_violations
        )

    @property
    def collapsed_pairs(self) -> list[tuple[str, str]]:
        """Unordered property pairs that agree on every space checked."""
        out = []
        for i, p in enumerate(DECIDABLE_PROPERTIES):
            for q in DECIDABLE_PROPERTIES[i + 1 :]:
                if self.matrix[f"{p} => {q}"]["holds"] and self.matrix[f"{q} => {p}"]["holds"]:
                    out.append((p, q))
        return out

    @property
    def separation_count(self) -> int:
        return sum(not entry["holds"] for entry in self.matrix.values())

    def to_obj(self) -> dict:
        return {
            "n_max": self.n_max,
            "sw_bound": self.sw_bound,
            "transfer_max": self.transfer_max,
            "counts": {str(n): c for n, c in self.counts.items()},
            "arrow_violations": self.arrow_violations,
            "sw_spaces_checked": self.sw_spaces_checked,
            "sw_violations": self.sw_violations,
            "matrix": self.matrix,
            "collapsed_pairs": [list(p) for p in self.collapsed_pairs],
            "transfer_scanned": self.transfer_scanned,
            "transfer_qualifying": self.transfer_qualifying,
            "wtheta_transfer_violations": self.wtheta_transfer_violations,
            "sw_transfer_checked": self.sw_transfer_checked,
            "sw_transfer_violations": self.sw_transfer_violations,
            "verdict": "PASS" if self.ok else "FAIL",
        }

    def to_text(self) -> str:
        lines = [
            f"labeled spaces: {sum(self.counts.values())} (n = 1..{self.n_max})",
            f"arrow violations: {len(self.arrow_violations)}",
            f"sw searches (bound {self.sw_bound}): {self.sw_spaces_checked} spaces, "
            f"witnesses: {len(self.sw_violations)}",
            f"separations: {self.separation_count} of {len(self.matrix)} ordered pairs "
            "fail on some space",
        ]
        pairs = self.collapsed_pairs
        if pairs:
            lines.append("collapsed pairs:")
            lines.extend(f"  {p} == {q}" for p, q in pairs)
        else:
            lines.append("collapsed pairs: none")
        lines.append(
            f"transfer (n <= {self.transfer_max}): {self.transfer_scanned} bijections, "
            f"{self.transfer_qualifying} qualifying"
        )
        lines.append(f"w-theta transfer violations: {len(self.wtheta_transfer_violations)}")
        lines.append(
            f"sw transfer checks: {self.sw_transfer_checked}, "
            f"violations: {len(self.sw_transfer_violations)}"
        )
        lines.append(f"verdict: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines)


def _diagram_task(args: tuple[tuple[int, ...], int]) -> tuple:
    rows, sw_bound = args
    space = space_from_rows(rows)
    verdicts, _ = property_verdicts(space)
    bad_arrows = check_arrows(verdicts)
    sw_checked = any(verdicts[p] for p in SW_SAFE_PREMISES)
    sw_obj = None
    if sw_checked:
        found = sw_witness_search(space, sw_bound)
        if found is not None:
            sw_obj = map_to_obj(found[1])
    vbits = tuple(verdicts[p] for p in DECIDABLE_PROPERTIES)
    return rows, vbits, bad_arrows, sw_checked, sw_obj


def verify_diagram(
    n_max: int = 4,
    sw_bound: int = 3,
    transfer_max: int = 3,
    workers: int = 1,
) -> DiagramReport:
    """Check the implication diagram against every labeled space with at most
    n_max points.

    Three layers: provable implications must never be violated, spaces
    satisfying an sw-safe premise must admit no sw-witness at the bound, and
    every qualifying bijection (theta-weakly discontinuous with weakly
    discontinuous inverse) must transfer w-theta regularity backwards and
    sw-witnesses forwards. The full collapse/separation matrix over ordered
    property pairs is recorded with least counterexamples as a side product.
    """
    if n_max > LABELED_CAP:
        raise CapExceeded(f"diagram verification capped at {LABELED_CAP} points")
    tn = min(n_max, transfer_max)
    matrix = {
        f"{p} => {q}": {"holds": True, "counterexample": None}
        for p in DECIDABLE_PROPERTIES
        for q in DECIDABLE_PROPERTIES
        if p != q
    }
    counts: dict[int, int] = {}
    arrow_violations: list[dict] = []
    sw_spaces = 0
    sw_violations: list[dict] = []
    verdict_memo: dict[tuple[int, ...], dict[str, bool]] = {}

    for n in range(1, n_max + 1):
        rows_list = list(sharded_labeled_rows(n, workers))
        counts[n] = len(rows_list)
        tasks = [(rows, sw_bound) for rows in rows_list]
        for rows, vbits, bad_arrows, sw_checked, sw_obj in run_tasks(
            _diagram_task, tasks, workers
        ):
            verdicts = dict(zip(DECIDABLE_PROPERTIES, vbits))
            if n <= tn:
                verdict_memo[rows] = verdicts
            if bad_arrows:
                arrow_violations.append(
                    {"space": space_to_obj(space_from_rows(rows)), "arrows": bad_arrows}
                )
            if sw_checked:
                sw_spaces += 1
                if sw_obj is not None:
                    sw_violations.append(
                        {"space": space_to_obj(space_from_rows(rows)), "witness": sw_obj}
                    )
            for p in DECIDABLE_PROPERTIES:
                if not verdicts[p]:
                    continue
                for q in DECIDABLE_PROPERTIES:
                    if q == p or verdicts[q]:
                        continue
                    entry = matrix[f"{p} => {q}"]
                    if entry["holds"]:
                        entry["holds"] = False
                        entry["counterexample"] = space_to_obj(space_from_rows(rows))

    scanned = 0
    qualifying = 0
    wtheta_violations: list[dict] = []
    sw_checks = 0
    sw_transfer_violations: list[dict] = []
    sw_memo: dict[tuple[int, ...], tuple[FinSpace, FinMap] | None] = {}

    for n in range(1, tn + 1):
        spaces = [space_from_rows(rows) for rows in labeled_rows(n)]
        perms = [tuple(p) for p in permutations(range(n))]
        for x in spaces:
            vx = verdict_memo[x.nbhd]
            for y in spaces:
                vy = verdict_memo[y.nbhd]
                for perm in perms:
                    scanned += 1
                    h = FinMap(x, y, perm)
                    if not classify_map(h).reaches("theta_weakly_discontinuous"):
                        continue
                    if not classify_map(h.inverse()).reaches("weakly_discontinuous"):
                        continue
                    qualifying += 1
                    if vy["w_theta_regular"] and not vx["w_theta_regular"]:
                        wtheta_violations.append(
                            {
                                "kind": "w_theta_regular",
                                "h": map_to_obj(h),
                            }
                        )
                    if x.nbhd not in sw_memo:
                        sw_memo[x.nbhd] = sw_witness_search(x, sw_bound)
                    found = sw_memo[x.nbhd]
                    if found is not None:
                        f = found[1]
                        sw_checks += 1
                        mcc = classify_map(compose(h, f))
                        if not mcc.reaches("scatteredly_continuous") or mcc.reaches(
                            "weakly_discontinuous"
                        ):
                            sw_transfer_violations.append(
                                {
                                    "kind": "sw_witness",
                                    "h": map_to_obj(h),
                                    "f": map_to_obj(f),
                                    "composite_tier": mcc.tier,
                                }
                            )

    return DiagramReport(
        n_max=n_max,
        sw_bound=sw_bound,
        transfer_max=tn,
        counts=counts,
        arrow_violations=arrow_violations,
        sw_spaces_checked=sw_spaces,
        sw_violations=sw_violations,
        matrix=matrix,
        transfer_scanned=scanned,
        transfer_qualifying=qualifying,
        wtheta_transfer_violations=wtheta_violations,
        sw_transfer_checked=sw_checks,
        sw_transfer_violations=sw_transfer_violations,
    )


# ---------------------------------------------------------------------------
# Composition laws.
# ---------------------------------------------------------------------------

# (name, tier required of f, tier required of g, tier asserted of g o f,
#  asserted). The last row is known to fail in general and is reported as
# data rather than checked.
LAWS: tuple[tuple[str, str, str, str, bool], ...] = (
    (
        "weak after weak => weak",
        "weakly_discontinuous",
        "weakly_discontinuous",
        "weakly_discontinuous",
        True,
    ),
    (
        "theta after theta => theta",
        "theta_weakly_discontinuous",
        "theta_weakly_discontinuous",
        "theta_weakly_discontinuous",
        True,
    ),
    (
        "scattered after weak => scattered",
        "weakly_discontinuous",
        "scatteredly_continuous",
        "scatteredly_continuous",
        True,
    ),
    (
        "theta after scattered => scattered",
        "scatteredly_continuous",
        "theta_weakly_discontinuous",
        "scatteredly_continuous",
        True,
    ),
    (
        "scattered after scattered => scattered",
        "scatteredly_continuous",
        "scatteredly_continuous",
        "scatteredly_continuous",
        False,
    ),
)

COMPOSITION_SIZE_CAP = 8


@dataclass
class LawResult:
    name: str
    asserted: bool
    checked: int = 0
    violations: int = 0
    counterexample: dict | None = None

    def to_obj(self) -> dict:
        return {
            "name": self.name,
            "asserted": self.asserted,
            "checked": self.checked,
            "violations": self.violations,
            "counterexample": self.counterexample,
        }


@dataclass
class CompositionReport:
    mode: str
    sizes: tuple[int, int, int]
    samples: int | None
    seed: int | None
    triples: int
    laws: list[LawResult]

    @property
    def ok(self) -> bool:
        return all(lr.violations == 0 for lr in self.laws if lr.asserted)

    def to_obj(self) -> dict:
        return {
            "mode": self.mode,
            "sizes": list(self.sizes),
            "samples": self.samples,
            "seed": self.seed,
            "triples": self.triples,
            "laws": [lr.to_obj() for lr in self.laws],
            "verdict": "PASS" if self.ok else "FAIL",
        }

    def to_text(self) -> str:
        sizes = ",".join(str(s) for s in self.sizes)
        if self.mode == "exhaustive":
            head = f"composition laws (exhaustive, sizes <= {sizes}): {self.triples} triples"
        else:
            head = (
                f"composition laws (randomized, sizes <= {sizes}, "
                f"samples {self.samples}, seed {self.seed}): {self.triples} triples"
            )
        lines = [head]
        for lr in self.laws:
            tag = "" if lr.asserted else " [not asserted]"
            lines.append(f"{lr.name}{tag}: checked {lr.checked}, violations {lr.violations}")
        lines.append(f"verdict: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines)


def _apply_laws(
    f: FinMap,
    g: FinMap,
    mcf: MapClass,
    mcg: MapClass,
    mcc: MapClass,
    results: list[LawResult],
) -> None:
    for lr, law in zip(results, LAWS):
        _, f_tier, g_tier, out_tier, _ = law
        if not (mcf.reaches(f_tier) and mcg.reaches(g_tier)):
            continue
        lr.checked += 1
        if not mcc.reaches(out_tier):
            lr.violations += 1
            if lr.counterexample is None:
                lr.counterexample = {
                    "f": map_to_obj(f),
                    "g": map_to_obj(g),
                    "f_tier": mcf.tier,
                    "g_tier": mcg.tier,
                    "composite_tier": mcc.tier,
                }


def _all_maps(domain: FinSpace, codomain: FinSpace) -> Iterator[FinMap]:
    for img in product(range(len(codomain)), repeat=len(domain)):
        yield FinMap(domain, codomain, img)


def check_composition_laws(
    sizes: tuple[int, int, int] = (2, 2, 2),
    samples: int = 10000,
    seed: int = 0,
) -> CompositionReport:
    """Exercise the composition table on triples X --f--> Y --g--> Z.

    With every size bound at most 2 the sweep is exhaustive over all labeled
    spaces and all maps up to the bounds; otherwise `samples` random triples
    are drawn with sizes between min(3, bound) and bound from the given seed.
    """
    if max(sizes) > COMPOSITION_SIZE_CAP:
        raise CapExceeded(f"composition sizes capped at {COMPOSITION_SIZE_CAP} points")
    results = [LawResult(name, asserted) for name, _, _, _, asserted in LAWS]
    triples = 0

    if max(sizes) <= 2:
        sx, sy, sz = sizes
        xs = [s for n in range(1, sx + 1) for s in map(space_from_rows, labeled_rows(n))]
        ys = [s for n in range(1, sy + 1) for s in map(space_from_rows, labeled_rows(n))]
        zs = [s for n in range(1, sz + 1) for s in map(space_from_rows, labeled_rows(n))]
        comp_memo: dict[tuple, MapClass] = {}
        for y in ys:
            fs = [
                (f, classify_map(f)) for x in xs for f in _all_maps(x, y)
            ]
            for z in zs:
                for g in _all_maps(y, z):
                    mcg = classify_map(g)
                    for f, mcf in fs:
                        triples += 1
                        c = compose(g, f)
                        key = (c.domain.nbhd, c.codomain.nbhd, c.img)
                        mcc = comp_memo.get(key)
                        if mcc is None:
                            mcc = comp_memo[key] = classify_map(c)
                        _apply_laws(f, g, mcf, mcg, mcc, results)
        return CompositionReport(
            mode="exhaustive",
            sizes=sizes,
            samples=None,
            seed=None,
            triples=triples,
            laws=results,
        )

    rng = random.Random(seed)
    lows = tuple(min(3, s) for s in sizes)
    for _ in range(samples):
        nx = rng.randint(lows[0], sizes[0])
        ny = rng.randint(lows[1], sizes[1])
        nz = rng.randint(lows[2], sizes[2])
        x = random_space(nx, rng)
        y = random_space(ny, rng)
        z = random_space(nz, rng)
        f = FinMap(x, y, tuple(rng.randrange(ny) for _ in range(nx)))
        g = FinMap(y, z, tuple(rng.randrange(nz) for _ in range(ny)))
        triples += 1
        _apply_laws(
            f, g, classify_map(f), classify_map(g), classify_map(compose(g, f)), results
        )
    return CompositionReport(
        mode="randomized",
        sizes=sizes,
        samples=samples,
        seed=seed,
        triples=triples,
        laws=results,
    )
