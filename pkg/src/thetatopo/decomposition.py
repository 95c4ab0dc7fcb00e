"""Kernel-iteration decompositions and their weak-homeomorphism witnesses.

Peeling the (theta-)open regular kernel off a space repeatedly either
exhausts it or stalls on a residue with an empty kernel. Exhaustion is
equivalent to (theta-)weak regularity, and the layers assemble into a
regular topological sum onto which the identity is a (theta-)weak
homeomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass

from .maps import FinMap, classify_map
from .regularity import PROPERTY_CAP, open_kernel_mask, theta_kernel_mask
from .space import (
    CapExceeded,
    FinSpace,
    TopologyError,
    format_names,
    space_to_obj,
    subspace_on_mask,
    topological_sum,
)


class ResidueNonEmpty(TopologyError):
    """The decomposition stalled, so no witness onto a regular sum exists."""


@dataclass(frozen=True)
class Decomposition:
    space: FinSpace
    mode: str  # "theta" or "open"
    layers: tuple[int, ...]
    residue: int

    @property
    def exhausted(self) -> bool:
        return self.residue == 0

    @property
    def property_name(self) -> str:
        return "theta_weakly_regular" if self.mode == "theta" else "weakly_regular"

    def to_obj(self) -> dict:
        return {
            "mode": self.mode,
            "layers": [list(self.space.names_of(m)) for m in self.layers],
            "residue": list(self.space.names_of(self.residue)),
            self.property_name: self.exhausted,
        }

    def to_text(self) -> str:
        lines = [f"mode: {self.mode}"]
        for i, m in enumerate(self.layers, start=1):
            lines.append(f"layer {i}: {format_names(self.space.names_of(m))}")
        lines.append(f"residue: {format_names(self.space.names_of(self.residue))}")
        lines.append(f"{self.property_name}: {'true' if self.exhausted else 'false'}")
        return "\n".join(lines)


def _decompose(space: FinSpace, mode: str, max_points: int) -> Decomposition:
    if len(space) > max_points:
        raise CapExceeded(
            f"kernel scans are exponential; cap is {max_points} points"
        )
    kernel = theta_kernel_mask if mode == "theta" else open_kernel_mask
    layers: list[int] = []
    cur = space.full_mask
    while cur:
        k = kernel(space, cur)
        if k == 0:
            break
        layers.append(k)
        cur &= ~k
    return Decomposition(space, mode, tuple(layers), cur)


def theta_decomposition(space: FinSpace, max_points: int = PROPERTY_CAP) -> Decomposition:
    """Iterate residue -> residue minus its theta-open regular kernel.

    The residue is empty iff the space is theta-weakly regular; each stage's
    residue is closed in the previous one, so at most n steps happen.
    """
    return _decompose(space, "theta", max_points)


def open_decomposition(space: FinSpace, max_points: int = PROPERTY_CAP) -> Decomposition:
    """Same iteration with open regular kernels; exhaustion is equivalent to
    weak regularity."""
    return _decompose(space, "open", max_points)


def weak_homeo_witness(
    space: FinSpace, theta: bool = False, max_points: int = PROPERTY_CAP
) -> tuple[FinSpace, FinMap]:
    """Build the regular sum of the decomposition layers and the identity-on-
    points map onto it.

    Returns (Y, back) where Y is the topological sum of the layer subspaces
    and back: X -> Y sends x to its copy in its layer. The forward identity
    Y -> X is continuous and back is (theta-)weakly discontinuous; both facts
    are re-checked here before returning.
    """
    dec = _decompose(space, "theta" if theta else "open", max_points)
    if not dec.exhausted:
        raise ResidueNonEmpty(
            f"{dec.property_name} fails: kernel iteration stalled on "
            f"{format_names(space.names_of(dec.residue))}"
        )
    pieces = [subspace_on_mask(space, m) for m in dec.layers]
    y = topological_sum(pieces)
    layer_of = {}
    for i, m in enumerate(dec.layers):
        for name in space.names_of(m):
            layer_of[name] = i
    img = tuple(y.index(f"{layer_of[a]}.{a}") for a in space.names)
    back = FinMap(space, y, img)

    tier = "theta_weakly_discontinuous" if theta else "weakly_discontinuous"
    if len(space) <= 16:
        if not classify_map(back.inverse()).reaches("continuous"):
            raise TopologyError("internal: sum-to-space identity is not continuous")
        if not classify_map(back).reaches(tier):
            raise TopologyError(f"internal: witness map does not reach {tier}")
    return y, back
