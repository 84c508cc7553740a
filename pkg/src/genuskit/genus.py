"""The genus map of a quadratic field: subsets of ramified primes sent to
2-torsion classes of the narrow class group, its empirically computed
kernel and image, the rank identity rank Cl+[2] = r - 1, and the
narrow-to-wide quotient.

The kernel is computed, never assumed: the classical statement predicts a
kernel of order 2 generated by the full subset, but the actual generator
varies with d (it can be the full ramified set, the primes dividing d, or
neither), so reports classify what was found.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bqf import ClassGroup, ambiguous_form, class_group, DEFAULT_MAX_H
from .quadfield import QuadField, field_from_d, has_norm_minus_one

__all__ = [
    "GenusReport",
    "GenusSubset",
    "WideReport",
    "ambiguous_class_indices",
    "genus_map",
    "genus_map_kernel",
    "genus_report_json",
    "kernel_generator_kind",
    "verify_gauss",
    "wide_two_torsion",
]


@dataclass(frozen=True)
class GenusSubset:
    """A subset of the ramified primes, encoded as a bitmask over the
    ascending prime order."""

    field: QuadField
    mask: int

    def __post_init__(self):
        if not 0 <= self.mask < (1 << self.field.r):
            raise ValueError(f"mask {self.mask} out of range for r = {self.field.r}")

    @property
    def primes(self) -> tuple[int, ...]:
        return self.field.mask_primes(self.mask)


@dataclass(frozen=True)
class GenusReport:
    field: QuadField
    rank_two_torsion: int
    kernel_subsets: tuple[int, ...]
    image_is_two_torsion: bool
    gauss_holds: bool
    kernel_generator_kind: str


@dataclass(frozen=True)
class WideReport:
    """Narrow vs wide 2-torsion, via the quotient by the class of (sqrt d).

    ``consistent`` records the cross-check that the support class is
    principal exactly when a norm -1 unit exists; it is None for d < 0,
    where narrow and wide coincide and the check is vacuous.
    """

    narrow_rank: int
    wide_rank: int
    support_class: int
    support_is_principal: bool
    norm_minus_one: bool
    consistent: bool | None


def ambiguous_class_indices(field: QuadField, cg: ClassGroup) -> tuple[int, ...]:
    """Class of the ramified prime form for each p in R, ascending."""
    return tuple(cg.class_index(ambiguous_form(p, field.D)) for p in field.ramified)


def genus_map(field: QuadField, subset, cg: ClassGroup) -> int:
    """Class index of the product of ramified prime classes over a subset.

    The empty subset maps to the principal class. Composition runs left
    to right over ascending primes with reduction at each step; the order
    is irrelevant by commutativity but fixed for determinism.
    """
    mask = subset.mask if isinstance(subset, GenusSubset) else subset
    out = cg.identity
    for i in range(field.r):
        if mask >> i & 1:
            out = cg.mul(out, cg.class_index(ambiguous_form(field.ramified[i], field.D)))
    return out


def genus_map_kernel(field: QuadField, cg: ClassGroup) -> tuple[int, ...]:
    """All subset masks whose genus image is principal.

    Always contains the empty mask; checked to be closed under symmetric
    difference before returning.
    """
    ambig = ambiguous_class_indices(field, cg)
    images = {}
    for mask in range(1 << field.r):
        out = cg.identity
        for i in range(field.r):
            if mask >> i & 1:
                out = cg.mul(out, ambig[i])
        images[mask] = out
    kernel = tuple(m for m in range(1 << field.r) if images[m] == cg.identity)
    kset = set(kernel)
    for m1 in kernel:
        for m2 in kernel:
            if m1 ^ m2 not in kset:
                raise ArithmeticError("genus map kernel is not xor-closed (bug)")
    return kernel


def kernel_generator_kind(field: QuadField, kernel_subsets: tuple[int, ...]) -> str:
    """Classify the nontrivial kernel element: the full ramified set
    ("e"), the primes dividing d ("support_d"), or anything else."""
    nontrivial = [m for m in kernel_subsets if m]
    if len(kernel_subsets) != 2 or len(nontrivial) != 1:
        return "other"
    g = nontrivial[0]
    if g == (1 << field.r) - 1:
        return "e"
    if g == field.support_d_mask:
        return "support_d"
    return "other"


def verify_gauss(field: QuadField, *, cg: ClassGroup | None = None, max_h: int = DEFAULT_MAX_H) -> GenusReport:
    """Check rank Cl+[2] = r - 1 and the exactness of the genus map.

    rank_two_torsion comes from the invariant factors; the image is
    compared against the full 2-torsion subgroup element by element.
    """
    if cg is None:
        cg = class_group(field.D, max_h=max_h)
    rank = cg.two_torsion_rank
    kernel = genus_map_kernel(field, cg)
    ambig = ambiguous_class_indices(field, cg)
    image = set()
    for mask in range(1 << field.r):
        out = cg.identity
        for i in range(field.r):
            if mask >> i & 1:
                out = cg.mul(out, ambig[i])
        image.add(out)
    two_torsion = set(cg.two_torsion())
    return GenusReport(
        field=field,
        rank_two_torsion=rank,
        kernel_subsets=kernel,
        image_is_two_torsion=image == two_torsion,
        gauss_holds=rank == field.r - 1,
        kernel_generator_kind=kernel_generator_kind(field, kernel),
    )


def wide_two_torsion(field: QuadField, cg: ClassGroup | None = None) -> WideReport:
    """Rank of the wide class group's 2-torsion, as a quotient of the
    narrow group by the class of the ideal (sqrt d).

    For d < 0 the narrow and wide groups coincide and the narrow rank is
    returned unchanged. For d > 0 the quotient is by the genus image of
    the primes dividing d; 2-torsion of the quotient is counted directly.
    """
    if cg is None:
        cg = class_group(field.D)
    narrow = cg.two_torsion_rank
    c = genus_map(field, field.support_d_mask, cg)
    principal = c == cg.identity
    if not field.is_real:
        return WideReport(
            narrow_rank=narrow,
            wide_rank=narrow,
            support_class=c,
            support_is_principal=principal,
            norm_minus_one=False,
            consistent=None,
        )
    nmo = has_norm_minus_one(field)
    if principal:
        wide = narrow
    else:
        killed = sum(1 for x in range(cg.h_plus) if cg.table[x][x] in (cg.identity, c))
        wide = (killed // 2).bit_length() - 1
        if 1 << wide != killed // 2:
            raise ArithmeticError("wide 2-torsion count is not a power of 2 (bug)")
    return WideReport(
        narrow_rank=narrow,
        wide_rank=wide,
        support_class=c,
        support_is_principal=principal,
        norm_minus_one=nmo,
        consistent=principal == nmo,
    )


def genus_report_json(field: QuadField, report: GenusReport, wide: WideReport) -> dict:
    """Flat JSON record for one field; superset of the report fields so
    that scan checks can be re-evaluated from cached records alone."""
    return {
        "d": field.d,
        "D": field.D,
        "ramified": list(field.ramified),
        "r": field.r,
        "is_real": field.is_real,
        "rank2": report.rank_two_torsion,
        "kernel_masks": list(report.kernel_subsets),
        "kernel_generator_kind": report.kernel_generator_kind,
        "gauss_holds": report.gauss_holds,
        "image_is_two_torsion": report.image_is_two_torsion,
        "wide_rank": wide.wide_rank,
        "support_class_principal": wide.support_is_principal,
        "norm_minus_one": wide.norm_minus_one,
    }


def report_for_d(d: int, *, max_h: int = DEFAULT_MAX_H) -> tuple[QuadField, ClassGroup, GenusReport, WideReport]:
    """Convenience bundle used by the CLI and the scan harness."""
    field = field_from_d(d)
    cg = class_group(field.D, max_h=max_h)
    report = verify_gauss(field, cg=cg)
    wide = wide_two_torsion(field, cg)
    return field, cg, report, wide
