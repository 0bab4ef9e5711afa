"""Internal-stability certification through the closed-loop block matrix.

A negative feedback pair (P, C) is internally stable when the 2n x 2n matrix

    [ (I+CP)^-1      -C(I+PC)^-1 ]
    [ P(I+CP)^-1     -(I+PC)^-1  ]

is proper and stable entry by entry.  Pole sets are read off only after
exact GCD cancellation, so a stable hidden cancellation can never masquerade
as instability and an unstable one can never hide.
"""

from __future__ import annotations

from dataclasses import dataclass

from .polymat import PolyMatrix, unimodular_inverse
from .polyrat import ConvergenceError, RatFunc, RootSet
from .tfm import TransferMatrix, controller_backmap
from .loops import IllPosedLoopError

VERDICT_STABLE = "internally_stable"
VERDICT_NOT = "not_internally_stable"
VERDICT_MARGINAL = "marginal"


@dataclass(frozen=True)
class EntryStability:
    """Per-entry record of the block-matrix check."""

    row: int
    col: int
    proper: bool
    poles: RootSet | None
    max_real_part: float | None
    status: str  # stable | unstable | marginal | failed
    failure: str | None = None

    def to_json(self) -> dict:
        poles = None
        if self.poles is not None:
            poles = [[r.real, r.imag] for r in self.poles.roots]
        return {
            "row": self.row,
            "col": self.col,
            "proper": self.proper,
            "poles": poles,
            "multiplicities": (list(self.poles.multiplicities)
                               if self.poles is not None else None),
            "max_real_part": self.max_real_part,
            "status": self.status,
            "failure": self.failure,
        }


@dataclass(frozen=True)
class StabilityReport:
    """Certification result; the verdict means "certified", not "suspected".

    verdict is internally_stable only when the loop is well-posed, every
    entry is proper and every pole lies strictly left of -tol.  A failed
    root extraction downgrades the verdict, never upgrades it.
    """

    well_posed: bool
    entries: tuple[EntryStability, ...]
    verdict: str
    tol: float

    @property
    def is_internally_stable(self) -> bool:
        return self.verdict == VERDICT_STABLE

    @property
    def poles_strictly_stable(self) -> bool:
        """All entry poles strictly left of -tol, ignoring properness."""
        return bool(self.entries) and all(e.status == "stable"
                                          for e in self.entries)

    def to_json(self) -> dict:
        return {
            "well_posed": self.well_posed,
            "verdict": self.verdict,
            "tol": self.tol,
            "entries": [e.to_json() for e in self.entries],
        }


def internal_stability_matrix(plant: TransferMatrix,
                              controller: TransferMatrix) -> TransferMatrix:
    """Assemble the 2n x 2n closed-loop test matrix, all entries reduced."""
    n = plant.rows
    if plant.cols != n or controller.rows != n or controller.cols != n:
        raise ValueError("plant and controller must be square of equal size")
    eye = TransferMatrix.identity(n)
    ret_in = eye + controller * plant
    ret_out = eye + plant * controller
    if ret_in.det().is_zero or ret_out.det().is_zero:
        raise IllPosedLoopError("closed loop is ill-posed (singular return matrix)")
    sens_in = ret_in.inverse()
    sens_out = ret_out.inverse()
    upper_right = -(controller * sens_out)
    lower_left = plant * sens_in
    grid = []
    for i in range(n):
        grid.append(list(sens_in.entries[i]) + list(upper_right.entries[i]))
    for i in range(n):
        grid.append(list(lower_left.entries[i]) + list((-sens_out).entries[i]))
    return TransferMatrix(grid)


def _classify_entry(i: int, j: int, f: RatFunc, tol: float) -> EntryStability:
    proper = f.is_proper
    if f.den.degree == 0:
        # No poles at all; impropriety is tracked separately and blocks the
        # RH-infinity verdict without inventing a pole status.
        return EntryStability(i, j, proper, RootSet((), (), 0.0), None, "stable")
    try:
        poles = f.poles()
    except ConvergenceError as exc:
        return EntryStability(i, j, proper, None, None, "failed", str(exc))
    worst = poles.max_real_part
    if worst > tol:
        status = "unstable"
    elif worst >= -tol:
        status = "marginal"
    else:
        status = "stable"
    return EntryStability(i, j, proper, poles, worst, status)


def check_rh_inf(matrix: TransferMatrix, tol: float = 1e-9) -> StabilityReport:
    """Entrywise properness plus strict left-half-plane poles.

    Poles with |Re| <= tol are marginal: never promoted to stable.  Entries
    whose root extraction fails are recorded as failed and block a stable
    verdict rather than silently passing.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    entries = []
    for i in range(matrix.rows):
        for j in range(matrix.cols):
            entries.append(_classify_entry(i, j, matrix.entries[i][j], tol))
    all_proper = all(e.proper for e in entries)
    statuses = {e.status for e in entries}
    if "failed" in statuses or "unstable" in statuses or not all_proper:
        verdict = VERDICT_NOT
    elif "marginal" in statuses:
        verdict = VERDICT_MARGINAL
    else:
        verdict = VERDICT_STABLE
    return StabilityReport(well_posed=all_proper, entries=tuple(entries),
                           verdict=verdict, tol=tol)


def check_internal_stability(plant: TransferMatrix, controller: TransferMatrix,
                             tol: float = 1e-9) -> StabilityReport:
    """Certify internal stability of the (plant, controller) loop.

    Well-posedness is a symbolic nonsingularity check on both return
    matrices plus properness of every block-matrix entry.
    """
    try:
        block = internal_stability_matrix(plant, controller)
    except IllPosedLoopError:
        return StabilityReport(well_posed=False, entries=(),
                               verdict=VERDICT_NOT, tol=tol)
    return check_rh_inf(block, tol)


@dataclass(frozen=True)
class DomainStabilityComparison:
    """Reports for both domains plus the one-way implication between them."""

    essential: StabilityReport
    original: StabilityReport
    implication_holds: bool

    def to_json(self) -> dict:
        return {
            "essential": self.essential.to_json(),
            "original": self.original.to_json(),
            "implication_holds": self.implication_holds,
        }


def stability_implication_harness(psm: TransferMatrix, csm: TransferMatrix,
                     u: PolyMatrix, v: PolyMatrix,
                     tol: float = 1e-9) -> DomainStabilityComparison:
    """Check both domains and the falsifiable direction between them.

    A stable diagonal-domain design guarantees the pole content of the
    original closed loop: the polynomial transformations can only add zeros,
    so every pole of the mapped block matrix stays strictly left.
    implication_holds asserts exactly that.  Properness of the original
    closure is a standing hypothesis, not a consequence (an arbitrary
    unimodular pair routinely breaks it), so it is reported in
    original.verdict but does not falsify the implication.

    The reverse direction is not asserted either: a diagonal-domain design
    that fails certification can back-map into a clean original loop when
    the failure cancels against the transformation.
    """
    essential = check_internal_stability(psm, csm, tol)
    plant = (TransferMatrix.from_polymatrix(unimodular_inverse(u)) * psm
             * TransferMatrix.from_polymatrix(unimodular_inverse(v)))
    controller = controller_backmap(csm, u, v)
    original = check_internal_stability(plant, controller, tol)
    implication = not (essential.is_internally_stable
                       and not original.poles_strictly_stable)
    return DomainStabilityComparison(essential=essential, original=original,
                                     implication_holds=implication)
