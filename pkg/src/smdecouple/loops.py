"""Closed-loop sensitivity sets and the exact domain-transformation identities.

Ten closed-loop maps are tracked for a negative feedback loop: the loop
matrix, sensitivity, complementary sensitivity, process and controller
sensitivities, plus the same five seen from the plant input.  Because the
underlying arithmetic is exact, the transformations between the original and
the diagonalized domain are verified as rational-matrix equalities, not
numerically.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .polymat import PolyMatrix, unimodular_inverse
from .tfm import TransferMatrix


class IllPosedLoopError(ValueError):
    """det(I + P*C) vanishes identically; the loop has no closure."""


@dataclass(frozen=True)
class ClosedLoopSet:
    """The ten closed-loop maps of one feedback interconnection.

    Output side: L = P*C, S = (I+L)^-1, T = L*(I+L)^-1, S_P = (I+L)^-1*P,
    S_C = C*(I+L)^-1.  Input side: L_I = C*P, S_I = (I+L_I)^-1,
    T_I = (I+L_I)^-1*L_I, S_PI = P*(I+L_I)^-1, S_CI = (I+L_I)^-1*C.
    """

    L: TransferMatrix
    S: TransferMatrix
    T: TransferMatrix
    S_P: TransferMatrix
    S_C: TransferMatrix
    L_I: TransferMatrix
    S_I: TransferMatrix
    T_I: TransferMatrix
    S_PI: TransferMatrix
    S_CI: TransferMatrix

    def as_dict(self) -> dict[str, TransferMatrix]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


#: Deterministic ordering of the map names, used in reports.
LOOP_MAP_NAMES = tuple(f.name for f in fields(ClosedLoopSet))


def gang_of_six(plant: TransferMatrix, controller: TransferMatrix) -> ClosedLoopSet:
    """All ten closed-loop maps, computed exactly from first principles."""
    n = plant.rows
    if plant.cols != n or controller.rows != n or controller.cols != n:
        raise ValueError("plant and controller must be square of equal size")
    eye = TransferMatrix.identity(n)
    loop = plant * controller
    ret = eye + loop
    if ret.det().is_zero:
        raise IllPosedLoopError("det(I + P*C) is identically zero")
    sens = ret.inverse()
    loop_in = controller * plant
    sens_in = (eye + loop_in).inverse()
    return ClosedLoopSet(
        L=loop,
        S=sens,
        T=loop * sens,
        S_P=sens * plant,
        S_C=controller * sens,
        L_I=loop_in,
        S_I=sens_in,
        T_I=sens_in * loop_in,
        S_PI=plant * sens_in,
        S_CI=sens_in * controller,
    )


def transform_to_original(ess: ClosedLoopSet, u: PolyMatrix, v: PolyMatrix,
                          plant: TransferMatrix) -> ClosedLoopSet:
    """Map a diagonal-domain closed-loop set back to the original domain.

    Output-side maps conjugate through U, input-side maps through V, and the
    two process/controller sensitivities mix the pair:

        L, S, T           ->  U^-1 (.) U
        S_P, S_PI         ->  U^-1 (.) V^-1
        S_C, S_CI         ->  V (.) U
        L_I, S_I, T_I     ->  V (.) V^-1

    The plant argument is only used for dimension validation; the maps
    themselves are fully determined by the set and the unimodular pair.
    """
    n = ess.L.rows
    if u.rows != n or v.rows != n or plant.rows != n or plant.cols != n:
        raise ValueError("dimension mismatch between loop set and transforms")
    tu = TransferMatrix.from_polymatrix(u)
    tv = TransferMatrix.from_polymatrix(v)
    tui = TransferMatrix.from_polymatrix(unimodular_inverse(u))
    tvi = TransferMatrix.from_polymatrix(unimodular_inverse(v))
    return ClosedLoopSet(
        L=tui * ess.L * tu,
        S=tui * ess.S * tu,
        T=tui * ess.T * tu,
        S_P=tui * ess.S_P * tvi,
        S_C=tv * ess.S_C * tu,
        L_I=tv * ess.L_I * tvi,
        S_I=tv * ess.S_I * tvi,
        T_I=tv * ess.T_I * tvi,
        S_PI=tui * ess.S_PI * tvi,
        S_CI=tv * ess.S_CI * tu,
    )


def published_input_process_map(ess: ClosedLoopSet, u: PolyMatrix,
                                v: PolyMatrix,
                                plant: TransferMatrix) -> TransferMatrix:
    """The S_PI transformation with an extra plant factor, kept for refutation.

    This variant circulates in print but is algebraically inconsistent with
    the neighbouring derivations; tests demonstrate that it disagrees with
    the first-principles S_PI on the benchmark, while the plant-free mapping
    in transform_to_original agrees exactly.
    """
    tui = TransferMatrix.from_polymatrix(unimodular_inverse(u))
    tvi = TransferMatrix.from_polymatrix(unimodular_inverse(v))
    return tui * plant * ess.S_PI * tvi


def verify_transform_identities(plant: TransferMatrix, csm: TransferMatrix,
                                u: PolyMatrix, v: PolyMatrix) -> dict[str, str]:
    """Check all ten identities for one instance, exactly.

    The original-domain side is rebuilt from first principles via
    gang_of_six(P, V*Csm*U); the other side maps the diagonal-domain set
    through the transformation matrices.  Each entry of the report is either
    "exact-equal" or "mismatch".
    """
    from .tfm import controller_backmap

    psm = (TransferMatrix.from_polymatrix(u) * plant
           * TransferMatrix.from_polymatrix(v))
    ess = gang_of_six(psm, csm)
    mapped = transform_to_original(ess, u, v, plant)
    direct = gang_of_six(plant, controller_backmap(csm, u, v))
    report = {}
    mapped_d = mapped.as_dict()
    direct_d = direct.as_dict()
    for name in LOOP_MAP_NAMES:
        report[name] = ("exact-equal" if mapped_d[name] == direct_d[name]
                        else "mismatch")
    return report
