"""The measurement model: yes-no questions with unitary disturbance.

A measurement is a projector (the question) together with a unitary (how
answering disturbs the system).  On a 'yes' outcome the state psi becomes
U P psi renormalised, with probability ||U P psi||^2 = <P psi, psi>.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import linalg
from .exceptions import (
    DimensionMismatchError,
    NotProjectorError,
    NotProjectorGramError,
    NotUnitaryError,
    ZeroBranchError,
)
from .linalg import DEFAULT_TOL, Tolerances


@dataclass(frozen=True, eq=False)
class Measurement:
    """One yes-no measurement: question projector plus disturbance unitary."""

    projector: np.ndarray
    unitary: np.ndarray
    label: str = ""

    @property
    def dim(self) -> int:
        return self.projector.shape[0]

    @property
    def transformer(self) -> np.ndarray:
        """The 'yes' branch map U P applied to unnormalised states."""
        return self.unitary @ self.projector

    @property
    def effect(self) -> np.ndarray:
        """Gram matrix of the transformer; equals the projector here."""
        m = self.transformer
        return m.conj().T @ m


@dataclass(frozen=True, eq=False)
class InstancePair:
    """Two measurements on the same space, conventionally labelled A and B."""

    a: Measurement
    b: Measurement

    @property
    def dim(self) -> int:
        return self.a.dim


class BranchResult(NamedTuple):
    state: np.ndarray
    weight: float


def validate_measurement(meas: Measurement, tol: Tolerances = DEFAULT_TOL) -> None:
    name = meas.label or "measurement"
    if meas.projector.shape != meas.unitary.shape:
        raise DimensionMismatchError(f"{name}: projector and unitary shapes differ")
    if not linalg.is_projector(meas.projector, tol):
        raise NotProjectorError(f"{name}: P is not an orthogonal projector within eq_tol")
    if not linalg.is_unitary(meas.unitary, tol):
        raise NotUnitaryError(f"{name}: U is not unitary within eq_tol")


def validate_pair(pair: InstancePair, tol: Tolerances = DEFAULT_TOL) -> None:
    if pair.a.dim != pair.b.dim:
        raise DimensionMismatchError("measurements act on different spaces")
    validate_measurement(pair.a, tol)
    validate_measurement(pair.b, tol)


def apply_transformer(meas: Measurement, state: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> BranchResult:
    """Renormalised post-'yes' state and the branch weight.

    Raises ZeroBranchError when the branch weight does not exceed rank_tol,
    treating the outcome as impossible.
    """
    psi = np.asarray(state, dtype=complex)
    v = meas.transformer @ psi
    weight = float(np.real(np.vdot(v, v)))
    if weight <= tol.rank_tol:
        raise ZeroBranchError(
            f"{meas.label or 'measurement'}: branch weight {weight:.3e} is below rank_tol"
        )
    return BranchResult(state=v / np.sqrt(weight), weight=weight)


def sequence_joint_prob(measurements: Sequence[Measurement], state: np.ndarray) -> float:
    """Probability that every measurement in the sequence answers 'yes'.

    Applies the unnormalised transformers in order; a vanishing branch just
    yields probability zero.
    """
    v = np.asarray(state, dtype=complex)
    for meas in measurements:
        v = meas.transformer @ v
    return float(np.real(np.vdot(v, v)))


def conditional_final_prob(
    prefix: Sequence[Measurement],
    final: Measurement,
    state: np.ndarray,
    tol: Tolerances = DEFAULT_TOL,
) -> float:
    """Probability of a final 'yes' given that the whole prefix answered 'yes'."""
    psi = np.asarray(state, dtype=complex)
    for meas in prefix:
        psi = apply_transformer(meas, psi, tol).state
    return float(np.real(np.vdot(final.projector @ psi, psi)))


def extract_unitary_factor(m: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Split a transformer with projector gram into unitary and projector.

    Any m whose gram matrix e = m^H m is a projector factors as m = u e with
    u unitary; u is recovered from the singular frames (u = w v^H), which
    also fixes u on the null space of e.  Returns (u, e).
    """
    a = np.asarray(m, dtype=complex)
    e = a.conj().T @ a
    if not linalg.is_projector(e, tol):
        raise NotProjectorGramError("gram matrix of the transformer is not a projector")
    w, _, v = linalg.svd_decompose(a)
    return w @ v.conj().T, e


def pair_to_json(pair: InstancePair) -> dict:
    return {
        "dim": pair.dim,
        "A": {
            "P": linalg.encode_matrix(pair.a.projector),
            "U": linalg.encode_matrix(pair.a.unitary),
        },
        "B": {
            "P": linalg.encode_matrix(pair.b.projector),
            "U": linalg.encode_matrix(pair.b.unitary),
        },
    }


def pair_from_json(data: dict) -> InstancePair:
    """Decode an instance pair; structural validation only.

    Invariant checks (projector, unitary) are the caller's job so that
    diagnostics can name the failed invariant explicitly.
    """
    try:
        dim = int(data["dim"])
        raw_a, raw_b = data["A"], data["B"]
        a = Measurement(
            projector=linalg.decode_matrix(raw_a["P"], dim),
            unitary=linalg.decode_matrix(raw_a["U"], dim),
            label="A",
        )
        b = Measurement(
            projector=linalg.decode_matrix(raw_b["P"], dim),
            unitary=linalg.decode_matrix(raw_b["U"], dim),
            label="B",
        )
    except KeyError as exc:
        raise ValueError(f"instance encoding is missing key {exc}") from exc
    except TypeError as exc:
        raise ValueError(f"malformed instance encoding: {exc}") from exc
    return InstancePair(a=a, b=b)
