"""Second-order effective Hamiltonians for the interference pulses and the
error scan comparing them against the exact dynamics.

When a Josephson drive is switched on with the couplings still active, the
coupled chain behaves, to second order in zeta = K / (2 * eps_j), like a
renormalized single-qubit rotation.  Two contexts appear in the verification
sequence and each defines its own perturbation ratios:

* the middle qubit driven alone: zeta12 and zeta23 are both referred to the
  middle junction energy, and the rotation rate picks up a state-dependent
  piece proportional to sigma_z1 * sigma_z3;
* the two outer qubits driven together: each zeta is referred to its own
  junction energy, and the rates depend on the middle qubit's sigma_z.

Use the ``middle_qubit`` / ``outer_pair`` builders to populate the ratios for
the intended context.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .circuit import DerivedEnergies
from .core import Operator, build_hamiltonian, pauli, propagator
from .errors import ContractViolationError, InfeasiblePulseError

_SCAN_ZETA_LIMIT = 0.5


@dataclass(frozen=True)
class PerturbationParams:
    """Perturbation ratios and junction energies for one pulse context.

    Every provided zeta must satisfy zeta < 1 or the expansion is
    meaningless; the scan additionally restricts to zeta < 0.5.  Ratios not
    used by a context default to zero.
    """

    epsilon_j: tuple
    zeta12: float = 0.0
    zeta23: float = 0.0
    zeta32: float = 0.0

    def __post_init__(self):
        eps = tuple(float(v) for v in self.epsilon_j)
        if len(eps) != 3 or min(eps) <= 0.0:
            raise ContractViolationError("epsilon_j must be 3 positive energies")
        object.__setattr__(self, "epsilon_j", eps)
        for name in ("zeta12", "zeta23", "zeta32"):
            z = float(getattr(self, name))
            if not 0.0 <= z < 1.0:
                raise ContractViolationError(f"{name} must satisfy 0 <= zeta < 1, got {z}")
            object.__setattr__(self, name, z)

    @classmethod
    def middle_qubit(cls, energies: DerivedEnergies) -> "PerturbationParams":
        """Ratios for the middle-qubit drive: both referred to eps_j2."""
        eps = tuple(e / 2.0 for e in energies.ej_max)
        return cls(eps, zeta12=energies.k12 / (2.0 * eps[1]),
                   zeta23=energies.k23 / (2.0 * eps[1]))

    @classmethod
    def outer_pair(cls, energies: DerivedEnergies) -> "PerturbationParams":
        """Ratios for the simultaneous outer drive: each referred to its own
        junction energy."""
        eps = tuple(e / 2.0 for e in energies.ej_max)
        return cls(eps, zeta12=energies.k12 / (2.0 * eps[0]),
                   zeta32=energies.k23 / (2.0 * eps[2]))


def h_eff_qubit2(params: PerturbationParams) -> Operator:
    """Effective generator of the lone middle-qubit rotation.

    -eps_j2 * [(1 + 2*zeta12^2 + 2*zeta23^2) * sigma_x2
               + 4*zeta12*zeta23 * sigma_z1 sigma_x2 sigma_z3]
    """
    eps2 = params.epsilon_j[1]
    z12, z23 = params.zeta12, params.zeta23
    sx2 = pauli("x", 2).matrix
    sz1 = pauli("z", 1).matrix
    sz3 = pauli("z", 3).matrix
    h = -eps2 * ((1.0 + 2.0 * z12**2 + 2.0 * z23**2) * sx2
                 + 4.0 * z12 * z23 * (sz1 @ sx2 @ sz3))
    return Operator(h)


def tau2(params: PerturbationParams) -> float:
    """Quarter-rotation time of the middle qubit on the aligned subspace.

    On sigma_z1 sigma_z3 = +1 the effective rate is
    2*eps_j2*(1 + 2*zeta12^2 + 2*zeta23^2 + 4*zeta12*zeta23) and the pulse
    exp(i * pi * sigma_x2 / 4) takes one eighth of its period.
    """
    eps2 = params.epsilon_j[1]
    rate = 1.0 + 2.0 * params.zeta12**2 + 2.0 * params.zeta23**2 \
        + 4.0 * params.zeta12 * params.zeta23
    return 1.0 / (8.0 * eps2 * rate)


def h_eff_qubits13(params: PerturbationParams, qubit2_z: int = +1) -> Operator:
    """Effective generator of the simultaneous outer rotations, resolved on
    a sigma_z2 eigenvalue.

    -sum_j eps_j * (1 + 2 * zeta_j2^2 * z) * sigma_xj   for j in {1, 3}
    """
    if qubit2_z not in (+1, -1):
        raise ContractViolationError(f"qubit2_z must be +1 or -1, got {qubit2_z}")
    eps1, _, eps3 = params.epsilon_j
    h = -(eps1 * (1.0 + 2.0 * params.zeta12**2 * qubit2_z) * pauli("x", 1).matrix
          + eps3 * (1.0 + 2.0 * params.zeta32**2 * qubit2_z) * pauli("x", 3).matrix)
    return Operator(h)


def _h_eff_outer_operator(params: PerturbationParams) -> Operator:
    """Operator form of the outer-pair generator with sigma_z2 kept as an
    operator instead of a number."""
    eps1, _, eps3 = params.epsilon_j
    sx1, sx3 = pauli("x", 1).matrix, pauli("x", 3).matrix
    sz2 = pauli("z", 2).matrix
    h = -(eps1 * (sx1 + 2.0 * params.zeta12**2 * (sz2 @ sx1))
          + eps3 * (sx3 + 2.0 * params.zeta32**2 * (sz2 @ sx3)))
    return Operator(h)


@dataclass(frozen=True)
class EpsilonMatching:
    """Result of balancing the two outer rotation rates.

    When the bare rates eps_j * (1 + 2*zeta_j2^2) differ, qubit 3's junction
    energy is rescaled (holding zeta32 fixed) so both qubits complete the
    quarter rotation together; ``adjusted_epsilon3`` is None when the rates
    already match.
    """

    matched: bool
    adjusted_epsilon3: float
    residual: float


def tau13(params: PerturbationParams, epsilon3_max: float = None):
    """Common quarter-rotation time of the outer pair on sigma_z2 = +1.

    Returns (tau, EpsilonMatching).  If an adjustment of eps_j3 is needed and
    ``epsilon3_max`` is given, exceeding it raises InfeasiblePulseError.
    """
    eps1, _, eps3 = params.epsilon_j
    rate1 = eps1 * (1.0 + 2.0 * params.zeta12**2)
    rate3 = eps3 * (1.0 + 2.0 * params.zeta32**2)
    residual = abs(rate1 - rate3)
    if residual <= 1e-12 * max(rate1, rate3):
        matching = EpsilonMatching(True, None, residual)
    else:
        adjusted = rate1 / (1.0 + 2.0 * params.zeta32**2)
        if epsilon3_max is not None and adjusted > epsilon3_max * (1.0 + 1e-12):
            raise InfeasiblePulseError(
                f"matching the outer rotation rates needs eps_j3 = {adjusted} GHz, "
                f"above the available {epsilon3_max} GHz"
            )
        matching = EpsilonMatching(False, adjusted, residual)
    return 1.0 / (8.0 * rate1), matching


def matched_outer_params(params: PerturbationParams) -> PerturbationParams:
    """Params with eps_j3 replaced by its rate-matched value (zeta32 fixed)."""
    _, matching = tau13(params)
    if matching.matched:
        return params
    eps = list(params.epsilon_j)
    eps[2] = matching.adjusted_epsilon3
    return replace(params, epsilon_j=tuple(eps))


def _phase_minimized_distance(a: np.ndarray, b: np.ndarray) -> float:
    """min over phi of the max-entry norm of A - e^{i phi} B.

    Deterministic coarse grid plus golden-section refinement; accurate to
    well below the norms compared here.
    """

    def dist(phi):
        return float(np.max(np.abs(a - np.exp(1j * phi) * b)))

    grid = np.linspace(-math.pi, math.pi, 721)
    values = [dist(p) for p in grid]
    k = int(np.argmin(values))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, len(grid) - 1)]
    g = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - g * (hi - lo)
    d = lo + g * (hi - lo)
    fc, fd = dist(c), dist(d)
    for _ in range(70):
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - g * (hi - lo)
            fc = dist(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + g * (hi - lo)
            fd = dist(d)
    return min(values[k], dist(0.5 * (lo + hi)))


def effective_error_scan(zeta_values, which: str = "middle"):
    """Exact-vs-effective propagator error at the pulse duration, per zeta.

    For each zeta (same value on both couplings, unit junction energies) the
    full chain Hamiltonian and the corresponding effective generator are
    propagated for the quarter-rotation time, and the max-entry norm of their
    difference, minimized over a global phase, is recorded.  Returns a tuple
    of (zeta, error) pairs.
    """
    if which not in ("middle", "outer"):
        raise ContractViolationError(f"which must be 'middle' or 'outer', got {which!r}")
    zetas = tuple(float(z) for z in zeta_values)
    for z in zetas:
        if not 0.0 <= z < _SCAN_ZETA_LIMIT:
            raise ContractViolationError(
                f"scan zeta values must satisfy 0 <= zeta < {_SCAN_ZETA_LIMIT}, got {z}"
            )
    table = []
    for z in zetas:
        if which == "middle":
            params = PerturbationParams((1.0, 1.0, 1.0), zeta12=z, zeta23=z)
            h_full = build_hamiltonian((0.0, 0.0, 0.0), (0.0, 2.0, 0.0),
                                       k12=2.0 * z, k23=2.0 * z)
            h_eff = h_eff_qubit2(params)
            t = tau2(params)
        else:
            params = PerturbationParams((1.0, 1.0, 1.0), zeta12=z, zeta32=z)
            h_full = build_hamiltonian((0.0, 0.0, 0.0), (2.0, 0.0, 2.0),
                                       k12=2.0 * z, k23=2.0 * z)
            h_eff = _h_eff_outer_operator(params)
            t, _ = tau13(params)
        u_full = propagator(h_full, t)
        u_eff = propagator(h_eff, t)
        table.append((z, _phase_minimized_distance(u_full.matrix, u_eff.matrix)))
    return tuple(table)


def fitted_loglog_slope(table) -> float:
    """Least-squares slope of log(error) against log(zeta).

    Pairs with zeta = 0 or error = 0 carry no logarithmic information and are
    skipped; at least two usable pairs are required.
    """
    pts = [(z, e) for z, e in table if z > 0.0 and e > 0.0]
    if len(pts) < 2:
        raise ContractViolationError("slope fit needs at least two nonzero (zeta, error) pairs")
    logs_z = np.log([z for z, _ in pts])
    logs_e = np.log([e for _, e in pts])
    return float(np.polyfit(logs_z, logs_e, 1)[0])
