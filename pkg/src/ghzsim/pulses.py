"""Pulse schedules: timed control segments and the three-step entangling
sequence.

A schedule is a list of piecewise-constant segments.  Within a segment the
charging and Josephson energies are frozen and the state evolves under the
full 8-dimensional Hamiltonian; the coupling energies are fixed wiring
properties and stay on for the whole run.

The entangling sequence follows the standard conditional-rotation recipe for
a chain of three charge qubits:

1. a half/three-quarter rotation of the middle qubit splits |000> into a
   superposition of |000> and |010>;
2. a conditional flip of one outer qubit, timed so the branch with the middle
   qubit excited performs an odd half-rotation while the other branch closes
   an integer number of full rotations;
3. the same conditional flip on the remaining outer qubit.

Each conditional flip imprints a phase +i on the flipped branch, and the
charging energy of the middle qubit is biased during the first flip to cancel
the spectator coupling phase between the two branches; both details are
handled internally so only the requested target sign matters to callers.
"""

import cmath
import math
from dataclasses import dataclass

from .circuit import ControlSettings, DerivedEnergies, derive_energies
from .core import StateVector, build_hamiltonian, evolve, fidelity, ghz_state
from .errors import ContractViolationError, InfeasiblePulseError

_RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class PulseSegment:
    """One piecewise-constant slice of a schedule.

    Energies are given either directly (``e_c``/``e_j`` in GHz, both
    required) or through a ``ControlSettings`` to be resolved against a
    capacitance network at run time; exactly one of the two styles must be
    used.  ``duration`` is in ns.
    """

    duration: float
    e_c: tuple = None
    e_j: tuple = None
    settings: ControlSettings = None
    label: str = ""

    def __post_init__(self):
        d = float(self.duration)
        if not math.isfinite(d) or d < 0.0:
            raise ContractViolationError(f"segment duration must be finite and >= 0, got {d}")
        object.__setattr__(self, "duration", d)
        direct = self.e_c is not None or self.e_j is not None
        if self.settings is not None and direct:
            raise ContractViolationError(
                "segment takes either explicit energies or settings, not both"
            )
        if self.settings is None:
            if self.e_c is None or self.e_j is None:
                raise ContractViolationError(
                    "segment without settings needs both e_c and e_j"
                )
            e_c = tuple(float(v) for v in self.e_c)
            e_j = tuple(float(v) for v in self.e_j)
            if len(e_c) != 3 or len(e_j) != 3:
                raise ContractViolationError("e_c and e_j must each have 3 entries")
            object.__setattr__(self, "e_c", e_c)
            object.__setattr__(self, "e_j", e_j)


@dataclass(frozen=True)
class Schedule:
    """Ordered pulse segments plus the coupling energies held for the run.

    A coupling left as None is inherited from the baseline energies passed
    to run_schedule.
    """

    segments: tuple
    k12: float = None
    k23: float = None
    k13: float = None

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise ContractViolationError("schedule needs at least one segment")
        if not all(isinstance(s, PulseSegment) for s in segs):
            raise ContractViolationError("schedule segments must be PulseSegment instances")
        object.__setattr__(self, "segments", segs)

    def total_duration(self) -> float:
        return sum(s.duration for s in self.segments)


@dataclass(frozen=True)
class FlipSolution:
    """Closed-form conditional-flip timing.

    ``e_j`` is the Josephson drive (GHz) and ``t`` the duration (ns); ``m``
    counts extra half-rotations of the driven branch and ``n`` full rotations
    of the idle branch.  ``residuals`` holds |sin(pi*e_j*t) - 1| and
    |cos(2*pi*gamma*t) - 1|; both must vanish to 1e-9.
    """

    e_j: float
    t: float
    m: int
    n: int
    residuals: tuple

    def __post_init__(self):
        r = tuple(float(v) for v in self.residuals)
        if len(r) != 2:
            raise ContractViolationError("residuals must have exactly 2 entries")
        if max(r) >= _RESIDUAL_TOL:
            raise ContractViolationError(f"flip residuals {r} exceed {_RESIDUAL_TOL}")
        object.__setattr__(self, "residuals", r)


@dataclass(frozen=True)
class PreparationReport:
    """Diagnostics of one entangling run.

    ``intermediate_fidelities`` are overlaps with the ideal states after the
    superposition step and after the first flip; ``achieved_phase`` is the
    relative phase arg(amp_111) - arg(amp_000) of the final state, wrapped to
    (-pi, pi].
    """

    sign: str
    fidelity: float
    intermediate_fidelities: tuple
    achieved_phase: float
    superposition_time: float
    flip_solutions: tuple
    total_duration: float
    k13_included: bool


def idle_segment(duration: float, label: str = "idle") -> PulseSegment:
    """Segment with every controllable energy at zero: only couplings act."""
    return PulseSegment(duration, e_c=(0.0, 0.0, 0.0), e_j=(0.0, 0.0, 0.0), label=label)


def run_schedule(energies_base: DerivedEnergies, schedule: Schedule, initial: StateVector,
                 network=None):
    """Evolve a state through every segment of a schedule.

    Segments carrying ControlSettings are resolved against ``network``;
    passing such a segment without a network is an error.  Couplings default
    to the baseline energies.  Returns (final state, list of states after
    each segment).
    """
    k12 = energies_base.k12 if schedule.k12 is None else float(schedule.k12)
    k23 = energies_base.k23 if schedule.k23 is None else float(schedule.k23)
    k13 = energies_base.k13 if schedule.k13 is None else float(schedule.k13)
    state = initial
    trajectory = []
    for seg in schedule.segments:
        if seg.settings is not None:
            if network is None:
                raise ContractViolationError(
                    f"segment {seg.label!r} carries settings but no network was given"
                )
            seg_energies = derive_energies(network, seg.settings)
            e_c, e_j = seg_energies.e_c, seg_energies.e_j
        else:
            e_c, e_j = seg.e_c, seg.e_j
        h = build_hamiltonian(e_c, e_j, k12, k23, k13)
        state = evolve(h, seg.duration, state)
        trajectory.append(state)
    return state, trajectory


def solve_superposition_pulse(e_j2: float, sign: str = "+") -> float:
    """Duration of the middle-qubit rotation opening the superposition.

    The rotation angle is b = pi * e_j2 * t; sign '+' selects b = pi/4
    (t = 0.25 / e_j2) and '-' selects b = 3*pi/4 (t = 0.75 / e_j2), the two
    branches with |sin b| = 1/sqrt(2).
    """
    if e_j2 <= 0.0:
        raise ContractViolationError(f"superposition pulse requires e_j2 > 0, got {e_j2}")
    if sign == "+" or sign in (1, +1):
        return 0.25 / e_j2
    if sign == "-" or sign == -1:
        return 0.75 / e_j2
    raise ContractViolationError(f"sign must be '+' or '-', got {sign!r}")


def solve_conditional_flip(k: float, e_j_max: float, max_m: int = 16,
                           max_n: int = 64) -> FlipSolution:
    """Timing of a conditional outer-qubit flip against coupling ``k``.

    Solves sin(pi * e_j * t) = 1 together with cos(2*pi * gamma * t) = 1,
    gamma = sqrt((2k)^2 + (e_j / 2)^2): the driven branch advances by
    pi/2 + 2*pi*m while the idle branch closes n full rotations.  With
    a = pi/2 + 2*pi*m this gives e_j = 4k / sqrt((2*pi*n / a)^2 - 1) and
    t = a / (pi * e_j); the search returns the lexicographically smallest
    (m, n) whose drive fits under ``e_j_max``.
    """
    if k <= 0.0:
        raise ContractViolationError(f"conditional flip requires k > 0, got {k}")
    if e_j_max <= 0.0:
        raise ContractViolationError(f"conditional flip requires e_j_max > 0, got {e_j_max}")
    for m in range(max_m + 1):
        a = 0.5 * math.pi + 2.0 * math.pi * m
        for n in range(m + 1, max_n + 1):
            ratio_sq = (2.0 * math.pi * n / a) ** 2 - 1.0
            e_j = 4.0 * k / math.sqrt(ratio_sq)
            if e_j > e_j_max * (1.0 + 1e-12):
                continue
            t = a / (math.pi * e_j)
            gamma = math.sqrt((2.0 * k) ** 2 + (0.5 * e_j) ** 2)
            residuals = (
                abs(math.sin(math.pi * e_j * t) - 1.0),
                abs(math.cos(2.0 * math.pi * gamma * t) - 1.0),
            )
            return FlipSolution(e_j, t, m, n, residuals)
    raise InfeasiblePulseError(
        f"no conditional flip with e_j <= {e_j_max} GHz found for k = {k} GHz "
        f"within m <= {max_m}, n <= {max_n}"
    )


def _flip_segment(energies: DerivedEnergies, qubit: int, first: bool):
    """Assemble one conditional-flip segment plus its closed-form timing.

    The flipped qubit's charging energy is biased to 2*K (K = its coupling to
    the middle qubit) so the driven branch rotates resonantly.  During the
    first flip the middle qubit's charging energy is biased to -2*K_spectator
    to cancel the relative phase the untouched outer coupling would imprint
    between the two branches; after the first flip the occupied branches
    agree on that coupling's energy, so the second flip needs no bias.
    """
    if qubit == 1:
        k_target, k_spectator = energies.k12, energies.k23
    elif qubit == 3:
        k_target, k_spectator = energies.k23, energies.k12
    else:
        raise ContractViolationError(f"conditional flip acts on qubit 1 or 3, got {qubit}")
    sol = solve_conditional_flip(k_target, energies.ej_max[qubit - 1])
    e_c = [0.0, (-2.0 * k_spectator) if first else 0.0, 0.0]
    e_c[qubit - 1] = 2.0 * k_target
    e_j = [0.0, 0.0, 0.0]
    e_j[qubit - 1] = sol.e_j
    seg = PulseSegment(sol.t, e_c=tuple(e_c), e_j=tuple(e_j),
                       label=f"conditional-flip-q{qubit}")
    return seg, sol


def ghz_prepare(energies: DerivedEnergies, sign: str = "+", include_k13: bool = False,
                flip_order: tuple = (1, 3)):
    """Run the three-step entangling sequence from |000>.

    Returns (final state, schedule, report).  ``sign`` selects the target
    (|000> + sign * i |111>) / sqrt(2).  ``include_k13`` keeps the residual
    next-nearest-neighbour coupling switched on during the run (the timings
    still neglect it, so the report shows the resulting fidelity deficit).
    ``flip_order`` fixes which outer qubit flips first.

    The two conditional flips each multiply the flipped branch by +i, so the
    superposition step internally uses the opposite-sign branch; the report
    records the realized relative phase.
    """
    if tuple(flip_order) not in ((1, 3), (3, 1)):
        raise ContractViolationError(f"flip_order must be (1, 3) or (3, 1), got {flip_order}")
    internal = "-" if sign in ("+", 1, +1) else "+"
    if sign not in ("+", "-", 1, +1, -1):
        raise ContractViolationError(f"sign must be '+' or '-', got {sign!r}")
    sign = "+" if sign in ("+", 1) else "-"

    t_sup = solve_superposition_pulse(energies.ej_max[1], internal)
    seg_sup = PulseSegment(
        t_sup,
        e_c=(0.0, -2.0 * (energies.k12 + energies.k23), 0.0),
        e_j=(0.0, energies.ej_max[1], 0.0),
        label="superposition",
    )
    first, second = tuple(flip_order)
    seg_f1, sol1 = _flip_segment(energies, first, first=True)
    seg_f2, sol2 = _flip_segment(energies, second, first=False)
    schedule = Schedule(
        (seg_sup, seg_f1, seg_f2),
        k12=energies.k12,
        k23=energies.k23,
        k13=energies.k13 if include_k13 else 0.0,
    )
    final, trajectory = run_schedule(energies, schedule, StateVector.basis("000"))

    s_int = 1.0 if internal == "+" else -1.0
    inv = 1.0 / math.sqrt(2.0)
    amps_sup = [0.0j] * 8
    amps_sup[0b000] = inv
    amps_sup[0b010] = 1j * s_int * inv
    target_sup = StateVector(amps_sup)
    amps_flip1 = [0.0j] * 8
    amps_flip1[0b000] = inv
    amps_flip1[0b110 if first == 1 else 0b011] = -s_int * inv
    target_flip1 = StateVector(amps_flip1)
    target_final = ghz_state(sign)

    fid = fidelity(final, target_final)
    intermediates = (
        fidelity(trajectory[0], target_sup),
        fidelity(trajectory[1], target_flip1),
    )
    phase = cmath.phase(final.amplitudes[7]) - cmath.phase(final.amplitudes[0])
    phase = math.remainder(phase, 2.0 * math.pi)
    report = PreparationReport(
        sign=sign,
        fidelity=fid,
        intermediate_fidelities=intermediates,
        achieved_phase=phase,
        superposition_time=t_sup,
        flip_solutions=(sol1, sol2),
        total_duration=schedule.total_duration(),
        k13_included=bool(include_k13),
    )
    return final, schedule, report
