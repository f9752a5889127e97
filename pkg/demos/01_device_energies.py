"""From raw capacitances to Hamiltonian energies.

Walks the electrostatic chain: box self-capacitances, network screening,
charging and coupling energies, and the two sanity checks an experiment
would run before trusting the device (crosstalk size, readout timing).
"""

from ghzsim import (
    CapacitanceNetwork,
    ControlSettings,
    crosstalk_ratio,
    derive_energies,
    effective_capacitances,
    readout_timing_margin,
    solve_gate_charges,
)

# A symmetric chain: 600 aF junctions, 0.6 aF gates, 30 aF couplers.
network = CapacitanceNetwork(
    c_junction=(600.0, 600.0, 600.0),
    c_gate=(0.6, 0.6, 0.6),
    c_coupler=(30.0, 30.0),
)

caps = effective_capacitances(network)
print("box self-capacitances C_sigma [aF]:", caps.c_sigma)
print("screened self terms        [aF]:", tuple(round(c, 3) for c in caps.c_sigma_eff))
print("pair term 1-2 [aF]:", round(caps.c_pair_12, 1))
print("pair term 1-3 [aF]:", round(caps.c_pair_13, 1))
print()

# Bias at charge degeneracy with the flux at half a quantum: every charging
# energy vanishes and every junction is switched off.  This is the idle
# point all pulse sequences start from.
settings = ControlSettings(
    gate_charge=(0.5, 0.5, 0.5),
    flux=(0.5, 0.5, 0.5),
    epsilon_j=(5.6, 5.6, 5.6),
)
energies = derive_energies(network, settings)
print("charging energies E_C [GHz]:", energies.e_c)
print("coupling K12 = K23    [GHz]:", round(energies.k12, 6))
print("residual coupling K13 [GHz]:", round(energies.k13, 6))
print("perturbation ratio zeta12  :", round(energies.zeta12, 6))
print()

# Boxes 1 and 3 share no capacitor, yet screening leaves them coupled.
# The neglect-K13 approximation used by the pulse timings is justified when
# the ratio stays under 5%.
report = crosstalk_ratio(energies)
print(f"K13 / K12 = {report.ratio_12:.4f}  (threshold {report.threshold})")
print("neglect justified:", report.neglect_justified)
print()

# Reading a qubit out takes about a nanosecond.  Compare that against the
# characteristic time 1 / (2 pi K) of each coupling: the chain couplings are
# far too fast to ignore during readout, the residual one is not.
for name, k in (("K12", energies.k12), ("K13", energies.k13)):
    margin = readout_timing_margin(k, t_measure=1.0)
    print(f"{name}: t_c = {margin.t_c:.4f} ns, margin = {margin.margin:.2f}, "
          f"acceptable = {margin.acceptable}")
print()

# The inverse problem: which gate charges realize a requested set of
# charging energies?  Round-tripping the idle point recovers 0.5 exactly.
charges = solve_gate_charges(network, energies.e_c)
print("gate charges for E_C = 0:", tuple(round(n, 12) for n in charges))
