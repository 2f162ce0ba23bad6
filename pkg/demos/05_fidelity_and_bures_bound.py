# State distances: Uhlmann fidelity, Bures length and the normalized overlap.
#
# Compares the driven state with the target equilibrium state and checks the
# lower bound 8 L^2 / pi^2 on the entropy production.

from qthermo import (
    DriveProtocol,
    ThermalSpec,
    bures_length,
    clausius_bound,
    evolve,
    gibbs_state,
    overlap_fidelity,
    propagator,
    relative_entropy,
    uhlmann_fidelity,
    wootters_length,
)

beta = ThermalSpec.from_temperature_hz(1580.2)
p = DriveProtocol(2000.0, 5000.0, 200e-6)
rho_tau = evolve(gibbs_state(p.initial_hamiltonian(), beta), propagator(p))
rho_f = gibbs_state(p.final_hamiltonian(), beta)

F = uhlmann_fidelity(rho_tau, rho_f)
L = bures_length(rho_tau, rho_f)
S = relative_entropy(rho_tau, rho_f)
check = clausius_bound(S, L)
print(f"Uhlmann fidelity      {F:.6f}")
print(f"overlap fidelity      {overlap_fidelity(rho_tau, rho_f):.6f}")
print(f"Bures length          {L:.6f} rad")
print(f"entropy production    {S:.6f} nats")
print(f"bound 8 L^2 / pi^2    {check.bound_value:.6f} nats (satisfied: {check.satisfied}, margin {check.margin:.4f})")

# for commuting states the Bures length reduces to the classical statistical angle
p_a, p_b = [0.78, 0.22], [0.907, 0.093]
print(f"statistical angle between {p_a} and {p_b}: {wootters_length(p_a, p_b):.6f} rad")
