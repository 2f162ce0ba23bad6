# Work statistics from two projective energy measurements.
#
# Starting from the Gibbs state, the exponential average of the work equals
# Z_f / Z_i, while the plain average exceeds the free energy difference.

import math

from qthermo import DriveProtocol, ThermalSpec, free_energy_difference, gibbs_state, propagator, tpm_work_distribution

beta = ThermalSpec.from_temperature_hz(1580.2)

for nu_f, tau in [(3600.0, 100e-6), (3600.0, 800e-6), (5000.0, 100e-6)]:
    p = DriveProtocol(2000.0, nu_f, tau)
    Hi, Hf = p.initial_hamiltonian(), p.final_hamiltonian()
    dist = tpm_work_distribution(gibbs_state(Hi, beta), Hi, Hf, propagator(p))
    dF = free_energy_difference(Hi, Hf, beta)
    print(f"\nnu_f = {nu_f:.0f} Hz, tau = {tau * 1e6:.0f} us")
    for w, prob in dist.outcomes:
        print(f"  W = {w:8.1f} Hz  with probability {prob:.5f}")
    print(f"  <exp(-beta W)> = {dist.exp_average(beta):.12f}")
    print(f"  exp(-beta dF)  = {math.exp(-beta.beta * dF):.12f}")
    print(f"  <W> - dF = {dist.mean() - dF:.3f} Hz")
