# Thermal states of a single spin and the temperature read back from populations.
#
# A spin with a 2000 Hz gap at a spin temperature of 1580.2 Hz (h = 1, so
# temperatures are quoted as frequencies) sits at roughly 78/22 ground/excited
# populations. Reading the populations back through beta = ln(p0/p1)/nu
# recovers the temperature.

import numpy as np

from qthermo import ThermalSpec, effective_temperature, gibbs_state, partition_function, pauli

beta = ThermalSpec.from_temperature_hz(1580.2)
H = -0.5 * 2000.0 * pauli("x")

rho = gibbs_state(H, beta)
p_excited, p_ground = rho.spectrum.eigenvalues
print("Gibbs state in the computational basis:")
print(np.round(rho.matrix, 4))
print(f"ground / excited populations: {p_ground:.4f} / {p_excited:.4f}")
print(f"partition function Z = {partition_function(H, beta):.6f}  (2 cosh(beta nu / 2) = {2 * np.cosh(beta.beta * 1000):.6f})")

recovered = effective_temperature(p_ground, p_excited, 2000.0)
print(f"spin temperature from populations: {recovered.temperature_hz:.4f} Hz")

# cooler and hotter spins at the same gap
for t_hz in (500.0, 1580.2, 10000.0):
    pops = gibbs_state(H, ThermalSpec.from_temperature_hz(t_hz)).spectrum.eigenvalues[::-1]
    print(f"T = {t_hz:8.1f} Hz -> populations {np.round(pops, 4)}")
