# The driven Hamiltonian and its time-ordered propagator.
#
# The field rotates from x to y while the gap ramps 2000 -> 3600 Hz. The
# propagator is a product of midpoint slice exponentials, refined by slice
# doubling until it stops changing at the 1e-9 level.

import numpy as np

from qthermo import DriveProtocol, drive_hamiltonian, propagator, time_ordered_product
from qthermo.linalg import unitarity_error

p = DriveProtocol(nu_i=2000.0, nu_f=3600.0, tau=300e-6)

for t in np.linspace(0, p.tau, 5):
    H = drive_hamiltonian(t, p)
    print(f"t = {t * 1e6:6.1f} us  gap = {p.gap(t):7.1f} Hz  eigenvalues {np.round(H.spectrum.eigenvalues, 3)}")

U = propagator(p)
print(f"\nconverged with {U.slices} slices, unitarity error {unitarity_error(U.matrix):.1e}")
print(np.round(U.matrix, 6))

# convergence of the midpoint product with slice count
for n in (16, 64, 256, 1024, 4096):
    err = np.max(np.abs(time_ordered_product(p, n) - U.matrix))
    print(f"{n:5d} slices: max deviation {err:.2e}")
