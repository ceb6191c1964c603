"""
Uniform QFT and phase readout
=============================

A phase state carries theta in its relative phases. The inverse QFT turns
it into a distribution peaked at the grid point nearest to theta * 2**n.
"""

import numpy as np

from nuqft.transform import PhaseParameter, RegisterState, iqft, measure_distribution, phase_state, qft

# |1> on two qubits becomes the phase ramp (1, i, -1, -i) / 2
print(np.round(qft(RegisterState.basis(2, 1)).amplitudes, 12))

# a phase that sits exactly on the grid is read out with certainty
n = 5
p = PhaseParameter(11 / 32, n)
dist = measure_distribution(iqft(phase_state(p)))
print("on grid:", dist.argmax(), dist.max())

# halfway between two grid points is the worst case; the best outcome still
# has probability above 4 / pi^2
p = PhaseParameter(11.5 / 32, n)
dist = measure_distribution(iqft(phase_state(p)))
print("midpoint:", np.sort(dist)[-2:], "bound:", 4 / np.pi**2)
