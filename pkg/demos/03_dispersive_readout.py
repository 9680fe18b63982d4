"""Dispersive readout rates and how second-order effects disturb them.

A weakly coupled readout mode turns the parity Hamiltonian into a frequency
pull chi = Omega-tilde phi_c^2; driving the readout at resonance yields the
measurement rate Gamma_m = n_c chi.  For the two-mode joint-parity
measurement, second-order photon-exchange processes add small dephasing
channels inside the parity subspaces, quantified by Gamma_phi+- / Gamma_m.
"""

import math

from catparity import (
    ModeFrequencies,
    ReadoutParams,
    angular,
    dephasing_ratios_two_mode,
    dispersive_rates_joint,
    dispersive_rates_single,
)

E_J = angular(300e6)  # Josephson energy over hbar, here 2 pi x 300 MHz
readout = ReadoutParams(phi_c=0.1, n_c=1.0)

print("single-mode rates at alpha = 2, phi_a = 4:")
rates = dispersive_rates_single(E_J, 4.0, 2.0, readout)
mhz = 2 * math.pi * 1e6
print(f"  Omega-tilde = {rates.omega_tilde / mhz:8.3f} MHz x 2pi")
print(f"  chi         = {rates.chi / mhz:8.4f} MHz x 2pi")
print(f"  Gamma_m     = {rates.gamma_m / mhz:8.4f} MHz x 2pi  (n_c = {readout.n_c})")
print(f"  optimal readout linewidth kappa_c = chi = {rates.kappa_c_optimal / mhz:.4f} MHz x 2pi")

print("\nmeasurement rate vs phi_a (units of E_J/hbar):")
for phi in (3.0, 3.5, 3.9, 4.0, 4.1, 4.5, 5.0):
    r = dispersive_rates_single(E_J, phi, 2.0, readout)
    bar = "#" * int(60 * r.gamma_m / rates.gamma_m)
    print(f"  {phi:3.1f}  {r.gamma_m / E_J:.3e}  {bar}")

print("\njoint-parity rates at alpha = beta = 2, phi_a = phi_b = 4:")
joint = dispersive_rates_joint(E_J, 4.0, 4.0, 2.0, 2.0, readout)
print(f"  Gamma_m^ab  = {joint.gamma_m / mhz:8.4f} MHz x 2pi")

print("\nmeasurement-induced dephasing from the second-order Hamiltonian")
print("(omega_a = 2pi x 9.10 GHz, omega_b = 2pi x 7.5 GHz):")
freqs = ModeFrequencies(angular(9.10e9), angular(7.5e9))
ratios = dephasing_ratios_two_mode(E_J, 4.0, 4.0, 2.0, 2.0, freqs, dim_a=30, dim_b=30)
print(f"  Gamma_phi+/Gamma_m = {ratios.plus_over_m:.2e}   (even joint-parity subspace)")
print(f"  Gamma_phi-/Gamma_m = {ratios.minus_over_m:.2e}   (odd joint-parity subspace)")
print(f"  Gamma_m (matrix elements) = {ratios.gamma_m / mhz:.3f} MHz x 2pi")
print(f"  2 Omega_ab (closed form)  = {ratios.two_omega_ab / mhz:.3f} MHz x 2pi")
