"""Antiferromagnetic-like steady-state order and the forces that shape it.

Solves the self-consistent order parameter for a homogeneous cloud, then
tabulates the stationary dipole s0(x) and inversion z0(x), the effective
potential, the position-dependent friction and the momentum diffusion over
one cavity wavelength.  The dipole flips sign at every node of cos(kx) while
the inversion peaks there: neighbouring half-wavelengths carry opposite
dipole orientation.
"""

import pathlib

import numpy as np

import synccool as sc
from synccool import io

OUT = pathlib.Path(__file__).resolve().parent / "demo_output"
OUT.mkdir(exist_ok=True)

params = sc.PhysicalParams(n_atoms=100, kappa=780.0, delta=390.0,
                           w_pump=10.0, n_gamma_c=40.0)

sol = sc.solve_steady_state(params)
print(f"pump w = NGc/4: |X|^2 = {sol.x2:.6f} (uniform cloud)")
print(f"collective dipole rotates at omega0 = {sol.omega0:g} omega_R")
print(f"friction changes sign at kx0 = {sol.x0[0]:.4f} and {sol.x0[1]:.4f}")
print(f"separatrix energy E0 = {sol.e0:.4f} hbar*omega_R "
      f"(= {sol.e0 / params.w_pump:.4f} hbar*w)\n")

io.write_table(OUT / "steady_state_profiles.csv", io.PROFILE_SCHEMA, {
    "x": sol.x_grid,
    "s0": sol.s0,
    "z0": sol.z0,
    "v_eff": sol.v_eff,
    "gamma": sol.gamma,
    "diffusion_2d": sol.diffusion,
})

# a compact look at the profile structure over half a wavelength
print("  kx      s0       z0      V_eff    gamma    2D")
for frac in np.linspace(0.0, 0.5, 11):
    i = int(frac * (len(sol.x_grid) - 1))
    print(f"{sol.x_grid[i]:6.3f}  {sol.s0[i]:+.4f}  {sol.z0[i]:.4f}"
          f"  {sol.v_eff[i]:+.4f}  {sol.gamma[i]:+.4f}  {sol.diffusion[i]:.4f}")

print("\nNote the dipole sign flip and z0 -> 1 exactly at the node kx = pi/2,")
print("the potential minimum at the antinode, and friction/diffusion both")
print("vanishing at the antinodes where the coupling gradient is zero.")
print(f"\ntables written to {OUT / 'steady_state_profiles.csv'}")
