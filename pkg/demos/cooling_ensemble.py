"""Synchronization-assisted cooling of a stochastic trajectory ensemble.

Runs a reduced-size version of the cold-start production run (N = 40 atoms,
8 trajectories instead of 100/200) so it finishes in about a minute, prints
the momentum-width relaxation together with the build-up of the collective
dipole correlation <Xdag X>, and saves the full record as CSV.

All quantities are in recoil units: momenta in hbar*k, times in 1/omega_R.
"""

import pathlib
import time

import synccool as sc
from synccool import io

OUT = pathlib.Path(__file__).resolve().parent / "demo_output"
OUT.mkdir(exist_ok=True)

# cavity and pump of the main production runs, scaled down to N = 40 atoms
# at fixed collective linewidth N*Gamma_C (the thermodynamic-limit convention)
params = sc.PhysicalParams(n_atoms=40, kappa=780.0, delta=390.0,
                           w_pump=10.0, n_gamma_c=40.0)
config = sc.IntegrationConfig(dt=2e-3, t_end=60.0, sample_every=1.0)
ic = sc.InitialCondition(p2_initial=5.0)

print(f"N = {params.n_atoms}, NGc = {params.n_gamma_c}, w = {params.w_pump}, "
      f"delta = kappa/2; starting <p^2> = {ic.p2_initial} (hbar k)^2")
t0 = time.perf_counter()
result = sc.simulate_ensemble(params, config, ic, n_traj=8, master_seed=2024)
print(f"8 trajectories to t = {config.t_end:g}/omega_R in "
      f"{time.perf_counter() - t0:.0f} s\n")

series = result.series
print(" t        <p^2>          <Xdag X>   kurtosis")
for k in range(0, len(series.times), 5):
    print(f"{series.times[k]:4.0f}  {series.channels['p2_mean'][k]:7.3f}"
          f" +- {series.channels['p2_stderr'][k]:5.3f}"
          f"   {series.channels['xdagx'][k]:7.4f}"
          f"   {series.channels['kurtosis'][k]:5.2f}")

final = series.channels["p2_mean"][-1]
print(f"\nThe width relaxes from {ic.p2_initial:g} to about {final:.2f} "
      "(hbar k)^2, i.e. to the recoil-energy scale, while the dipoles lock")
print(f"(<Xdag X> grows from the 1/N floor to "
      f"{series.channels['xdagx'][-1]:.3f}).  The late-time kurtosis of "
      f"{series.channels['kurtosis'][-1]:.2f} signals the flat-topped,")
print("non-thermal momentum distribution characteristic of this cooling"
      " mechanism (a Gaussian would give 3).")

io.write_timeseries(OUT / "cooling_ensemble.csv", series)
print(f"\nrecord written to {OUT / 'cooling_ensemble.csv'}")
