#!/usr/bin/env python3
"""Lag versus Rabi frequency at eta = 0.5.

The Rabi frequency is the work parameter of the quench, so the lag grows
monotonically with it; pushing the drive from 1e6 to 1e7 rad/s buys roughly
two orders of magnitude of lag, which matters when the signal must beat
experimental noise floors.
"""

from ionquench.presets import figure_presets
from ionquench.sweep import run_specs

rows = run_specs(figure_presets()["fig2"].specs)
ajc1 = sorted((r.omega_rabi, r.lag) for r in rows if r.branch == "ajc" and r.m == 1)

print("AJC m = 1 at eta = 0.5:")
print(f"{'omega_rabi [rad/s]':>20} {'lag':>12}")
for omega, lag in ajc1[::6]:
    print(f"{omega:20.4e} {lag:12.4e}")

lo = next(lag for omega, lag in ajc1 if omega >= 1e6)
hi = next(lag for omega, lag in ajc1 if omega >= 1e7)
print(f"\nlag(1e7)/lag(1e6) ~ {hi / lo:.0f} (about two orders of magnitude)")
print("strictly increasing:", all(b > a for (_, a), (_, b) in zip(ajc1, ajc1[1:])))
