"""Side-by-side comparison on one disturbed scenario.

The geometric PID's integral channel absorbs the disturbance, the PD
variant tolerates it, and the Euler-angle baseline limit-cycles.
"""

from dataclasses import replace

from so3pid import ScenarioConfig, metrics, run_scenario
from so3pid.harness import default_disturbance

base = ScenarioConfig(duration=60.0, disturbance=default_disturbance())

rows = {}
for kind in ("geometric-pid", "geometric-pd", "classic-pid"):
    records = run_scenario(replace(base, controller=kind))
    rows[kind] = metrics(records)

keys = ("ss_mean_om", "ss_max_om", "ss_mean_phi", "effort", "peak_tau")
print(f"{'metric':14}" + "".join(f"{k:>16}" for k in rows))
for key in keys:
    print(f"{key:14}" + "".join(f"{rows[k][key]:16.4g}" for k in rows))

pid, pd = rows["geometric-pid"], rows["geometric-pd"]
print("\nintegral channel payoff on the identical scenario:")
print(f"  steady |omega|: {pid['ss_mean_om']:.3e} vs {pd['ss_mean_om']:.3e} "
      f"({pd['ss_mean_om'] / pid['ss_mean_om']:.1f}x)")
print(f"  effort:         {pid['effort']:.3f} vs {pd['effort']:.3f} N m s")
