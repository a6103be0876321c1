#!/usr/bin/env python3
"""Walk through the exact solvers on a small worked scenario.

Five sensors: pairing range-difference measurements eliminates the unknown
source-to-reference range and the position drops out of one 3x3 linear solve.
Four sensors: the position is pinned to a line parameterized by that range;
one quadratic plus residual scoring picks the physical candidate.
"""

import numpy as np

import tdoaloc as tl

sensors5 = tl.SensorArray([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])
source = np.array([2.0, 3.0, 4.0])

print("=== five sensors: one linear solve, no ambiguity ===")
scenario = tl.Scenario(sensors=sensors5, source=source)
deltas = tl.range_differences(scenario)
print("true source:        ", source)
print("range differences m:", np.round(deltas.deltas, 6))

rel = tl.reference_frame(sensors5)
system = tl.build_five_sensor_system(rel, deltas)
print("system matrix:\n", np.round(system.matrix, 4))
print("pairings used:", system.pairings, " cleared rows:", system.scaled_rows)

result = tl.solve_five_sensor(sensors5, deltas)
print("estimate:", result.position, " method:", result.method.value)
print("pivot magnitudes:", np.round(result.diagnostics["pivots"], 4))
print("error:", np.linalg.norm(result.position - source))

print()
print("=== four sensors: linear solve + quadratic + residual choice ===")
sensors4 = tl.SensorArray(sensors5.positions[:4])
scenario4 = tl.Scenario(sensors=sensors4, source=source)
deltas4 = tl.range_differences(scenario4)
system4 = tl.build_four_sensor_system(tl.reference_frame(sensors4), deltas4)
print("candidate line: position = range * slope - offset")
print("  slope :", np.round(system4.slope, 6))
print("  offset:", np.round(system4.offset, 6))

roots = tl.solve_reference_range(system4)
print("quadratic coefficients (a, b_half, c):",
      tuple(round(v, 6) for v in (roots.a, roots.b_half, roots.c_coef)))
print("retained nonnegative roots:", roots.roots,
      " (true source-to-reference range:", np.linalg.norm(source), ")")

result4 = tl.solve_four_sensor(sensors4, deltas4)
print("estimate:", result4.position, " resolved by:", result4.ambiguity_resolved_by.value)
for i, cand in enumerate(result4.candidates):
    print(f"  candidate {i}: range={cand.reference_range:.6f}"
          f" residual={cand.residual:.3e} position={np.round(cand.position, 9)}")
print("error:", np.linalg.norm(result4.position - source))

print()
print("=== timing measurements instead of ranges ===")
c = tl.SPEED_OF_LIGHT
arrival = np.array([0.0, *(deltas.deltas / c)])  # seconds, reference first
recovered = tl.arrival_times_to_range_diffs(arrival, c)
reresult = tl.solve_five_sensor(sensors5, recovered)
print("arrival-time spreads (ns):", np.round(arrival * 1e9, 3))
print("estimate from times:", reresult.position)
