"""
Risk tables for z = 1..9
========================

Generate the standard 35 x 13 grid (r = 0.1..3.5, q = 0.02..0.26) and check
every cell against the bundled reference tables.
"""

from dsrisk.tables import FIXTURE_Z, compare_fixture, emit, generate_table, load_fixture

grid = generate_table(1)
print(emit(grid, "markdown"))

for z in FIXTURE_Z:
    report = compare_fixture(generate_table(z), load_fixture(z))
    print(f"z={z}: {len(report.mismatches)} mismatches, max |delta| {report.max_abs_delta:.4f} pp")

# any axes work for exploration
custom = generate_table(6, q_axis=[0.3, 0.35, 0.4], r_axis=[0.5, 1.0, 2.0])
print(emit(custom, "csv"))
