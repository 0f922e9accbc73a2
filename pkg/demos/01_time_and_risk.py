"""
How elapsed time changes double-spend risk
==========================================

Counting confirmations alone gives one number per (z, q). Knowing how long
the confirmations took sharpens it: slow blocks give a hidden attacker more
time to mine, fast blocks less.
"""

from dsrisk import catchup_time_free, table_probability

q = 0.1  # attacker holds 10% of the hashrate

# time-free risk for the first few confirmations
for z in range(1, 7):
    print(f"z={z}: {100 * catchup_time_free(z, q):.4f}%")

# the same z, observed at different paces r = t / (z * 600 s)
z = 3
for r in (0.25, 0.5, 1.0, 2.0, 3.5):
    print(f"z={z}, r={r}: {100 * table_probability(z, q, r):.4f}%")
