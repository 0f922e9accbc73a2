"""
A merchant's view: timestamps in, risk out
==========================================

Read block timestamps for the block holding a payment and the blocks after
it, measure how long the confirmations took, and turn that into a risk.
Then ask how many confirmations would be needed at that pace.
"""

from dsrisk import catchup_timed, min_confirmations, timing_from
from dsrisk.ingest import elapsed_for_confirmations, parse_stamps

stamps_csv = """height,timestamp
840000,1713571767
840001,1713572143
840002,1713573400
840003,1713573610
840004,1713574530
"""

stamps = parse_stamps(stamps_csv)
q = 0.15
for z in range(1, len(stamps) + 1):
    window = elapsed_for_confirmations(stamps, z)
    timing = timing_from(window.t, z, q)
    risk = catchup_timed(z, q, timing.kappa)
    print(f"z={z}: t={window.t:.0f}s r={timing.r:.3f} risk={100 * risk:.4f}%")

# fewest confirmations keeping the risk under 0.1% at the last observed pace
print("needed:", min_confirmations(q, timing.r, 0.001))
