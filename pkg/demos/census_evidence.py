"""Finiteness evidence: compare fingerprint sets of two census heights.

    python3 demos/census_evidence.py [H] [workers]

Runs the degree-3 census over Q with S = {2, 3, 5} and the three-ramification
-point filter at heights H - 1 and H (default H = 3), and prints the
stabilisation report.  Stable fingerprints are evidence, not proof.
"""

import json
import sys
import time

from dynshaf.census import CensusConfig, census_run, infinite_family_demo, stabilization_report
from dynshaf.exactalg import Place

H = int(sys.argv[1]) if len(sys.argv) > 1 else 3
workers = int(sys.argv[2]) if len(sys.argv) > 2 else 1
S = tuple(Place.prime(p) for p in (2, 3, 5))

runs = []
for h in (H - 1, H):
    t0 = time.perf_counter()
    runs.append(census_run(CensusConfig(3, h, S=S, mstar=True), workers=workers))
    print(f"H={h}: {len(runs[-1])} records in {time.perf_counter() - t0:.1f}s", file=sys.stderr)
print(json.dumps(stabilization_report(runs[0], runs[1], S), indent=2))

fam = infinite_family_demo(5)
print(json.dumps({k: v for k, v in fam.items() if k != "maps"}, indent=2))
