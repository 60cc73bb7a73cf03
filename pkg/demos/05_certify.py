"""Certify the whole grid and write a JSON report."""

# %%
import collections
import time

from cuspcert.caselib import DEFAULT_Q, certify_range
from cuspcert.cli import emit_json
from cuspcert.torus import FAMILIES

t0 = time.perf_counter()
certs = certify_range(FAMILIES, range(1, 9), DEFAULT_Q)
print(f"{len(certs)} certificates in {time.perf_counter() - t0:.1f}s")

# %%
tally = collections.Counter((c.family, c.verdict) for c in certs)
for family in FAMILIES:
    print(f"{family:3s} PASS {tally[family, 'PASS']:4d}  FAIL {tally[family, 'FAIL']:4d}")

# %%
for c in certs:
    if not c.passed:
        print(c.family, c.rank, c.q, c.failures)

# %%
with open("cuspcert_report.json", "w") as fh:
    fh.write(emit_json(certs))
print(certs[0].to_json()[:300], "...")
