"""
Reproducible experiment reports
===============================

An experiment manifest names a process, a seed, a replica count and a list of
checks. Running it twice gives the same bytes. The same runs are available
from the shell as ``rangeproc verify``.
"""

from dataclasses import replace

from rangeproc import ExperimentManifest, dumps, run_manifest

m = ExperimentManifest.bundled("drift_eta1")
m = replace(m, replicas=3, checks=("range_slope", "inverse_slope", "duality"))
report = run_manifest(m, timestamp=False)
for chk in report["checks"]:
    print(f"{chk['check']:>14}: {'PASS' if chk['passed'] else 'FAIL'}")
print("step-halving delta:", report["step_halving_delta"])
print("rerun identical:", dumps(report) == dumps(run_manifest(m, timestamp=False)))
