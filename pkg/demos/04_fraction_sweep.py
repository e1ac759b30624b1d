"""Final accuracy as a function of the initially admitted fraction.

Runs the same harness as ``spsnmf fractions`` on a generated CSV and prints
the mean ACC per starting fraction.

    python demos/04_fraction_sweep.py
"""

import csv
import tempfile
from collections import defaultdict
from pathlib import Path

import numpy as np

from spsnmf import SpsConfig
from spsnmf.bench import ExperimentSpec, run_fraction_sweep
from spsnmf.synthetic import make_blobs

work = Path(tempfile.mkdtemp(prefix="spsnmf_demo_"))
features, truth = make_blobs(n_per_cluster=25, k=3, spread=0.5, separation=3.0, seed=2)
with open(work / "blobs.csv", "w", newline="") as fh:
    writer = csv.writer(fh)
    writer.writerow(["x", "y", "label"])
    writer.writerows([float(a), float(b), int(c)] for (a, b), c in zip(features, truth))

spec = ExperimentSpec(dataset=str(work / "blobs.csv"), out_dir=str(work / "out"),
                      solver=SpsConfig(k=3), trials=5, modes=("hard", "soft"))
rows = run_fraction_sweep(spec)

table = defaultdict(list)
for mode, p, _, acc in rows:
    table[mode, p].append(acc)
print(f"results in {work / 'out' / 'fractions.csv'}")
for (mode, p), accs in sorted(table.items()):
    print(f"{mode:>5}  p0 = {p:.1f}  mean ACC {np.mean(accs):.3f}")
