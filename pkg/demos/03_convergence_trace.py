"""Objective and admitted-sample curves of a self-paced solve.

Writes one trace CSV per mode (sweep, objective, active_samples, mean_weight)
to ./demo_traces and prints a compact text view.  The objective jumps up
whenever the schedule admits harder samples and then decreases monotonically.

    python demos/03_convergence_trace.py
"""

from pathlib import Path

from spsnmf import SpsConfig, build_similarity, run_spsnmf
from spsnmf.bench import emit_traces
from spsnmf.synthetic import make_blobs

out = Path("demo_traces")
out.mkdir(exist_ok=True)
features, _ = make_blobs(n_per_cluster=40, k=4, spread=0.4, separation=3.0, seed=1)
X = build_similarity(features)

for mode in ("baseline", "hard", "soft"):
    res = run_spsnmf(X, SpsConfig(k=4, mode=mode, seed=0))
    path = emit_traces(res, out / f"{mode}.csv")
    tr = res.trace
    print(f"\n{mode} -> {path} ({len(tr)} sweeps, converged={res.converged})")
    for t in range(0, len(tr), 10):
        print(f"  sweep {tr.sweep[t]:4d}  objective {tr.objective[t]:12.5f}  "
              f"active {tr.active_samples[t]:3d}  mean weight {tr.mean_weight[t]:.3f}")
