"""Self-paced weighting keeps corrupted samples out of the fit.

Ten percent of the rows of a clean blob graph are replaced by uniform noise.
Hard self-paced weighting admits easy samples first, so the noisy rows get
zero weight while the cluster structure is being learned.

    python demos/02_outlier_robustness.py
"""

import numpy as np

from spsnmf import SpsConfig, accuracy, build_similarity, run_spsnmf
from spsnmf.synthetic import corrupt_similarity, make_blobs

scores = {"baseline": [], "hard": []}
for seed in range(10):
    features, truth = make_blobs(n_per_cluster=20, k=3, seed=seed)
    bad = np.random.default_rng(100 + seed).choice(60, 6, replace=False)
    X = corrupt_similarity(build_similarity(features), bad, seed=seed)
    inliers = np.setdiff1d(np.arange(60), bad)

    # After the first round of 10 sweeps the weights are refreshed once.
    first = run_spsnmf(X, SpsConfig(k=3, mode="hard", seed=seed, max_sweeps=10))
    print(f"seed {seed}: corrupted weights at first refresh {first.weights_final[bad]}")

    for mode in scores:
        res = run_spsnmf(X, SpsConfig(k=3, mode=mode, seed=seed))
        scores[mode].append(accuracy(res.labels[inliers], truth[inliers]))

for mode, acc in scores.items():
    print(f"{mode:>8}: mean inlier ACC {np.mean(acc):.3f}")
