"""Residuals of the isometry decomposition over random Σ q_i CPM(V_i), grouped by k."""

import argparse
import time
from collections import defaultdict

import numpy as np

from cpmfrob import config
from cpmfrob import cpmap as cp
from cpmfrob import randomgen as rg
from cpmfrob.canonicalize import decompose_cp_isometry


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    config.add_arguments(parser, config.IsometrySweep)
    cfg = config.from_namespace(config.IsometrySweep, parser.parse_args())
    r = np.random.default_rng(cfg.seed)
    stats = defaultdict(lambda: defaultdict(float))
    t0 = time.perf_counter()
    for _ in range(cfg.n_samples):
        k = int(r.integers(1, cfg.max_k + 1))
        din = int(r.integers(1, cfg.max_in_dim + 1))
        if k * din > cfg.max_out_dim:
            continue
        dout = int(r.integers(k * din, cfg.max_out_dim + 1))
        phi, q, _ = rg.isometric_combination(r, k, din, dout)
        dec = decompose_cp_isometry(phi)
        s = stats[k]
        s["count"] += 1
        s["n_ok"] += dec.n == k
        s["sum_q2"] = max(s["sum_q2"], abs(sum(x * x for x in dec.coeffs) - 1))
        s["orth"] = max(s["orth"], float(dec.orthogonality_residuals().max()))
        s["recon"] = max(s["recon"], cp.choi_distance(dec.reconstruct(), phi))
        if dec.n == k:
            s["coeffs"] = max(s["coeffs"], float(np.max(np.abs(np.sort(dec.coeffs) - np.sort(q)))))
    print(f"{'k':>2} {'count':>6} {'n ok':>5} {'|Σq²-1|':>9} {'orth':>9} {'recon':>9} {'coeffs':>9}")
    for k in sorted(stats):
        s = stats[k]
        print(f"{k:>2} {int(s['count']):>6} {int(s['n_ok']):>5} {s['sum_q2']:9.1e} "
              f"{s['orth']:9.1e} {s['recon']:9.1e} {s['coeffs']:9.1e}")
    print(f"elapsed {time.perf_counter() - t0:.2f} s")


if __name__ == "__main__":
    main()
