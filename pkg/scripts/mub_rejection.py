"""Hypothesis residuals of doubled-spider mixtures over the computational and Fourier bases."""

import argparse

import numpy as np

from cpmfrob import config
from cpmfrob import frobenius as fb
from cpmfrob import randomgen as rg


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    config.add_arguments(parser, config.MubSweep)
    cfg = config.from_namespace(config.MubSweep, parser.parse_args())
    laws = fb.COMONOID_HYPOTHESES
    print(f"{'d':>2} {'w':>5} " + " ".join(f"{law:>11}" for law in laws) + "  verdict")
    for d in cfg.dims:
        for w in cfg.weights:
            rep = fb.check_cp_comonoid(rg.mub_mixture(np.random.default_rng(0), d, w), tol=cfg.tol)
            failing = rep.failing(cfg.tol, laws)
            row = " ".join(f"{rep.residuals[law]:11.2e}" for law in laws)
            print(f"{d:>2} {w:5.2f} {row}  {'rejected' if failing else 'accepted'}")


if __name__ == "__main__":
    main()
