"""The generated corpus shared by the serialization tests and the acceptance suite."""

import numpy as np

from cpmfrob import cpmap as cp
from cpmfrob import frobenius as fb
from cpmfrob import randomgen as rg


def generated_corpus(seed=7):
    r = np.random.default_rng(seed)
    algebras = [fb.spider(d) for d in range(1, 5)]
    algebras += [fb.matrix_algebra(2), fb.matrix_algebra(3)]
    algebras += [fb.cyclic_group_algebra(n) for n in range(2, 5)]
    algebras += [fb.direct_sum(fb.spider(2), fb.matrix_algebra(2))]
    items = list(algebras)
    items += [fb.double_algebra(a) for a in algebras]
    for a in algebras[:6]:
        delta, eps = fb.perturb_phases(a, (float(r.uniform(-3, 3)), float(r.uniform(-3, 3))))
        items.append(fb.FrobeniusAlgebra(a.dim, delta, eps))
    items += [rg.mub_mixture(r, d) for d in (2, 3)]
    items += [rg.isometric_combination(r, k, 2, 7)[0] for k in (1, 2, 3)]
    items += [rg.random_channel(r, 2, 3, 2), rg.depolarizing(0.25), cp.discard(3)]
    items.append(fb.FrobeniusAlgebra(0, np.zeros((0, 0)), np.zeros((1, 0))))
    return items
