"""Write a corpus of structure files (algebras, doubled comonoids, mixtures, channels)."""

import argparse
import json
from pathlib import Path

import numpy as np

from cpmfrob import config, io
from cpmfrob import frobenius as fb
from cpmfrob import randomgen as rg


def build(cfg: config.CorpusConfig):
    r = np.random.default_rng(cfg.seed)
    algebras = [(f"spider{d}", fb.spider(d)) for d in cfg.spider_dims]
    algebras += [(f"matrix{n}", fb.matrix_algebra(n)) for n in cfg.matrix_dims]
    algebras += [(f"cyclic{n}", fb.cyclic_group_algebra(n)) for n in cfg.cyclic_orders]
    items = []
    for name, a in algebras:
        items.append((name, a))
        items.append((name + "_double", fb.double_algebra(a)))
    for i in range(cfg.n_mixtures):
        items.append((f"mub_mixture{i}", rg.mub_mixture(r, 2 + i % 2)))
    for i in range(cfg.n_channels):
        items.append((f"channel{i}", rg.random_channel(r, 2, 2, 2 + i)))
    return items


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    config.add_arguments(parser, config.CorpusConfig)
    cfg = config.from_namespace(config.CorpusConfig, parser.parse_args())
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    index = {}
    for name, obj in build(cfg):
        path = out / f"{name}.json"
        text = io.emit(obj, {"generator": name, "seed": str(cfg.seed)})
        path.write_text(text)
        assert io.emit(io.parse(text), {"generator": name, "seed": str(cfg.seed)}) == text
        index[name] = type(obj).__name__
    (out / "index.json").write_text(json.dumps({"config": config.to_dict(cfg), "files": index}, indent=1))
    print(f"wrote {len(index)} files to {out}")


if __name__ == "__main__":
    main()
