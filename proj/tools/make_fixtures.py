#!/usr/bin/env python3
"""Regenerates the network fixtures under data/.

Every CPT column comes from a "copy" model: the child's level k gets logit
strength * #{parents whose level equals k (mod arity)} plus a little noise, so
each parent has a marginal effect and no XOR-style unfaithful dependence arises.
"""

import itertools
import json
import pathlib

import numpy as np

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def copy_cpt(rng, arity, parent_arities, strength):
    columns = []
    for config in itertools.product(*[range(a) for a in parent_arities]):
        logits = rng.normal(0.0, 0.3, size=arity)
        for level in config:
            logits[level % arity] += strength
        p = np.exp(logits - logits.max())
        columns.extend((p / p.sum()).tolist())
    return columns


def build(seed, arities, edges, strength):
    rng = np.random.default_rng(seed)
    names = list(arities)
    parents = {n: [p for p, c in edges if c == n] for n in names}
    doc = {
        "variables": [{"name": n, "levels": [f"s{i}" for i in range(arities[n])]} for n in names],
        "edges": [[p, c] for p, c in edges],
        "cpts": {},
    }
    for n in names:
        s = strength(rng) if callable(strength) else strength
        doc["cpts"][n] = copy_cpt(rng, arities[n], [arities[p] for p in parents[n]], s)
    return doc


def net10():
    # Listed out of topological order so that index-order tie-breaking in the
    # search cannot line up with the true orientations by accident.
    arities = {"G": 3, "B": 3, "J": 3, "D": 3, "A": 2, "H": 2, "E": 2, "I": 2, "C": 2, "F": 2}
    edges = [("A", "C"), ("B", "C"), ("A", "D"), ("C", "E"), ("D", "E"), ("D", "F"),
             ("E", "G"), ("F", "G"), ("G", "H"), ("B", "I"), ("I", "J"), ("H", "J")]
    return build(10, arities, edges, 2.5)


def child20():
    arities = {
        "BirthAsphyxia": 2, "Disease": 6, "Age": 3, "LVH": 2, "DuctFlow": 3, "CardiacMixing": 4,
        "LungParench": 3, "LungFlow": 3, "Sick": 2, "LVHreport": 2, "HypDistrib": 2, "HypoxiaInO2": 3,
        "CO2": 3, "ChestXray": 5, "Grunting": 2, "LowerBodyO2": 3, "RUQO2": 3, "CO2Report": 2,
        "XrayReport": 5, "GruntingReport": 2,
    }
    edges = [("BirthAsphyxia", "Disease")]
    edges += [("Disease", c) for c in ["Age", "LVH", "DuctFlow", "CardiacMixing", "LungParench", "LungFlow", "Sick"]]
    edges += [("LVH", "LVHreport"), ("DuctFlow", "HypDistrib"), ("CardiacMixing", "HypDistrib"),
              ("CardiacMixing", "HypoxiaInO2"), ("LungParench", "HypoxiaInO2"), ("LungParench", "CO2"),
              ("LungParench", "ChestXray"), ("LungParench", "Grunting"), ("LungFlow", "ChestXray"),
              ("Sick", "Grunting"), ("Sick", "Age"), ("HypDistrib", "LowerBodyO2"),
              ("HypoxiaInO2", "LowerBodyO2"), ("HypoxiaInO2", "RUQO2"), ("CO2", "CO2Report"),
              ("ChestXray", "XrayReport"), ("Grunting", "GruntingReport")]
    return build(20, arities, edges, lambda rng: rng.uniform(1.5, 3.0))


def mlc_clusters():
    """Two independent clusters; in each, four binary features drive three chained labels."""
    # Features first and labels last, so samples work with `mlc --label-count 6`.
    xs = {tag: [f"x{tag}{i}" for i in range(1, 5)] for tag in "ab"}
    ys = {tag: [f"y{tag}{i}" for i in range(1, 4)] for tag in "ab"}
    arities = {n: 2 for n in xs["a"] + xs["b"] + ys["a"] + ys["b"]}
    edges = []
    for tag in "ab":
        x, y = xs[tag], ys[tag]
        edges += [(x[0], y[0]), (x[1], y[0]), (x[2], y[1]), (x[3], y[2]),
                  (y[0], y[1]), (y[1], y[2]), (y[0], y[2])]
    return build(6, arities, edges, 2.0)


def mlc_genbase():
    """Four labels, each with private feature parents and children: no label interacts."""
    arities, edges = {}, []
    for i in range(1, 5):
        y = f"y{i}"
        arities[y] = 2
        for j in range(1, 3):
            arities[f"p{i}{j}"] = 2
            edges.append((f"p{i}{j}", y))
        arities[f"c{i}"] = 2
        edges.append((y, f"c{i}"))
    return build(4, arities, edges, 2.0)


def main():
    DATA.mkdir(exist_ok=True)
    for name, doc in [("net10", net10()), ("child20", child20()), ("mlc_clusters", mlc_clusters()),
                      ("mlc_genbase", mlc_genbase())]:
        (DATA / f"{name}.json").write_text(json.dumps(doc, indent=1) + "\n")
        print(f"{name}: {len(doc['variables'])} variables, {len(doc['edges'])} edges")


if __name__ == "__main__":
    main()
