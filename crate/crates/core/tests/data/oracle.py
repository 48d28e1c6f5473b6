"""Independent numeric oracle for derived reference values.

Rebuilds clique complexes with networkx, assembles the weighted coboundary
with numpy and writes tests/data/oracle.json. Graphs come from the CLI
fixture and reduce commands, so only the construction is shared.

    python3 tests/data/oracle.py path/to/homology-lab
"""

import itertools
import json
import math
import subprocess
import sys
import tempfile
from pathlib import Path

import networkx as nx
import numpy as np

GRID = [0.3, 0.25, 0.2, 0.15, 0.1]


def load(doc):
    g = nx.Graph()
    for v in doc["vertices"]:
        g.add_node(v["id"], w=v["w"])
    g.add_edges_from(tuple(e) for e in doc["edges"])
    return g


def cells(g):
    by_dim = {-1: [()]}
    for c in nx.enumerate_all_cliques(g):
        by_dim.setdefault(len(c) - 1, []).append(tuple(sorted(c)))
    return {d: sorted(v) for d, v in by_dim.items()}


def coboundary(g, cs, k, lam):
    """Rows are (k+1)-simplices; entry (-1)^p lam^w(v_p) for the dropped vertex."""
    rows, cols = cs.get(k + 1, []), cs.get(k, [])
    index = {s: i for i, s in enumerate(cols)}
    d = np.zeros((len(rows), len(cols)))
    for r, t in enumerate(rows):
        for p, v in enumerate(t):
            face = t[:p] + t[p + 1:]
            d[r, index[face]] = (-1) ** p * lam ** g.nodes[v]["w"]
    return d


def rank(m):
    if m.size == 0:
        return 0
    return int(np.linalg.matrix_rank(m))


def betti(g):
    cs = cells(g)
    top = max(cs)
    ranks = {k: rank(coboundary(g, cs, k, 1.0)) for k in range(-2, top + 1)}
    return {k: len(cs[k]) - ranks[k] - ranks[k - 1] for k in range(-1, top + 1)}


def laplacian(g, cs, k, lam):
    up = coboundary(g, cs, k, lam)
    down = coboundary(g, cs, k - 1, lam) if k >= 0 else np.zeros((len(cs.get(k, [])), 0))
    return up.T @ up + down @ down.T


def spectrum(g, k, lam):
    cs = cells(g)
    return np.linalg.eigvalsh(laplacian(g, cs, k, lam))


def slope_classes(g, k):
    cs = cells(g)
    table = np.array([np.linalg.eigvalsh(laplacian(g, cs, k, lam)) for lam in GRID])
    x = np.log(GRID)
    out = {}
    for col in table.T:
        if np.all(np.abs(col) < 1e-9):
            key = "kernel"
        else:
            s = np.polyfit(x, np.log(np.maximum(col, 1e-300)), 1)[0]
            key = str(int(round(s / 2) * 2))
        out[key] = out.get(key, 0) + 1
    return out


def thicken(g):
    h = nx.Graph()
    order = sorted(g.nodes)
    for v in order:
        h.add_node(f"{v}@0", w=g.nodes[v]["w"])
        h.add_node(f"{v}@1", w=g.nodes[v]["w"])
        h.add_edge(f"{v}@0", f"{v}@1")
    for u, v in g.edges:
        u, v = sorted((u, v))
        h.add_edge(f"{u}@0", f"{v}@0")
        h.add_edge(f"{u}@1", f"{v}@1")
        h.add_edge(f"{u}@0", f"{v}@1")
    return h


def run(binary, *args):
    return subprocess.run([binary, *args], check=True, capture_output=True, text=True).stdout


def nonzero(b):
    return {str(k): v for k, v in b.items() if v}


def main():
    binary = sys.argv[1]
    out = {}

    q2 = load(json.loads(run(binary, "fixtures", "qubit", "2")))
    cs = cells(q2)
    out["qubit2"] = {"vertices": q2.number_of_nodes(), "edges": q2.number_of_edges(), "c3": len(cs[3]),
                     "betti": nonzero(betti(q2))}

    c4 = load(json.loads(run(binary, "fixtures", "cycle", "4")))
    out["thicken_cycle4_betti"] = nonzero(betti(thicken(c4)))

    k3 = load(json.loads(run(binary, "fixtures", "complete", "3")))
    out["k3_spectrum_k1"] = [round(v, 10) for v in spectrum(k3, 1, 1.0)]

    states = ["|0>", "|1>", "|0>-|1>", "|0>+2|1>", "|00>", "|11>", "|00>-|11>", "|00>+2|11>"]
    out["gadgets"] = {}
    for s in states:
        g = load(json.loads(run(binary, "fixtures", "gadget", s)))
        lam_w = sum(1 for v in g.nodes if g.nodes[v]["w"] == 1)
        out["gadgets"][s] = {"vertices": g.number_of_nodes(), "lambda_vertices": lam_w, "betti": nonzero(betti(g))}

    hexagon = load(json.loads(run(binary, "fixtures", "hexagon")))
    out["hexagon"] = {"counts": [len(v) for _, v in sorted(cells(hexagon).items())],
                      "betti": nonzero(betti(hexagon)), "classes_k1": slope_classes(hexagon, 1)}
    g0 = load(json.loads(run(binary, "fixtures", "gadget", "|0>")))
    out["gadget0_classes_k1"] = slope_classes(g0, 1)
    gm = load(json.loads(run(binary, "fixtures", "gadget", "|0>-|1>")))
    out["gadget_minus_classes_k1"] = slope_classes(gm, 1)

    with tempfile.TemporaryDirectory() as tmp:
        def reduced(ham):
            p = Path(tmp) / "h.json"
            p.write_text(json.dumps(ham))
            return load(json.loads(run(binary, "reduce", str(p))))

        one = reduced({"n": 1, "terms": [{"support": [0], "amps": {"0": 1}}]})
        both = reduced({"n": 1, "terms": [{"support": [0], "amps": {"0": 1}}, {"support": [0], "amps": {"1": 1}}]})
        lam = 0.05
        low = float(spectrum(both, 1, lam)[0])
        out["reduce"] = {
            "one_term_vertices": one.number_of_nodes(),
            "one_term_betti1": betti(one).get(1, 0),
            "two_term_betti1": betti(both).get(1, 0),
            "two_term_lambda_min": low,
            "two_term_E": 0.1 * lam ** 6 / 2,
        }
        padded = {}
        for m, n in [(1, 1), (1, 2), (2, 2)]:
            ham = {"n": n, "terms": [{"support": list(range(m)), "amps": {"0" * m: 1}}]}
            padded[f"{m},{n}"] = betti(reduced(ham)).get(2 * n - 1, 0)
        out["padded_kernel"] = padded

    path = Path(__file__).with_name("oracle.json")
    path.write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")
    print(path.read_text())


if __name__ == "__main__":
    main()
