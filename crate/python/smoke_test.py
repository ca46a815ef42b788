"""Smoke test for the invlab extension. Run after `pip install --no-build-isolation -e crates/py`."""

import itertools
import json

import networkx as nx

import invlab


def dag(g):
    d = nx.DiGraph()
    d.add_nodes_from(range(g.n))
    d.add_edges_from(g.arcs())
    return nx.is_directed_acyclic_graph(d)


def main():
    tt = invlab.transitive_tournament(9)
    assert tt.is_tournament() and dag(tt)
    assert invlab.is_invertible(tt, 3)

    g = invlab.Graph(3, [(0, 1), (1, 2), (2, 0)])
    assert not dag(g)
    flipped = g.invert([0, 1, 2])
    assert sorted(flipped.arcs()) == [(0, 2), (1, 0), (2, 1)]
    assert invlab.Graph.from_json(g.to_json()) == g
    assert invlab.Graph.from_dot(g.to_dot()) == g

    for seed in range(5):
        t = invlab.random_tournament(9, seed)
        for strategy in ("fas", "2fas", "dense", "opt-dense"):
            family, info = invlab.decycle(t, 4, strategy)
            assert all(len(s) == 4 for s in family.sets)
            assert len(family) <= info["bound"]
            assert dag(t.apply(family)), (seed, strategy)
            assert invlab.verify(t, family)["acyclic"]

    small = invlab.random_tournament(5, 1)
    k = invlab.exact_inv(small, 3)
    if k is not None:
        hits = [
            fam
            for fam in itertools.combinations_with_replacement(itertools.combinations(range(5), 3), k)
            if dag(small.apply(invlab.Family(3, [list(s) for s in fam])))
        ]
        assert hits
        if k > 0:
            shorter = itertools.combinations_with_replacement(itertools.combinations(range(5), 3), k - 1)
            assert not any(dag(small.apply(invlab.Family(3, [list(s) for s in fam]))) for fam in shorter)

    kernel = invlab.kernelize(invlab.random_tournament(60, 3), 3, 1)
    assert kernel["status"] in {"Reduced", "NoInstance", "Stuck", "AlreadySmall"}
    json.dumps(kernel)

    try:
        invlab.exact_inv(invlab.random_tournament(9, 0), 3, cap_bits=5)
    except invlab.CapacityError:
        pass
    else:
        raise AssertionError("expected CapacityError")
    try:
        invlab.Graph.from_json("{")
    except invlab.InputError:
        pass
    else:
        raise AssertionError("expected InputError")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
