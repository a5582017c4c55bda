import random
from fractions import Fraction

import pytest

from reeb import ForestError, LinkCutForest, NaiveDynForest, make_forest
from reeb.unionfind import UnionFind


def kruskal_max(nodes, edges):
    """Maximum-weight spanning forest weight by sorting; weights distinct."""
    uf = UnionFind()
    for x in nodes:
        uf.add(x)
    total = Fraction(0)
    for (a, b), w in sorted(edges.items(), key=lambda kv: kv[1], reverse=True):
        if uf.find(a) != uf.find(b):
            uf.union(a, b)
            total += w
    return total


def partition(nodes, find):
    groups = {}
    for x in nodes:
        groups.setdefault(find(x), set()).add(x)
    return sorted(frozenset(s) for s in groups.values())


def drive(kind, seed, steps, max_nodes, check_every=1):
    """Random contract-respecting op stream: edges carry their scheduled
    deletion time as weight, and deletions always take the minimum-weight
    alive edge, so weights leave in nondecreasing order."""
    rng = random.Random(seed)
    forest = make_forest(kind)
    alive = {}                      # frozen pair -> weight
    nodes = []
    clock = Fraction(0)
    serial = 0

    for step in range(steps):
        ops = ["insert", "insert", "query"]
        if alive:
            ops.append("delete")
        if len(nodes) < max_nodes:
            ops += ["add"] * 2
        op = rng.choice(ops)

        if op == "add" or len(nodes) < 2:
            x = f"n{len(nodes)}"
            forest.add_node(x)
            nodes.append(x)
        elif op == "insert":
            a, b = rng.sample(nodes, 2)
            if frozenset((a, b)) in alive:
                continue
            serial += 1
            w = clock + rng.randint(1, 30) + Fraction(serial, 10 ** 6)
            forest.insert(a, b, w)
            alive[frozenset((a, b))] = w
        elif op == "delete":
            pair = min(alive, key=alive.get)
            w = alive.pop(pair)
            clock = max(clock, w)
            a, b = sorted(pair)
            forest.delete(a, b)
        # query op: nothing to mutate, the checks below are the query

        if step % check_every:
            continue
        uf = UnionFind()
        for x in nodes:
            uf.add(x)
        for a, b in alive:
            uf.union(a, b)
        assert partition(nodes, forest.find) == partition(nodes, uf.find), \
            (kind, seed, step)
        kept = forest.forest_edges()
        assert all(frozenset(p) in alive for p in kept)
        got = sum(alive[frozenset(p)] for p in kept)
        assert got == kruskal_max(nodes, alive), (kind, seed, step)
    return len(nodes), len(alive)


@pytest.mark.parametrize("kind", ["naive", "lct"])
def test_forest_matches_brute_force(kind):
    for seed in (1, 2, 3):
        drive(kind, seed, steps=400, max_nodes=30)


@pytest.mark.parametrize("kind", ["naive", "lct"])
def test_tie_weights_within_a_batch(kind):
    # equal-weight edges may be deleted in any order as long as the whole
    # batch goes before the next query
    forest = make_forest(kind)
    for x in "abc":
        forest.add_node(x)
    w = Fraction(5)
    forest.insert("a", "b", w)
    forest.insert("b", "c", w)
    forest.insert("a", "c", w)         # discarded: cycle min equals weight
    forest.delete("a", "b")
    forest.delete("b", "c")
    forest.delete("a", "c")
    assert not forest.connected("a", "b")
    assert forest.forest_edges() == set()


@pytest.mark.parametrize("kind", ["naive", "lct"])
def test_basic_shape(kind):
    forest = make_forest(kind)
    for x in ("a", "b", "c", "d"):
        forest.add_node(x)
    assert forest.insert("a", "b", Fraction(3))
    assert forest.insert("c", "d", Fraction(4))
    assert not forest.connected("a", "c")
    assert forest.insert("b", "c", Fraction(5))
    assert forest.connected("a", "d")
    # closing a cycle with a heavier edge swaps out the cycle minimum
    assert forest.insert("a", "d", Fraction(6))
    assert not forest.has_edge("a", "b")
    assert forest.connected("a", "b")
    # and with a lighter one leaves the forest alone
    assert not forest.insert("a", "c", Fraction(2))
    assert forest.component("a") == frozenset("abcd")


@pytest.mark.parametrize("kind", ["naive", "lct"])
def test_error_paths(kind):
    forest = make_forest(kind)
    forest.add_node("a")
    with pytest.raises(ForestError):
        forest.add_node("a")
    forest.add_node("b")
    forest.insert("a", "b", Fraction(1))
    with pytest.raises(ForestError):
        forest.insert("a", "b", Fraction(2))
    with pytest.raises(ForestError):
        forest.remove_node("a")
    forest.delete("a", "b")
    forest.delete("a", "b")            # absent edges are ignored
    forest.remove_node("a")
    assert not forest.has_node("a")


def test_make_forest_kinds():
    assert isinstance(make_forest("lct"), LinkCutForest)
    assert isinstance(make_forest("naive"), NaiveDynForest)
    with pytest.raises(ValueError):
        make_forest("other")


def test_min_weight_names_the_edge():
    for kind in ("naive", "lct"):
        forest = make_forest(kind)
        for x in ("a", "b", "c"):
            forest.add_node(x)
        forest.insert("a", "b", Fraction(7))
        forest.insert("b", "c", Fraction(2))
        forest.evert("a")
        node, w = forest.min_weight("c")
        assert w == Fraction(2)
