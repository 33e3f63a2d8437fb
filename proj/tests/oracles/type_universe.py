"""Size of the judgment-type universe at card 2, pool 2, depth 3, and its
orbits under swapping the two type variables.

Depth: variables and [] have depth 1, a multitype one more than its
deepest element, an arrow M -> c one more than the deeper of M and c."""
from itertools import combinations_with_replacement as cwr

DEPTH, CARD = 3, 2


def multisets(base):
    return [tuple(sorted(m)) for n in range(CARD + 1) for m in cwr(sorted(base), n)]


level = {1: [("v", "a"), ("v", "b"), ("m", ())]}
for d in range(2, DEPTH + 1):
    s = set(level[d - 1])
    for m in multisets(level[d - 1]):
        s.add(("m", m))
    domains = [()] if d == 2 else multisets(level[d - 2])
    for m in domains:
        for c in level[d - 1]:
            s.add(("a", m, c))
    level[d] = sorted(s)


def swap(t):
    if t[0] == "v":
        return ("v", "b" if t[1] == "a" else "a")
    if t[0] == "m":
        return ("m", tuple(sorted(swap(e) for e in t[1])))
    return ("a", tuple(sorted(swap(e) for e in t[1])), swap(t[2]))


if __name__ == "__main__":
    types = level[DEPTH]
    orbits = {min(t, swap(t)) for t in types}
    multi_orbits = {o for o in orbits if o[0] == "m"}
    print(len(types), len(orbits), len(multi_orbits))
    # x has one typing per orbit of the universe in B, and one per orbit
    # of multitypes in V.
    assert (len(types), len(orbits), len(multi_orbits)) == (288, 167, 81)
