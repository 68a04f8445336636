"""Independent brute-force oracles. Nothing here imports the code under test's algorithms."""

from itertools import combinations


def all_subsets(items):
    items = list(items)
    for k in range(len(items) + 1):
        yield from (frozenset(c) for c in combinations(items, k))


def brute_minimal_covers(nodes, i):
    """Inclusion-minimal helper sets for node ``i`` (1-based) by checking every subset."""
    own = set(nodes[i - 1])
    others = [j for j in range(1, len(nodes) + 1) if j != i]
    coverable = {p for p in own if any(p in nodes[j - 1] for j in others)}

    def covers(s):
        got = set()
        for j in s:
            got.update(nodes[j - 1])
        return coverable <= got

    covering = [s for s in all_subsets(others) if covers(s)]
    return {s for s in covering if not any(covers(s - {x}) for x in s)}


def hall_condition(nodes, i):
    """True iff each distinct packet of node ``i`` can get its own helper (Hall's theorem)."""
    own = sorted(set(nodes[i - 1]))
    holders = {p: {j for j in range(1, len(nodes) + 1) if j != i and p in nodes[j - 1]} for p in own}
    for group in all_subsets(own):
        if group:
            neighbourhood = set().union(*(holders[p] for p in group))
            if len(neighbourhood) < len(group):
                return False
    return True


def brute_min_k(nodes, need):
    n = len(nodes)
    for k in range(1, n + 1):
        if all(len(set().union(*(set(nodes[j]) for j in c))) >= need for c in combinations(range(n), k)):
            return k
    return n + 1


def bitwise_gf_mul(a, b, poly=0x11D):
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & 0x100:
            a ^= poly
    return r


def chi_by_definition(bits, n, theta):
    """Apply the chi rule position by position, with explicit residue handling."""
    nodes = [[] for _ in range(n)]
    for m in range(1, len(bits) + 1):
        if bits[m - 1] == 1:
            node = m % n or n
            packet = m % theta or theta
            nodes[node - 1].append(packet)
    return nodes
