"""Independent definition evaluators used as test oracles.

Pure-Python literal evaluations of every error-measure definition, kept
deliberately separate from the library implementations they check.
"""


def brute_displacement(p, q):
    return [abs(q[i] - p[i]) for i in range(len(p))]


def brute_one_sided(p, q):
    n = len(p)
    left = [sum(1 for j in range(n) if q[j] <= q[i] and p[j] > p[i]) for i in range(n)]
    right = [sum(1 for j in range(n) if q[j] >= q[i] and p[j] < p[i]) for i in range(n)]
    return left, right


def brute_global_d(p, q):
    n = len(p)
    return sum(1 for i in range(n) for j in range(n) if p[i] < p[j] and q[i] >= q[j])


def brute_dirty(items, truth, oracle):
    """Literal n(n-1)/2 pair queries against the true order."""
    n = len(items)
    eta = [0] * n
    for a in range(n):
        for b in range(a + 1, n):
            i, j = items[a][1], items[b][1]
            true_less = truth[a] < truth[b]
            if oracle.query(i, j) != true_less:
                eta[a] += 1
                eta[b] += 1
    return eta


def brute_sorted_ranks(keys):
    """Ranks via brute-force sort and index lookup."""
    order = sorted(range(len(keys)), key=lambda k: (keys[k], k))
    ranks = [0] * len(keys)
    for pos, k in enumerate(order):
        ranks[k] = pos + 1
    return ranks
