"""Counts of alpha classes of terms by size, by a recurrence over the
number of binders in scope. Prints the cumulative counts used by
test_syntax.cpp and checks them."""
from functools import lru_cache

FREE = 2


@lru_cache(maxsize=None)
def count(n, k, bangs):
    if n == 1:
        return FREE + k
    total = count(n - 1, k + 1, bangs)  # abstraction
    for a in range(1, n - 1):
        total += count(a, k, bangs) * count(n - 1 - a, k, bangs)      # application
        total += count(a, k + 1, bangs) * count(n - 1 - a, k, bangs)  # closure
    if bangs:
        total += 2 * count(n - 1, k, bangs)  # bang, der
    return total


def cumulative(bound, bangs):
    return sum(count(n, 0, bangs) for n in range(1, bound + 1))


EXPECTED_TERMS = [2, 9, 43, 234, 1406, 9080, 61882, 440138]
EXPECTED_CTERMS = [2, 5, 19, 74, 342, 1712, 9130, 51606]

if __name__ == "__main__":
    terms = [cumulative(b, True) for b in range(1, 9)]
    cterms = [cumulative(b, False) for b in range(1, 9)]
    print("terms ", terms)
    print("cterms", cterms)
    assert terms == EXPECTED_TERMS
    assert cterms == EXPECTED_CTERMS
