"""
Grover search
=============

The marked-set probability after k iterations follows
sin^2((2k + 1) asin(sqrt(M / N))) exactly.
"""

import numpy as np

from nuqft.search import SearchProblem, grover_search, grover_trajectory, marked_probability

p = SearchProblem(1024, frozenset({42}))
for k, s in enumerate(grover_trajectory(p)):
    if k % 5 == 0:
        print(k, round(marked_probability(s, p), 6))
print(grover_search(p))

# the marker is pluggable: mark the large coefficients of a spectrum
X = np.abs(np.fft.fft(np.random.default_rng(0).normal(size=64)))
q = SearchProblem.from_predicate(X, lambda v: v > 14)
print(q.M, "marked;", grover_search(q))
