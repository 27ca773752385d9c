"""The sixteen Boolean pivotal operations and their decomposable classes.

Run with ``python demos/boolean_pivots.py``.  Four of the sixteen fix
``P(x,1,0) = x``; for each we print the unary section ``P(x,0,1)`` and
compare the decomposable functions of arity 1..3 with the monotone ones.
"""

import numpy as np

from pivotal import Domain, enumerate_pivotal, lambda_fragment, monotone_fragment

B = Domain(2)

print("id  table     P(x,1,0)=x  P(x,0,1)")
for k, pi in enumerate(enumerate_pivotal(B)):
    unit = all(pi(x, 1, 0) == x for x in (0, 1))
    section = {(0, 1): "x", (1, 0): "not x", (0, 0): "0", (1, 1): "1"}[(pi(0, 0, 1), pi(1, 0, 1))]
    print(f"{k:>2}  {''.join(map(str, pi.table.tolist()))}  {str(unit):<10}  {section}")

print()
for k, pi in enumerate(enumerate_pivotal(B, require_ex01=True)):
    sizes, kinds = [], []
    for n in (1, 2, 3):
        lam = lambda_fragment(pi, n)
        sizes.append(len(lam))
        if np.array_equal(lam.keys, monotone_fragment(n)):
            kinds.append("monotone")
        elif len(lam) == 2 ** (2**n):
            kinds.append("all")
        else:
            kinds.append("other")
    print(f"pivot {pi.table.tolist()}: sizes {sizes}, {', '.join(sorted(set(kinds)))}")
