"""Three-element pivots whose decomposable class is not generated by the pivot.

Run with ``python demos/three_element_tables.py``.  For each table we check
the two equations that matter for clone-ness, whether the table decomposes
itself, and whether its decomposable functions of arity <= 2 compose.
"""

from pivotal import builtin, check_identity, clone_certificate, is_self_decomposable

for name in ("example3elem", "negation-compatible", "delta-zero"):
    pi = builtin(name)
    d = pi.domain
    print(f"{name}  (zero={d.zero}, one={d.one})")
    # row y, column z, each cell lists P(0,y,z) P(1,y,z) P(2,y,z)
    cube = pi.table.reshape(3, 3, 3)
    for y in range(3):
        print("   ", " ".join("".join(map(str, cube[:, y, z])) for z in range(3)))
    for ident in ("ex01", "ex04"):
        r = check_identity(pi, ident)
        print(f"  {ident}: {'holds' if r.holds else f'fails at {r.witness}'}")
    sd = is_self_decomposable(pi)
    print(f"  decomposes itself: {sd.member}" + ("" if sd.member else f" (position {sd.witness[0]}, tuple {sd.witness[1]})"))
    cert = clone_certificate(pi, 2)
    c = cert.closure
    print(f"  decomposable sizes {cert.lambda_sizes}, closed under composition: {c.closed}")
    if c.counterexample is not None:
        outer, inner = c.counterexample
        print(f"    {outer.table.tolist()} applied to {[g.table.tolist() for g in inner]} leaves the class")
    print(f"  verdict: {cert.verdict}{' (equations hold but closure fails)' if cert.conflict else ''}")
    print()
