"""Decomposing a function by a pivot and reading off its normal form.

Run with ``python demos/normal_forms.py``.
"""

from pivotal import Domain, Operation, builtin, build_normal_form, format_nf, is_pi_decomposable, nf_to_operation, simplify

B = Domain(2)
med, shannon = builtin("med"), builtin("pi1")
conj = Operation(B, 2, [0, 0, 0, 1])
neg = Operation(B, 1, [1, 0])

for name, f in (("x1 and x2", conj), ("not x1", neg)):
    for pname, pi in (("median", med), ("multiplexer", shannon)):
        r = is_pi_decomposable(f, pi)
        if r.member:
            nf = simplify(build_normal_form(f))
            # the expression evaluates back to f under the same pivot
            assert nf_to_operation(nf, pi, f.arity) == f
            print(f"{name} by the {pname}: {format_nf(nf)}")
        else:
            i, x = r.witness
            print(f"{name} by the {pname}: not decomposable (position {i}, tuple {x})")

# a three-argument majority vote, expanded by the median itself
maj = Operation(B, 3, med.table)
print("median by the median:", format_nf(simplify(build_normal_form(maj))))
