# %% Ext, Tor and graded duals
from fpn import F2, F3, Monomial, dual_module, duality_check, example_12_pattern, ext_dims, to_gv, tor_dims
from fpn.modules import free_module, ideal_module, quotient_module

ring = example_12_pattern(F2).truncate(3)
q = quotient_module(ring, Monomial.parse("x1"))
i1 = ideal_module(ring, Monomial.parse("x1"))

# %% Ext^1(R/(x1), (x1)) lives in a single degree
e = ext_dims(q, to_gv(i1, 5), 1, 5)
print({d: k for d, k in e.dims.items() if k}, "total", e.total)

# %% the graded dual mirrors degrees
g = to_gv(free_module(ring), 4)
print(g.dims_list(), dual_module(g).dims_list())

# %% both dualities, degree by degree
rep = duality_check(q, i1, 5)
print(rep.ok, rep.ext_dual, rep.tor)

# %% same over F3
r3 = example_12_pattern(F3).truncate(3)
q3 = quotient_module(r3, Monomial.parse("x2"))
print(tor_dims(q3, to_gv(q3, 5), 1, 5).dims)
