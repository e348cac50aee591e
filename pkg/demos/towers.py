# %% Betti towers over the two infinite-variable example rings
from fpn import F2, example_12_pattern, example_13_pattern, empirical_lambda, tower_betti
from fpn.tower import ideal, quotient, syzygy

p12 = example_12_pattern(F2)
p13 = example_13_pattern(F2)
levels = range(4, 11)

# %% k[x1, x2, ...] with every product x_i x_j killed
rep = tower_betti(p12, ideal("x1"), 3, levels, 8)
rep.ranks(1)  # one new syzygy per extra variable
empirical_lambda(rep)

rep = tower_betti(p12, quotient("x1"), 3, levels, 8)
rep.ranks(2)
print("R/(x1):", empirical_lambda(rep), rep.stability)

# %% chain ring: x_{j+1} x_j, x1 y1 and y1 y_i killed
for g in ("y1", "x1", "x2", "x3"):
    v = empirical_lambda(tower_betti(p13, ideal(g), 5, levels, 8))
    print(f"({g})  lambda-hat {v}")

# %% a syzygy pattern resolves like the ideal it is
empirical_lambda(tower_betti(p13, syzygy(quotient("x1")), 3, levels, 8))

# %% level by level table
for lv, t in zip(rep.levels, rep.tables):
    print(lv, t.ranks)
