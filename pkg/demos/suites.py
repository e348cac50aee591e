# %% property suites, seeded
from fpn.harness import run_suite

for name in ("schanuel", "duality", "glaz"):
    rep = run_suite(name, seed=1, count=30)
    print(rep.text(), "\n")

# %% a failing law would leave its full instance here
rep.counterexamples
