"""Strip open edges, split into cores, colour each core and put the stripped
edges back.  Run: python3 demos/colouring_pipeline.py"""

# %%
from hyperamsey import constructions as cons
from hyperamsey import ramsey
from hyperamsey.randmodel import SampleSpec, sample

F1, F2 = cons.lifted_triangle(4), cons.tight_cycle(4, 8)
H = sample(SampleSpec(k=4, n=20, p=0.4 * 20 ** (-11 / 21), seed=0, trial_index=0))
print(f"host: {H.v} vertices, {H.e} edges")

# %% open edges lie in no (F1-copy, F2-copy) pair meeting in exactly that edge
cls = ramsey.classify_edges(H, F1, F2)
print(f"{len(cls.open)} open, {len(cls.closed)} closed; certificates check out: {cls.verify()}")

# %% removing open edges can open others; the fixed point does not depend on order
dec = ramsey.decompose(H, F1, F2)
print(f"after stripping: {len(dec.remaining)} edges in {len(dec.cores)} cores, "
      f"{len(dec.removal_stack)} edges on the stack")
orders = {ramsey.strip_open(H, F1, F2, order_seed=s).remaining for s in range(5)}
print("distinct fixed points over 5 random orders:", len(orders))

# %% colour and validate with the independent matcher
res = ramsey.colour(H, F1, F2)
if isinstance(res, ramsey.Colouring):
    print("colouring valid:", ramsey.validate_colouring(H, res, [F1, F2]))
else:
    print("no colouring:", res.stage, res.message)

# %% a small classic for comparison: K5 avoids a monochromatic triangle, K6 does not
K3 = cons.complete_graph(3)
v5 = ramsey.arrow(cons.complete_graph(5), [K3, K3])
print("K5 -> (K3, K3):", v5.arrows, "witness", v5.witness.assignment)
print("K6 -> (K3, K3):", ramsey.arrow(cons.complete_graph(6), [K3, K3]).arrows)
