"""Exact densities of the small patterns, and why the asymmetric value sits
between the two symmetric ones.  Run: python3 demos/densities.py"""

# %%
from hyperamsey import constructions as cons
from hyperamsey import density

F1 = cons.lifted_triangle(4)   # K3 with a shared pair added to every edge
F2 = cons.tight_cycle(4, 8)    # tight 4-uniform cycle on 8 vertices
print("K3+4:", F1.edges)
print("C8:  ", F2.edges)

# %% symmetric densities
for name, F in (("K3+4", F1), ("C8", F2)):
    rep = density.m_k(F)
    print(f"m_4({name}) = {rep.value}, strictly balanced: {density.is_strictly_k_balanced(F)}")

# %% the asymmetric density is the threshold exponent used by every later demo
theta = density.m_k_asym(F1, F2)
print(f"m_4(K3+4, C8) = {theta.value}  (witness edges {theta.witness})")
print("strictly balanced w.r.t. C8:", density.is_strictly_balanced_wrt(F1, F2))
print("ordering:", density.m_k(F2).value, "<", theta.value, "<", density.m_k(F1).value)

# %% the same formula for k = 5, and plain edge density of a lifted clique
print("m_5(K3+5, C14) =", density.m_k_asym(cons.lifted_triangle(5), cons.tight_cycle(5, 14)).value)
print("m(K6+4) =", density.m(cons.plus_lift(cons.complete_graph(6), 4)).value)

# %% both routes to m(H) agree on a random host
from hyperamsey.randmodel import SampleSpec, sample

H = sample(SampleSpec(k=3, n=9, p=0.25, seed=1))
print(f"random 3-graph with {H.e} edges: flow {density.m(H, 'flow').value}, "
      f"exhaustive {density.m(H, 'exhaustive').value}")
