"""Two loops at one vertex: semiprime but not prime.

R is spanned by the powers of a and the powers of b.  The script classifies
it, prints the prime witness and re-checks the witness with the linear wedge.

    python3 demos/two_powers.py
"""

from pathlib import Path

from pathcoalg import Subspace, enumerate_paths, prime, semiprime, truncate, wedge_linear
from pathcoalg.cli import parse

N = 8
ws = parse((Path(__file__).parent / "workspaces" / "two_powers.json").read_text())
r = ws.main

print("semiprime:", semiprime(r, N).verdict, "by", semiprime(r, N).rule)
v = prime(r, N)
print("prime:    ", v.verdict, "by", v.rule)
for key in ("A", "B"):
    print(f"  {key} up to length 3:", [str(p) for p in enumerate_paths(v.witness[key], 3)])

ct = truncate(r, N)
span = lambda m: Subspace.span_paths(r.quiver, N, enumerate_paths(m, N))
w = wedge_linear(span(v.witness["A"]), span(v.witness["B"]), ct)
print(f"A∧B covers R up to length {N}:", ct.space <= w)
print(f"dim R_{N} = {ct.space.dim}, dim A∧B = {w.dim}")
