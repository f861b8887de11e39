"""Localizing A3 at the outer vertices.

Keeping vertices 1 and 3 of 1 -> 2 -> 3 leaves a single cell, the path
beta.alpha, which becomes the only arrow of the localized quiver.

    python3 demos/localization.py
"""

from pathcoalg import (LocalizationSpec, MonomialCoalgebra, Quiver, coassoc_check,
                       localize_monomial, localize_quiver, to_localized, to_dot)

a3 = Quiver(["1", "2", "3"], [("alpha", "1", "2"), ("beta", "2", "3")])
spec = LocalizationSpec(["1", "3"])

lq = localize_quiver(a3, spec)
print("localized quiver arrows:", [(a.id, a.src, a.tgt) for a in lq.arrows])

loc = localize_monomial(MonomialCoalgebra.full(a3), spec, 4)
print("basis:", sorted(str(p) for p in loc.space.paths()))
ba = a3.path("beta", "alpha")
for (left, right), c in sorted(loc.delta({ba: 1}).items(), key=str):
    print(f"  Δ(beta*alpha) has {c} * {left} ⊗ {right}")
print("image in the localized quiver:", to_localized(ba, a3, spec.keep))
print("coassociative:", coassoc_check(loc))
print()
print(to_dot(lq))
