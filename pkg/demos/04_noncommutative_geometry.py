"""Cyclic forms, Darboux coordinates, scalar products and representation spaces."""
import random

from ainfty.fixtures import dual_numbers
from ainfty.io import form_to_dict
from ainfty.ncgeometry import (NCSpace, RepSpace, Substitution, darboux_normalize, rep_space_transfer,
                               scalar_product_check, symplectic_check)

sp = NCSpace((0, 0), ("x", "y"))
x, dx, y, dy = (0, 0), (0, 1), (1, 0), (1, 1)


def show(f):
    return form_to_dict(sp, f)["terms"]


# Cyclic words: xy and yx are the same function on the non-commutative plane.
print("xy - yx is cyclically zero:", sp.cyclic({(x, y): 1, (y, x): -1}) == {})
print("d_cycl(xy) =", show(sp.d_cycl({(x, y): 1})))
print("phi(x dy) = [x, y]:", show(sp.phi({(x, dy): 1})))

# Bend the constant symplectic form with a random change of coordinates.  Darboux
# normalization finds coordinates in which it is constant again.
omega0 = {(dx, dy): 1}
rng = random.Random(7)
bend = Substitution(sp, {i: sp.random_series(rng, 2, 3, 2) for i in range(2)}, 6)
omega = sp.cyclic(bend.pullback(omega0))
print("\nbent form has", len(omega), "terms;", symplectic_check(sp, omega))
r = darboux_normalize(sp, omega, 6)
print("Darboux steps:", r.steps, " normalized back to omega0:", r.verified, " inverse checked:", r.inverse_verified)

# A Frobenius pairing on the dual numbers is a cyclic scalar product.
print("\nscalar product on D:", scalar_product_check(dual_numbers(paired=True)).as_dict())

# On 2x2 matrices the trace of a commutator vanishes and the bent form stays symplectic.
R = RepSpace(sp, 2)
print("\ntr([x, y]) on 2x2 matrices:", R.trace(sp.commutator({(x,): 1}, {(y,): 1})))
t = rep_space_transfer(sp, omega, 2)
print("transferred form: closed", t.closed, " nondegenerate", t.nondegenerate, " terms", t.terms)
