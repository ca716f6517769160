"""Print the headline quantities of the built-in fixtures as a table."""
from fractions import Fraction

from matroid_modulus import (covering_value, density_theta, fractional_arboricity, fulkerson_blocker, mod2,
                             packing_value, strength)
from matroid_modulus.formats import FIXTURES

COLUMNS = ("name", "|E|", "r", "Mod2", "MEO", "S", "tau", "theta", "upsilon", "D", "|Theta|")


def row(name, m):
    res = mod2(m)
    vals = (len(m.ground), m.full_rank, res.mod_value, res.meo, strength(m).value, packing_value(m).value,
            density_theta(m), covering_value(m).value, fractional_arboricity(m).value, len(fulkerson_blocker(m)))
    return [name] + [str(Fraction(v)) for v in vals]


def main():
    rows = [COLUMNS] + [row(name, make()) for name, make in FIXTURES.items()]
    widths = [max(len(r[i]) for r in rows) for i in range(len(COLUMNS))]
    for r in rows:
        print("  ".join(cell.rjust(w) for cell, w in zip(r, widths)))


if __name__ == "__main__":
    main()
