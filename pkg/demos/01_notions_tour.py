"""Tour of the negative-dependence notions on a few small measures.

Each checker returns a verdict plus a machine-checkable certificate when
the notion fails: a covariance pair, a conditioning event, a down-closed
set whose mass moves the wrong way, and so on.
"""

import json

from negdep import (
    check_cna,
    check_cylinder,
    check_neg_association,
    check_neg_regression,
    check_pairwise_nc,
    check_stochastic_covering,
    family_anti_pair,
    family_nand,
    family_pos_pair,
    rayleigh_falsify,
)

CHECKS = [
    check_pairwise_nc,
    check_cylinder,
    check_neg_association,
    check_neg_regression,
    check_cna,
    check_stochastic_covering,
    rayleigh_falsify,
]


def tour(name, m):
    print(f"--- {name} (n={m.n}) ---")
    for check in CHECKS:
        rep = check(m)
        line = f"  {rep.notion.value:<20} {rep.verdict.value}"
        if not rep.ok and rep.certificate is not None:
            line += f"   {json.dumps(rep.certificate)}"
        print(line)
    print()


def main():
    tour("nand(3): uniform on strings with no adjacent 11", family_nand(3))
    tour("anti-pair: perfectly anti-correlated bits", family_anti_pair())
    tour("pos-pair: perfectly correlated bits (the foil)", family_pos_pair())


if __name__ == "__main__":
    main()
