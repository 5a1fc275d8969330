"""Why adaptivity matters: a fixed schedule can have huge first steps.

On the nand family with f = x1 + ... + xn, revealing variables in index
order makes the very first conditional expectation jump by
(n-3)/2 + 2^(1-n), which grows linearly in n.  The adaptive rule keeps
every step's interval width at 1 on the same inputs.  So bounded
differences for a fixed schedule cannot be salvaged by reordering alone;
the order has to depend on the observed bits.
"""

from fractions import Fraction

from negdep import (
    build_adaptive_tree,
    build_skeleton,
    family_nand,
    fixed_order_tree,
    max_step,
    root_step,
    sum_function,
)


def main():
    print(f"{'n':>3}  {'fixed first step':>18}  {'formula':>18}  "
          f"{'adaptive max step':>18}")
    for n in range(3, 11):
        m = family_nand(n)
        f = sum_function(n)
        fixed = fixed_order_tree(m, f)
        formula = Fraction(n - 3, 2) + Fraction(1, 2 ** (n - 1))
        adaptive = build_adaptive_tree(m, f, skeleton=build_skeleton(m))
        first = root_step(fixed)
        assert first == formula
        print(f"{n:>3}  {str(first):>18}  {str(formula):>18}  "
              f"{str(max_step(adaptive)):>18}")
    print("\nfixed first step grows like n/2; adaptive steps never exceed 1")


if __name__ == "__main__":
    main()
