import random
from fractions import Fraction

import pytest

from negdep.bitops import mask_from_bits
from negdep.coupling import is_down_closed
from negdep.dependence import (
    NOTION_IMPLICATIONS,
    GeneratingPolynomial,
    Notion,
    Verdict,
    check_cna,
    check_cylinder,
    check_neg_association,
    check_neg_regression,
    check_pairwise_nc,
    check_stochastic_covering,
    covariance,
    default_rayleigh_grid,
    rayleigh_falsify,
    upset_indicator_cov,
)
from negdep.errors import DimensionMismatch, TooLarge
from negdep.measure import (
    Assignment,
    family_anti_pair,
    family_balls_bins,
    family_hadamard,
    family_independent,
    family_nand,
    family_pos_pair,
    parse_rational,
)
from negdep.zoo import random_measure

HALF = Fraction(1, 2)


# -- pairwise negative correlation ------------------------------------------


def test_nc_anti_pair_holds_with_worst_pair():
    rep = check_pairwise_nc(family_anti_pair())
    assert rep.verdict is Verdict.HOLDS
    assert rep.certificate is None
    assert rep.work_stats["worst_pair"] == [1, 2]
    assert parse_rational(rep.work_stats["worst_covariance"]) == Fraction(-1, 4)


def test_nc_pos_pair_fails():
    rep = check_pairwise_nc(family_pos_pair())
    assert rep.verdict is Verdict.FAILS
    assert rep.certificate == {"i": 1, "j": 2, "covariance": "1/4"}
    assert not rep.ok


def test_nc_hadamard_holds_at_zero():
    rep = check_pairwise_nc(family_hadamard(4))
    assert rep.verdict is Verdict.HOLDS
    assert parse_rational(rep.work_stats["worst_covariance"]) == 0


def test_nc_requires_two_variables():
    one = family_independent([HALF])
    with pytest.raises(DimensionMismatch):
        check_pairwise_nc(one)


def test_covariance_matches_definition():
    m = family_nand(4)
    for i in range(1, 5):
        for j in range(i + 1, 5):
            pij = sum(
                (p for x, p in m.items() if x >> (i - 1) & 1 and x >> (j - 1) & 1),
                Fraction(0),
            )
            pi = m.mean_vector()[i - 1]
            pj = m.mean_vector()[j - 1]
            assert covariance(m, i, j) == pij - pi * pj


# -- cylinder dependence -----------------------------------------------------


def test_cylinder_nand_holds():
    rep = check_cylinder(family_nand(3))
    assert rep.verdict is Verdict.HOLDS
    assert rep.certificate is None


def test_cylinder_pos_pair_fails_on_ones():
    rep = check_cylinder(family_pos_pair())
    assert rep.verdict is Verdict.FAILS
    cert = rep.certificate
    assert cert["S"] == [1, 2]
    assert cert["side"] == "ones"
    assert parse_rational(cert["lhs"]) == HALF
    assert parse_rational(cert["rhs"]) == Fraction(1, 4)


def test_cylinder_certificate_recomputes():
    rep = check_cylinder(family_pos_pair())
    cert = rep.certificate
    m = family_pos_pair()
    S = cert["S"]
    means = m.mean_vector()
    lhs = sum(
        (
            p
            for x, p in m.items()
            if all(x >> (i - 1) & 1 for i in S)
        ),
        Fraction(0),
    )
    rhs = Fraction(1)
    for i in S:
        rhs *= means[i - 1]
    assert parse_rational(cert["lhs"]) == lhs
    assert parse_rational(cert["rhs"]) == rhs
    assert lhs > rhs


def test_cylinder_independent_holds_with_equality():
    rep = check_cylinder(family_independent([Fraction(1, 3), HALF, Fraction(2, 3)]))
    assert rep.verdict is Verdict.HOLDS


# -- negative association ----------------------------------------------------


def test_na_holds_on_anti_and_balls_bins():
    assert check_neg_association(family_anti_pair()).verdict is Verdict.HOLDS
    assert check_neg_association(family_balls_bins(2, 2)).verdict is Verdict.HOLDS


def test_na_pos_pair_fails_with_witness():
    rep = check_neg_association(family_pos_pair())
    assert rep.verdict is Verdict.FAILS
    cert = rep.certificate
    assert cert["I"] == [1]
    assert cert["J"] == [2]
    assert cert["A"] == ["1"]
    assert cert["B"] == ["1"]
    assert parse_rational(cert["covariance"]) == Fraction(1, 4)


def test_na_certificate_recomputes():
    m = family_pos_pair()
    cert = check_neg_association(m).certificate
    cov = upset_indicator_cov(
        m,
        cert["I"],
        [mask_from_bits(b) for b in cert["A"]],
        cert["J"],
        [mask_from_bits(b) for b in cert["B"]],
    )
    assert cov == parse_rational(cert["covariance"])
    assert cov > 0


def test_na_single_variable_vacuous():
    rep = check_neg_association(family_independent([HALF]))
    assert rep.verdict is Verdict.HOLDS


def test_na_cap_enforced():
    with pytest.raises(TooLarge):
        check_neg_association(family_nand(9))


# -- conditional negative association ---------------------------------------


def test_cna_holds_on_nand():
    for n in (3, 4, 6):
        assert check_cna(family_nand(n)).verdict is Verdict.HOLDS


def test_cna_pos_pair_fails_at_empty_conditioning():
    rep = check_cna(family_pos_pair())
    assert rep.verdict is Verdict.FAILS
    cert = rep.certificate
    assert cert["K"] == []
    assert cert["values"] == ""
    assert cert["I"] == [1] and cert["J"] == [2]
    assert parse_rational(cert["covariance"]) == Fraction(1, 4)


def test_cna_finds_conditional_violation():
    # NA at the top level but positively correlated once X1 = 0 is
    # revealed: Cov[X2, X3 | X1=0] = 3/11 - (5/11)(6/11) = 3/121 > 0.
    from negdep.measure import new_explicit

    m = new_explicit(
        3,
        [
            ("000", Fraction(3, 23)),
            ("100", Fraction(4, 23)),
            ("010", Fraction(2, 23)),
            ("110", Fraction(4, 23)),
            ("001", Fraction(3, 23)),
            ("101", Fraction(4, 23)),
            ("011", Fraction(3, 23)),
        ],
    )
    top = check_neg_association(m)
    assert top.verdict is Verdict.HOLDS
    rep = check_cna(m)
    assert rep.verdict is Verdict.FAILS
    cert = rep.certificate
    assert cert["K"] == [1]
    assert cert["values"] == "0"
    # indices in the inner witness refer to the original variables
    assert cert["I"] == [2]
    assert cert["J"] == [3]
    assert parse_rational(cert["covariance"]) == Fraction(3, 121)
    # recompute the conditional covariance from scratch
    c = m.condition(Assignment.of({1: 0}))
    assert covariance(c, 1, 2) == Fraction(3, 121)


# -- negative regression -----------------------------------------------------


def test_nr_nand_holds():
    for n in (3, 4, 5):
        rep = check_neg_regression(family_nand(n))
        assert rep.verdict is Verdict.HOLDS, n


def test_nr_pos_pair_fails():
    rep = check_neg_regression(family_pos_pair())
    assert rep.verdict is Verdict.FAILS
    cert = rep.certificate
    assert cert["J"] == [1]
    assert cert["a"] == "0"
    assert cert["b"] == "1"
    assert cert["free_indices"] == [2]
    assert cert["down_set"] == ["0"]
    assert parse_rational(cert["lower_mass"]) == 0
    assert parse_rational(cert["upper_mass"]) == 1


def test_nr_hadamard4_fails():
    rep = check_neg_regression(family_hadamard(4))
    assert rep.verdict is Verdict.FAILS
    assert rep.certificate is not None


def recheck_nr_certificate(m, cert):
    """The certificate names two adjacent conditionings; the law at the
    higher one must put strictly less mass on the down-set."""
    J = cert["J"]
    a_bits = cert["a"]
    b_bits = cert["b"]
    lower_law = m.condition(
        Assignment.of({j: int(b_bits[t]) for t, j in enumerate(J)})
    )
    upper_law = m.condition(
        Assignment.of({j: int(a_bits[t]) for t, j in enumerate(J)})
    )
    down = [mask_from_bits(b) for b in cert["down_set"]]
    assert is_down_closed(down, lower_law.n)
    lm = sum((lower_law.prob(x) for x in down), Fraction(0))
    um = sum((upper_law.prob(x) for x in down), Fraction(0))
    assert lm == parse_rational(cert["lower_mass"])
    assert um == parse_rational(cert["upper_mass"])
    assert lm < um


def test_nr_certificates_recompute():
    for m in (family_pos_pair(), family_hadamard(4), family_hadamard(8)):
        rep = check_neg_regression(m)
        assert rep.verdict is Verdict.FAILS
        recheck_nr_certificate(m, rep.certificate)


def test_nr_cap_enforced():
    with pytest.raises(TooLarge):
        check_neg_regression(family_nand(11))


# -- stochastic covering -----------------------------------------------------


def test_sc_nand3_fails_with_hall_witness():
    rep = check_stochastic_covering(family_nand(3))
    assert rep.verdict is Verdict.FAILS
    cert = rep.certificate
    assert cert["I"] == [1]
    assert cert["a"] == "1"
    assert cert["a_prime"] == "0"
    assert cert["free_indices"] == [2, 3]
    assert cert["block"] == ["00"]
    assert cert["neighborhood"] == []
    assert parse_rational(cert["lower_mass"]) == Fraction(1, 3)
    assert parse_rational(cert["upper_mass"]) == 0


def test_sc_certificate_recomputes():
    m = family_nand(3)
    cert = check_stochastic_covering(m).certificate
    I = cert["I"]
    high = m.condition(Assignment.of({i: int(cert["a"][t]) for t, i in enumerate(I)}))
    low = m.condition(
        Assignment.of({i: int(cert["a_prime"][t]) for t, i in enumerate(I)})
    )
    block = [mask_from_bits(b) for b in cert["block"]]
    dim = low.n
    hood = {
        y
        for y, _ in low.items()
        if any(x & ~y == 0 and (x ^ y).bit_count() <= 1 for x in block)
    }
    assert hood == {mask_from_bits(b) for b in cert["neighborhood"]}
    lm = sum((high.prob(x) for x in block), Fraction(0))
    um = sum((low.prob(y) for y in hood), Fraction(0))
    assert lm == parse_rational(cert["lower_mass"])
    assert um == parse_rational(cert["upper_mass"])
    assert lm > um


def test_sc_holds_on_anti_and_independent():
    assert check_stochastic_covering(family_anti_pair()).verdict is Verdict.HOLDS
    assert (
        check_stochastic_covering(family_independent([HALF] * 3)).verdict
        is Verdict.HOLDS
    )


# -- Rayleigh falsifier ------------------------------------------------------


def test_rayleigh_pos_pair_violation_at_origin():
    m = family_pos_pair()
    rep = rayleigh_falsify(m)
    assert rep.verdict is Verdict.VIOLATION_FOUND
    cert = rep.certificate
    assert cert["i"] == 1 and cert["j"] == 2
    assert parse_rational(cert["delta"]) == Fraction(-1, 4)
    # the difference is constant in z for a pair, so it is -1/4 at the
    # origin as well
    poly = GeneratingPolynomial.of(m)
    assert poly.rayleigh_difference(1, 2, (Fraction(0), Fraction(0))) == Fraction(
        -1, 4
    )


def test_rayleigh_anti_and_independent_clean():
    assert rayleigh_falsify(family_anti_pair()).verdict is Verdict.NO_VIOLATION_FOUND
    assert (
        rayleigh_falsify(family_independent([HALF])).verdict
        is Verdict.NO_VIOLATION_FOUND
    )


def test_generating_polynomial_normalized():
    poly = GeneratingPolynomial.of(family_nand(3))
    assert poly.evaluate((Fraction(1), Fraction(1), Fraction(1))) == 1


def test_default_grid_small_n_is_lattice():
    grid = default_rayleigh_grid(2)
    assert len(grid) == 25
    assert (Fraction(0), Fraction(0)) in grid


def test_default_grid_large_n_is_seeded_sample():
    g1 = default_rayleigh_grid(6)
    g2 = default_rayleigh_grid(6)
    assert g1 == g2
    assert len(g1) == 1000


def test_rayleigh_difference_formula():
    # delta_ij = G10 G01 - G00 G11 where Gab fixes z_i = a, z_j = b
    m = family_nand(3)
    poly = GeneratingPolynomial.of(m)
    z = (Fraction(2), Fraction(-1), Fraction(1, 2))

    def G(zi, zj):
        return poly.evaluate((zi, zj, z[2]))

    expect = G(Fraction(1), Fraction(0)) * G(Fraction(0), Fraction(1)) - G(
        Fraction(0), Fraction(0)
    ) * G(Fraction(1), Fraction(1))
    assert poly.rayleigh_difference(1, 2, z) == expect


# -- hierarchy ---------------------------------------------------------------

CHECKS = {
    Notion.PAIRWISE_NC: check_pairwise_nc,
    Notion.CYLINDER: check_cylinder,
    Notion.NEG_ASSOCIATION: check_neg_association,
    Notion.NEG_REGRESSION: check_neg_regression,
    Notion.CNA: check_cna,
    Notion.STOCHASTIC_COVERING: check_stochastic_covering,
}


def test_implication_list_shape():
    pairs = set(NOTION_IMPLICATIONS)
    assert (Notion.STOCHASTIC_COVERING, Notion.NEG_REGRESSION) in pairs
    assert (Notion.NEG_REGRESSION, Notion.CYLINDER) in pairs
    assert (Notion.NEG_ASSOCIATION, Notion.CYLINDER) in pairs
    assert (Notion.CYLINDER, Notion.PAIRWISE_NC) in pairs
    assert (Notion.CNA, Notion.NEG_ASSOCIATION) in pairs
    assert (Notion.CNA, Notion.NEG_REGRESSION) in pairs


def test_hierarchy_on_random_measures(rng):
    for trial in range(60):
        n = rng.randint(2, 4)
        m = random_measure(n, rng)
        verdicts = {
            notion: CHECKS[notion](m).ok for notion in CHECKS
        }
        for stronger, weaker in NOTION_IMPLICATIONS:
            if verdicts[stronger]:
                assert verdicts[weaker], (
                    trial,
                    stronger,
                    weaker,
                    dict(m.items()),
                )


def test_nr_survives_conditioning_on_nand():
    # conditioning a NAND measure on any single variable keeps NR
    m = family_nand(5)
    for i in range(1, 6):
        for v in (0, 1):
            c = m.condition(Assignment.of({i: v}))
            assert check_neg_regression(c).verdict is Verdict.HOLDS, (i, v)
