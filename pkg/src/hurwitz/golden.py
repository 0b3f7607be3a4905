"""Pinned exact constants for the one-part (p_1 = 1) specialization.

Pure data, no logic: Laurent series in W = 1/(1-w) for the low-genus
simple-Hurwitz generating series and their D-derivatives, pole-form
coefficients in w, recurrence descriptors, the 26-term search family, and
aggregate constant checks.  Everything is an exact rational; tests and the
CLI verification suites consume this module and never restate the numbers.

Encodings
---------
* Laurent data: {exponent: Fraction} for sums c * W^exponent; a parallel
  map holds coefficients of W^exponent * log W.
* Differential identities: list of terms, each {"coeff": Fraction,
  "factors": [(g, p), ...]} standing for coeff * prod D^p H~_g; the terms
  sum to zero.  An empty factor list would be a constant term (unused).
* Numeric recurrences: schema documented next to RECURRENCES below.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = [
    "PINNED_W_SERIES",
    "AUX_W_SERIES",
    "POLE_FORM_COEFFS",
    "A_COMBINATION_G3",
    "P3_PREFACTOR_DENOM",
    "P3_POLY",
    "DIFFERENTIAL_IDENTITIES",
    "SEARCH_FAMILY_26",
    "SEARCH_FAMILY_26_NULLITY",
    "RECURRENCES",
    "AGGREGATE_CONSTANT_CHECKS_G2",
    "SPOT_VALUES",
]


def _fr(num: int, den: int = 1) -> Fraction:
    return Fraction(num, den)


# D^n H~_g as Laurent data in W, keyed by (g, n).  These are the five
# displayed base series; everything else is derived by applying D.
PINNED_W_SERIES: dict[tuple[int, int], dict[str, dict[int, Fraction]]] = {
    (0, 1): {
        "laurent": {0: _fr(1, 2), -2: _fr(-1, 2)},
        "log": {},
    },
    (1, 0): {
        "laurent": {0: _fr(-1, 24), -1: _fr(1, 24)},
        "log": {0: _fr(1, 24)},
    },
    (1, 1): {
        "laurent": {2: _fr(1, 24), 1: _fr(-1, 12), 0: _fr(1, 24)},
        "log": {},
    },
    (2, 0): {
        "laurent": {5: _fr(7, 1440), 4: _fr(-1, 72), 3: _fr(19, 1440), 2: _fr(-1, 240)},
        "log": {},
    },
    (3, 0): {
        "laurent": {
            4: _fr(720, 725760),
            5: _fr(-8136, 725760),
            6: _fr(33362, 725760),
            7: _fr(-67036, 725760),
            8: _fr(71505, 725760),
            9: _fr(-38990, 725760),
            10: _fr(8575, 725760),
        },
        "log": {},
    },
}

# Two short derived series quoted in the recurrence discussion.
AUX_W_SERIES: dict[tuple[int, int], dict[str, dict[int, Fraction]]] = {
    (0, 2): {"laurent": {0: _fr(1), -1: _fr(-1)}, "log": {}},
    (0, 3): {"laurent": {1: _fr(1), 0: _fr(-1)}, "log": {}},
}

# H~_g as sum of c * w^m / (1-w)^r, keyed g -> {(m, r): c}.
POLE_FORM_COEFFS: dict[int, dict[tuple[int, int], Fraction]] = {
    2: {(2, 4): _fr(4, 5760), (3, 5): _fr(28, 5760)},
    3: {
        (2, 6): _fr(1, 80640),
        (3, 7): _fr(73, 90720),
        (4, 8): _fr(37, 5184),
        (5, 9): _fr(89, 5184),
        (6, 10): _fr(245, 20736),
    },
}

# H^3_{(1^d)}/(2d+4)! as a combination of A_k(d) = [x^d] (1-w)^{-k}.
A_COMBINATION_G3: dict[int, Fraction] = {
    4: _fr(1, 1008),
    5: _fr(-113, 10080),
    6: _fr(2383, 51840),
    7: _fr(-16759, 181440),
    8: _fr(227, 2304),
    9: _fr(-557, 10368),
    10: _fr(245, 20736),
}

# H^3_{(1^d)} = (2d+4)!/P3_PREFACTOR_DENOM *
#   sum_{r=0}^{d-1} d^{d-r-2}/(d-r-1)! * C(r+4,5) * (r+1) * P3(r),
# with P3 listed by ascending power of r.
P3_PREFACTOR_DENOM = 313528320
P3_POLY: tuple[int, ...] = (1680, -2822, 35, 3770, 1225)

DIFFERENTIAL_IDENTITIES: dict[str, list[dict]] = {
    # D^2 H~_0 = (1/2)(D^2 H~_0)^2 + D H~_0
    "genus0-quadratic": [
        {"coeff": _fr(1), "factors": [(0, 2)]},
        {"coeff": _fr(-1, 2), "factors": [(0, 2), (0, 2)]},
        {"coeff": _fr(-1), "factors": [(0, 1)]},
    ],
    # D H~_1 = (1/24)(D^3 H~_0)^2
    "genus1-square": [
        {"coeff": _fr(1), "factors": [(1, 1)]},
        {"coeff": _fr(-1, 24), "factors": [(0, 3), (0, 3)]},
    ],
    # D H~_1 = D^3 H~_0/24 - D^2 H~_0/24 + (D^2 H~_0)(D H~_1)
    "genus1-mixed": [
        {"coeff": _fr(1), "factors": [(1, 1)]},
        {"coeff": _fr(-1, 24), "factors": [(0, 3)]},
        {"coeff": _fr(1, 24), "factors": [(0, 2)]},
        {"coeff": _fr(-1), "factors": [(0, 2), (1, 1)]},
    ],
    # 4320 H~_2 = -300 D^2 H~_1 + 7(D^5 - D^4) H~_0
    "genus2-linear": [
        {"coeff": _fr(4320), "factors": [(2, 0)]},
        {"coeff": _fr(300), "factors": [(1, 2)]},
        {"coeff": _fr(-7), "factors": [(0, 5)]},
        {"coeff": _fr(7), "factors": [(0, 4)]},
    ],
    # 2880 H~_3 = -(2/49 - (227/294)D + (99845/588)D^2) H~_2
    #             -((1/490)D^2 - (11/294)D^3 + (38845/14112)D^4 - (1225/576)D^5) H~_1
    "genus3-linear": [
        {"coeff": _fr(2880), "factors": [(3, 0)]},
        {"coeff": _fr(2, 49), "factors": [(2, 0)]},
        {"coeff": _fr(-227, 294), "factors": [(2, 1)]},
        {"coeff": _fr(99845, 588), "factors": [(2, 2)]},
        {"coeff": _fr(1, 490), "factors": [(1, 2)]},
        {"coeff": _fr(-11, 294), "factors": [(1, 3)]},
        {"coeff": _fr(38845, 14112), "factors": [(1, 4)]},
        {"coeff": _fr(-1225, 576), "factors": [(1, 5)]},
    ],
}

# The 26-term genus-3 search family: products (D^p H~_i)(D^q H~_j) with
# p+q = 4, i+j = 3 (8 distinct terms once symmetric pairs are merged and
# the unrepresentable H~_0 factor is excluded), plus singles D^p H~_3 for
# 0 <= p <= 4, D^p H~_2 for 0 <= p <= 5, D^p H~_1 for 1 <= p <= 7.  The
# p = 0 singles for genus 2 and 3 are included so that the family contains
# the genus3-linear identity above; this also makes the count 26.
SEARCH_FAMILY_26: list[dict] = (
    [{"factors": [(0, p), (3, 4 - p)]} for p in range(1, 5)]
    + [{"factors": [(1, p), (2, 4 - p)]} for p in range(1, 5)]
    + [{"factors": [(3, p)]} for p in range(0, 5)]
    + [{"factors": [(2, p)]} for p in range(0, 6)]
    + [{"factors": [(1, p)]} for p in range(1, 8)]
)
SEARCH_FAMILY_26_NULLITY = 11

# Numeric recurrences on H^g_{(1^d)}.
#
# Schema: {"lhs": {"g": int, "coeff": Fraction}, "terms": [term, ...]} with
# lhs.coeff * H^lhs.g_{(1^d)} = sum of terms.  Each term:
#   coeff     — rational scalar;
#   poly      — list of (e_d, e_i, e_j, c): sum of c * d^e_d i^e_i j^e_j;
#   binomials — list of ((a0, ad, ai), (b0, bd, bi)) for C(a0+ad*d+ai*i,
#               b0+bd*d+bi*i);
#   hfactors  — list of (g, arg) with arg in {"d", "i", "j"};
#   split     — if true, sum the term over i = 1..d-1 with j = d-i;
#   denom_poly— optional list of (e_d, c) dividing the term by sum c*d^e_d.
RECURRENCES: dict[str, dict] = {
    "genus0": {
        "lhs": {"g": 0, "coeff": _fr(1)},
        "terms": [
            {
                "coeff": _fr(1),
                "poly": [(0, 2, 2, _fr(1))],
                "binomials": [((-2, 2, 0), (2, 0, 0)), ((-4, 2, 0), (-2, 0, 2))],
                "hfactors": [(0, "i"), (0, "j")],
                "split": True,
                "denom_poly": [(2, _fr(1)), (1, _fr(-1))],
            }
        ],
    },
    "genus1": {
        "lhs": {"g": 1, "coeff": _fr(1)},
        "terms": [
            {
                "coeff": _fr(1),
                "poly": [(0, 3, 3, _fr(1))],
                "binomials": [((0, 2, 0), (4, 0, 0)), ((-4, 2, 0), (-2, 0, 2))],
                "hfactors": [(0, "i"), (0, "j")],
                "split": True,
                "denom_poly": [(1, _fr(1))],
            }
        ],
    },
    "genus2": {
        "lhs": {"g": 2, "coeff": _fr(180)},
        "terms": [
            {
                "coeff": _fr(-25),
                "poly": [(2, 0, 0, _fr(1))],
                "binomials": [((2, 2, 0), (2, 0, 0))],
                "hfactors": [(1, "d")],
                "split": False,
            },
            {
                "coeff": _fr(7),
                "poly": [(5, 0, 0, _fr(1)), (4, 0, 0, _fr(-1))],
                "binomials": [((2, 2, 0), (4, 0, 0))],
                "hfactors": [(0, "d")],
                "split": False,
            },
        ],
    },
    "genus3": {
        "lhs": {"g": 3, "coeff": _fr(2880)},
        "terms": [
            {
                "coeff": _fr(-1, 294),
                "poly": [(0, 0, 0, _fr(24)), (1, 0, 0, _fr(-454)), (2, 0, 0, _fr(99845))],
                "binomials": [((4, 2, 0), (2, 0, 0))],
                "hfactors": [(2, "d")],
                "split": False,
            },
            {
                "coeff": _fr(1, 5880),
                "poly": [
                    (2, 0, 0, _fr(-288)),
                    (3, 0, 0, _fr(5280)),
                    (4, 0, 0, _fr(-388450)),
                    (5, 0, 0, _fr(300125)),
                ],
                "binomials": [((4, 2, 0), (4, 0, 0))],
                "hfactors": [(1, "d")],
                "split": False,
            },
        ],
    },
    "genus3-geometric": {
        "lhs": {"g": 3, "coeff": _fr(1)},
        "terms": [
            {
                # scalar absorbs the 1/2 of C(d,2) = d(d-1)/2; solving the
                # 10-constant system exactly from table data pins 1/851131505,
                # with every other constant in this recurrence unchanged
                "coeff": _fr(1, 851131505),
                "poly": [(1, 0, 0, _fr(1532127678)), (0, 0, 0, _fr(-2213123851))],
                "binomials": [((0, 1, 0), (2, 0, 0))],
                "hfactors": [(2, "d")],
                "split": False,
            },
            {
                "coeff": _fr(-2, 121590215),
                "poly": [
                    (0, 2, 2, _fr(760192125)),
                    (0, 2, 1, _fr(-12054428314)),
                    (0, 1, 2, _fr(-2006745110)),
                    (0, 1, 1, _fr(1033797958)),
                ],
                "binomials": [((2, 2, 0), (-2, 0, 2))],
                "hfactors": [(0, "i"), (3, "j")],
                "split": True,
            },
            {
                "coeff": _fr(-4, 2553394515),
                "poly": [
                    (0, 2, 2, _fr(798201731250)),
                    (0, 2, 1, _fr(-217500288725)),
                    (0, 1, 2, _fr(-473678414332)),
                    (0, 1, 1, _fr(-42109762821)),
                ],
                "binomials": [((2, 2, 0), (0, 0, 2))],
                "hfactors": [(1, "i"), (2, "j")],
                "split": True,
            },
        ],
    },
}

# Constraints the fitted genus-2 constants must satisfy, implied by the
# pole-form coefficients above under the p_1 = 1 specialization:
# sum of singleton K's; K_{(2,2)}/2 + K_{(2,3)}; K_{(2,2,2)}.
AGGREGATE_CONSTANT_CHECKS_G2 = {
    "singleton_sum": _fr(0),
    "pair_weighted_sum": _fr(1, 1440),
    "triple": _fr(7, 240),
}

# Hand-checked table entries (g, d) -> H^g_{(1^d)}.
SPOT_VALUES: dict[tuple[int, int], Fraction] = {
    (0, 3): _fr(4),
    (1, 2): _fr(1, 2),
}
