"""Frozen reference tables for the exact combinatorial layer, and the
routines that regenerate and compare them.

Three families of tables:

* contraction tables for the full cycles on 2, 3 and 4 points: one row per
  singleton/pair partition with the sign exponent, the composed permutation,
  the contracted index, its trace monomial, the pair count and the 1/N
  exponent (negative exponents mean positive powers of N);
* pairing tables for two blocks glued by (0)(1..n)(n+1..2n), n = 2, 3, with
  the cycle count away from 0 and the same-cycle indicator for (n, 2n);
* contraction tables for the 0-fixing ("pointed") permutations of degree
  <= 3 that feed the matrix-variate combinations, in X notation.

Rows are keyed by the partition label, so a mismatch report names the exact
row and column that differs.  `golden_report` also re-derives the displayed
Hermite trace polynomials, the (a^2, b^2) pairs, the five pointed displays
and the character combinations, all as exact symbolic comparisons.
"""

from __future__ import annotations

from fractions import Fraction

from .constants import ab_coefficients, two_block_cycle
from .exactalg import LaurentN
from .pairings import (
    Partition12,
    contract,
    enumerate_inhomogeneous_pairings,
    enumerate_partition12,
)
from .permutations import Perm, compose
from .tracepoly import (
    format_monomial,
    full_cycle,
    hermite_trace_polynomial,
    verify_reference_expansions,
)
from .mvariate import (
    PowerSumExpr,
    dumitriu_reference,
    hermite_kappa,
    hermite_tilde_sigma_hat,
    proportionality_check,
)

CONTRACTION_HEADER = (
    "pi", "sign_exponent", "pi_alpha", "beta", "trace_monomial", "l", "inv_N_exponent",
)

# Rows: pi label -> (sign exponent n-l, pi*alpha, beta, monomial, l, 1/N exponent)
CONTRACTION_TABLES = {
    2: {
        "id": (2, "(012)", "(012)", "M^2", 0, 0),
        "(1)(2)": None,  # placeholder, filled below for readability
        "(12)": (1, "(02)(1)", "(0)", "1", 1, 0),
    },
    3: {
        "id": (3, "(0123)", "(0123)", "M^3", 0, 0),
        "(1)(23)": (2, "(013)(2)", "(01)", "M", 1, 0),
        "(13)(2)": (2, "(03)(12)", "(0)(1)", "Tr M", 1, 1),
        "(12)(3)": (2, "(023)(1)", "(01)", "M", 1, 0),
    },
    4: {
        "id": (4, "(01234)", "(01234)", "M^4", 0, 0),
        "(1)(23)(4)": (3, "(0134)(2)", "(012)", "M^2", 1, 0),
        "(1)(2)(34)": (3, "(0124)(3)", "(012)", "M^2", 1, 0),
        "(1)(24)(3)": (3, "(014)(23)", "(01)(2)", "M Tr M", 1, 1),
        "(14)(2)(3)": (3, "(04)(123)", "(0)(12)", "Tr M^2", 1, 1),
        "(13)(2)(4)": (3, "(034)(12)", "(02)(1)", "M Tr M", 1, 1),
        "(12)(3)(4)": (3, "(0234)(1)", "(012)", "M^2", 1, 0),
        "(12)(34)": (2, "(024)(1)(3)", "(0)", "1", 2, 0),
        "(13)(24)": (2, "(03214)", "(0)", "1", 2, 2),
        "(14)(23)": (2, "(04)(13)(2)", "(0)", "1", 2, 0),
    },
}
del CONTRACTION_TABLES[2]["(1)(2)"]

PAIRING_HEADER = ("pi", "pi_alpha", "cyc0", "same_cycle")

# Pairings of two n-blocks against (0)(1..n)(n+1..2n).
PAIRING_TABLES = {
    2: {
        "(13)(24)": ("(0)(14)(23)", 2, 0),
        "(14)(23)": ("(0)(13)(24)", 2, 1),
    },
    3: {
        "(14)(25)(36)": ("(0)(153426)", 1, 1),
        "(14)(26)(35)": ("(0)(16)(25)(34)", 3, 0),
        "(15)(24)(36)": ("(0)(14)(26)(35)", 3, 0),
        "(15)(26)(34)": ("(0)(163524)", 1, 1),
        "(16)(24)(35)": ("(0)(143625)", 1, 1),
        "(16)(25)(34)": ("(0)(15)(24)(36)", 3, 1),
    },
}

# Pointed permutations of degree <= 3 and their contraction tables
# (X notation; inv_N_exponent -1 means a factor N).
POINTED_TABLES = {
    "(0)(12)": {
        "id": (2, "(0)(12)", "(0)(12)", "Tr X^2", 0, 0),
        "(12)": (1, "(0)(1)(2)", "(0)", "1", 1, -1),
    },
    "(0)(1)(2)": {
        "id": (2, "(0)(1)(2)", "(0)(1)(2)", "(Tr X)^2", 0, 0),
        "(12)": (1, "(0)(12)", "(0)", "1", 1, 0),
    },
    "(0)(123)": {
        "id": (3, "(0)(123)", "(0)(123)", "Tr X^3", 0, 0),
        "(12)(3)": (2, "(0)(1)(23)", "(0)(1)", "Tr X", 1, 0),
        "(13)(2)": (2, "(0)(12)(3)", "(0)(1)", "Tr X", 1, 0),
        "(1)(23)": (2, "(0)(13)(2)", "(0)(1)", "Tr X", 1, 0),
    },
    "(0)(12)(3)": {
        "id": (3, "(0)(12)(3)", "(0)(12)(3)", "Tr X^2 Tr X", 0, 0),
        "(12)(3)": (2, "(0)(1)(2)(3)", "(0)(1)", "Tr X", 1, -1),
        "(1)(23)": (2, "(0)(132)", "(0)(1)", "Tr X", 1, 1),
        "(13)(2)": (2, "(0)(123)", "(0)(1)", "Tr X", 1, 1),
    },
    "(0)(1)(2)(3)": {
        "id": (3, "(0)(1)(2)(3)", "(0)(1)(2)(3)", "(Tr X)^3", 0, 0),
        "(12)(3)": (2, "(0)(12)(3)", "(0)(1)", "Tr X", 1, 0),
        "(13)(2)": (2, "(0)(13)(2)", "(0)(1)", "Tr X", 1, 0),
        "(1)(23)": (2, "(0)(1)(23)", "(0)(1)", "Tr X", 1, 0),
    },
}

POINTED_PERMS = {
    "(0)(12)": Perm.from_cycles(2, (1, 2)),
    "(0)(1)(2)": Perm.identity(2),
    "(0)(123)": Perm.from_cycles(3, (1, 2, 3)),
    "(0)(12)(3)": Perm.from_cycles(3, (1, 2)),
    "(0)(1)(2)(3)": Perm.identity(3),
}

AB_REFERENCE = {
    2: (LaurentN({0: 1}), LaurentN({0: 1})),
    3: (LaurentN({0: 1, -2: 3}), LaurentN({0: 2})),
}

POINTED_DISPLAYS = {
    # h(X) at u = N, keyed by power-sum exponents (e1, e2, e3)
    "(0)(12)": PowerSumExpr({(0, 1, 0): 1, (0, 0, 0): {2: -1}}),
    "(0)(1)(2)": PowerSumExpr({(2, 0, 0): 1, (0, 0, 0): {1: -1}}),
    "(0)(123)": PowerSumExpr({(0, 0, 1): -1, (1, 0, 0): {1: 3}}),
    "(0)(12)(3)": PowerSumExpr({(1, 1, 0): -1, (1, 0, 0): {2: 1, 0: 2}}),
    "(0)(1)(2)(3)": PowerSumExpr({(3, 0, 0): -1, (1, 0, 0): {1: 3}}),
}

CHARACTER_COMBINATIONS = {
    (1, 1): PowerSumExpr({(2, 0, 0): 1, (0, 1, 0): -1, (0, 0, 0): {2: 1, 1: -1}}),
    (2,): PowerSumExpr({(2, 0, 0): 1, (0, 1, 0): 1, (0, 0, 0): {2: -1, 1: -1}}),
    (1, 1, 1): PowerSumExpr(
        {(3, 0, 0): -1, (1, 1, 0): 3, (0, 0, 1): -2,
         (1, 0, 0): {2: -3, 1: 9, 0: -6}}
    ),
    (2, 1): PowerSumExpr({(3, 0, 0): -2, (0, 0, 1): 2}),
    (3,): PowerSumExpr(
        {(3, 0, 0): -1, (1, 1, 0): -3, (0, 0, 1): -2,
         (1, 0, 0): {2: 3, 1: 9, 0: 6}}
    ),
}

PROPORTIONALITY_CONSTANTS = {
    (1, 1): Fraction(2),
    (2,): Fraction(1),
    (1, 1, 1): Fraction(-6),
    (2, 1): Fraction(-6),
    (3,): Fraction(-6),
}


def contraction_row(alpha: Perm, pi: Partition12, letter="M"):
    c = contract(alpha, pi)
    pa = compose(pi.as_perm(), alpha)
    return (
        alpha.n - c.num_pairs,
        pa.cycle_string(),
        c.beta.cycle_string(),
        format_monomial(c.beta.cycle_type_key(), letter),
        c.num_pairs,
        c.inv_n_exponent,
    )


def contraction_table(n, alpha=None, letter="M"):
    """{pi label: row} for all singleton/pair partitions of [n]."""
    if alpha is None:
        alpha = full_cycle(n)
    return {
        pi.label(): contraction_row(alpha, pi, letter)
        for pi in enumerate_partition12(n)
    }


def pairing_table(n):
    """{pi label: (pi*alpha~, cyc0, same-cycle flag)} over pairings of two
    n-blocks."""
    alpha = two_block_cycle(n)
    out = {}
    for pi in enumerate_inhomogeneous_pairings(n, 2):
        pa = compose(pi.as_perm(), alpha)
        same = 0
        for cyc in pa.cycles():
            if n in cyc and 2 * n in cyc:
                same = 1
        out[pi.label()] = (pa.cycle_string(), pa.cyc0(), same)
    return out


def _compare_tables(name, computed, expected, mismatches):
    for key in sorted(set(computed) | set(expected)):
        got = computed.get(key)
        want = expected.get(key)
        if got != want:
            mismatches.append((name, key, got, want))


def golden_report():
    """Regenerate every frozen table/display and diff; returns a dict with a
    per-check ok flag and the list of (table, row, got, want) mismatches."""
    mismatches = []

    for n, expected in CONTRACTION_TABLES.items():
        _compare_tables(f"contraction_n{n}", contraction_table(n), expected, mismatches)

    for n, expected in PAIRING_TABLES.items():
        _compare_tables(f"pairing_n{n}", pairing_table(n), expected, mismatches)

    for label, expected in POINTED_TABLES.items():
        alpha = POINTED_PERMS[label]
        computed = contraction_table(alpha.n, alpha=alpha, letter="X")
        _compare_tables(f"pointed_{label}", computed, expected, mismatches)

    for n, ok, got, want in verify_reference_expansions():
        if not ok:
            mismatches.append((f"hermite_display_n{n}", "-", got, want))

    for n, expected in AB_REFERENCE.items():
        got = ab_coefficients(n)
        if got != expected:
            mismatches.append((f"ab_n{n}", "-", tuple(map(str, got)),
                               tuple(map(str, expected))))

    for label, expected in POINTED_DISPLAYS.items():
        got = hermite_tilde_sigma_hat(POINTED_PERMS[label])
        if got != expected:
            mismatches.append((f"pointed_display_{label}", "-", str(got), str(expected)))

    for kappa, expected in CHARACTER_COMBINATIONS.items():
        got = hermite_kappa(kappa)
        if got != expected:
            mismatches.append((f"character_combination_{kappa}", "-", str(got),
                               str(expected)))

    for kappa, expected in PROPORTIONALITY_CONSTANTS.items():
        got = proportionality_check(kappa)
        if got != expected:
            mismatches.append((f"proportionality_{kappa}", "-", got, expected))
        # the reference polynomial itself must scale back onto the combination
        if got is not None:
            ref = dumitriu_reference(kappa).scale(got)
            if ref != hermite_kappa(kappa):
                mismatches.append((f"reference_scaling_{kappa}", "-", str(ref), "-"))

    checks = sorted(
        {m[0].split("_")[0] for m in mismatches}
        | {"contraction", "pairing", "pointed", "hermite", "ab", "character",
           "proportionality"}
    )
    return {
        "ok": not mismatches,
        "mismatches": mismatches,
        "checks_run": checks,
    }


def contraction_csv_rows(n, alpha=None, letter="M"):
    """CSV rows (header first) in canonical partition order."""
    table = contraction_table(n, alpha=alpha, letter=letter)
    rows = [",".join(CONTRACTION_HEADER)]
    for label in sorted(table):
        rows.append(",".join(str(x) for x in (label,) + table[label]))
    return rows


def pairing_csv_rows(n):
    table = pairing_table(n)
    rows = [",".join(PAIRING_HEADER)]
    for label in sorted(table):
        rows.append(",".join(str(x) for x in (label,) + table[label]))
    return rows
