"""Print the headline tables: bounds, the swap boundary, and efficiency.

Everything here is recomputed exactly through the library; the decimal
column is an annotation, never an input to a comparison.
"""

from fractions import Fraction

from boxswap import (
    INV_SQRT2,
    Scalar,
    bounds,
    classify,
    efficiency_compare,
    hybrid_three,
    isotropic,
    swap_two,
)


def show(rows, header):
    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
    for row in [header, ["-" * w for w in widths]] + rows:
        print("  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip())
    print()


def bound_table(n_max=6):
    rows = []
    for n in range(2, n_max + 1):
        b = bounds(n)
        rows.append([n, b.local, f"{b.quantum} ({b.quantum.decimal()})", b.algebraic])
    show(rows, ["n", "local", "quantum", "algebraic"])


def boundary_table():
    # feeding the swap with weight-xi isotropic boxes: the success branch
    # leaves the local set exactly when the inputs leave the quantum set
    rows = []
    for xi in (Scalar(Fraction(7, 10)), INV_SQRT2, Scalar(Fraction(3, 4))):
        before = classify(isotropic(2, xi))
        after = swap_two(2, 2, xi, xi).branch((0,)).classification
        rows.append(
            [
                f"{xi} ({xi.decimal()})",
                f"{before.value.decimal()}{' *' if before.exceeds_quantum else ''}",
                f"{after.value.decimal()}{' *' if after.exceeds_local else ''}",
            ]
        )
    show(rows, ["xi", "gsi in (*: beyond quantum)", "gsi out (*: beyond local)"])


def efficiency_table(n_max=6):
    rows = []
    for n in range(3, n_max + 1):
        e = efficiency_compare(n)
        rows.append(
            [
                n,
                e.pairwise_boxes,
                f"{e.pairwise_probability} ({e.pairwise_probability.decimal()})",
                e.coupler_boxes,
                f"{e.coupler_probability} ({e.coupler_probability.decimal()})",
            ]
        )
    show(rows, ["n", "pairwise boxes", "pairwise prob", "coupler boxes", "coupler prob"])


def hybrid_table():
    report = hybrid_three()
    rows = []
    for g in report.groups:
        example = report.branch(tuple(g["branches"][0]))
        rows.append(
            [
                g["failures"],
                len(g["branches"]),
                f"{g['probability']} ({g['probability'].decimal()})",
                example.functionals["gsi"],
            ]
        )
    show(rows, ["failed couplers", "branches", "probability", "gsi per branch"])


def main():
    print("== GSI bounds by party count")
    bound_table()
    print("== one swap, both inputs at weight xi")
    boundary_table()
    print("== building an n-party box: pairwise cascade vs one n-end coupler")
    efficiency_table()
    print("== hybrid three-user network, grouped by failed couplers")
    hybrid_table()


if __name__ == "__main__":
    main()
