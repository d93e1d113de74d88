"""Building a triangle of exponents whose cross-interference is certified tiny.

Each table entry s(n, i) is an integer exponent.  The build greedily doubles
candidates until the monomial bump of every entry, measured at every other
entry's matched radius, falls below 2**-(n + n'): any two distinct entries
then interfere by less than their own peak heights.  The verifier re-checks
all ordered pairs from scratch, so a tampered table cannot slip through.
"""

import dataclasses

from blochlab.tables import build_exponent_table, verify_exponent_table


def main() -> None:
    table = build_exponent_table(6)
    print("triangle of damped exponents, rows 1..6:")
    for n, row in enumerate(table.rows, start=1):
        if row[-1] < 10**9:
            cells = "  ".join(str(s) for s in row)
        else:
            cells = "  ".join(f"~2^{s.bit_length()}" for s in row)
        print(f"  row {n}: {cells}")
    print(f"total entries: {table.num_entries}")

    print()
    print("how fast the diagonal grows (each step at least doubles):")
    diag = [table.entry(n, n) for n in range(1, 7)]
    for n, s in enumerate(diag, start=1):
        print(f"  s({n},{n}) = {s:>10d}   bits = {s.bit_length()}")

    report = verify_exponent_table(table)
    print()
    print("independent verification:", report.summary())

    # Shrink one entry below its floor and watch the verifier object.
    rows = [list(r) for r in table.rows]
    rows[3][1] = 100
    bad = dataclasses.replace(table, rows=tuple(tuple(r) for r in rows))
    bad_report = verify_exponent_table(bad)
    print("after forcing s(4,2) down to 100:", bad_report.summary())
    for v in bad_report.violations[:3]:
        print("  violation:", v)


if __name__ == "__main__":
    main()
