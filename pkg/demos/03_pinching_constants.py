"""Closed-form pinching constants and how their printed decimals were cut."""

from einpinch.constants import constants_table, corollary13_audit

for row in constants_table(10)["rows"]:
    print(f"{row['name']:7s} {row['rounded']}  truncated {row['truncated']}  "
          f"printed {row['printed']}  |diff| {row['abs_diff']:.2e}")

audit = corollary13_audit()
print()
print(f"2 K_(1/2)            = {audit['two_k_half']:.10f}")
print(f"displayed expression = {audit['closed_form_display']:.10f}")
print(f"printed decimal      = {audit['printed_decimal']}")
