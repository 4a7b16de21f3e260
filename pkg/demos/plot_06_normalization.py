"""
Normalizing keyphrases and assigning themes
===========================================

Slang, misspellings and inflections collapse onto one canonical phrase;
every canonical phrase belongs to a theme.
"""

from themekp.normalize import (NormalizationTable, TableError, Theme, assign_theme, normalize_phrase,
                               normalize_set, seed_table)

table = seed_table()
for phrase in ["dope", "PWD", "cravings", "subs", "Detoxing", "precipitated withdrawals", "accidentally"]:
    canonical, is_other = normalize_phrase(phrase, table)
    print(f"{phrase:<26} -> {canonical:<24} {'(other, dropped)' if is_other else assign_theme(canonical, table).label}")

###############################################################################
# Normalizing twice changes nothing.

once = normalize_set(["dope", "smack", "heroin", "cravings", "sub"], table)
print(once, normalize_set(once, table) == once)

###############################################################################
# Tables are validated: a variant may not point at another variant.

try:
    NormalizationTable({"h": "dope", "dope": "heroin"}, frozenset(), {"heroin": Theme.SubstanceDependencyRecovery})
except TableError as exc:
    print(exc)
