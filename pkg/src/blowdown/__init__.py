"""Verification tools for rational blow-down constructions on elliptic surfaces.

The pieces fit together like the constructions they check: `mcg` certifies
torus-fibration monodromy factorizations, `homcalc` tracks curve classes
through blow-ups and smoothings, `hirzebruch` handles the linear plumbing
chains and their rational-ball extension criterion, `swledger` pushes
Seiberg-Witten basic classes through the same surgeries, and `scenario`
ties them together in a checkable file format (see the bundled corpus).
"""

from . import hirzebruch, homcalc, mcg, scenario, swledger

__all__ = ["hirzebruch", "homcalc", "mcg", "scenario", "swledger"]

__version__ = "0.1.0"
