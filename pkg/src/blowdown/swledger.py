"""Seiberg-Witten bookkeeping as exact symbolic arithmetic.

Values of the invariant are affine expressions c0 + c1*n in one formal twist
parameter n, so a single symbolic run certifies the whole family; concrete
cases are substitutions.  A Ledger records, for one manifold, the tracked
cohomology classes (fiber class T and exceptional classes) together with the
value attached to each characteristic class vector.  The pipeline operations
mirror the geometric ones: knot surgery seeds a ledger from Alexander
polynomials, blow-ups spawn +-E twins, and rational blow-down keeps exactly
the classes whose restriction to the chain extends over the rational ball.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import product

from . import hirzebruch


@dataclass(frozen=True, order=True)
class LinExpr:
    """c0 + c1*n for the formal parameter n."""

    c0: int = 0
    c1: int = 0

    def __add__(self, other: "LinExpr") -> "LinExpr":
        return LinExpr(self.c0 + other.c0, self.c1 + other.c1)

    def __sub__(self, other: "LinExpr") -> "LinExpr":
        return LinExpr(self.c0 - other.c0, self.c1 - other.c1)

    def __neg__(self) -> "LinExpr":
        return LinExpr(-self.c0, -self.c1)

    def times(self, other: "LinExpr") -> "LinExpr":
        if self.c1 and other.c1:
            raise ValueError("product would be quadratic in n")
        return LinExpr(self.c0 * other.c0, self.c0 * other.c1 + self.c1 * other.c0)

    def shift(self, k: int) -> "LinExpr":
        return LinExpr(self.c0 + k, self.c1)

    def subst(self, n: int) -> int:
        return self.c0 + self.c1 * n

    def is_zero(self) -> bool:
        return self.c0 == 0 and self.c1 == 0

    def __str__(self) -> str:
        if self.c1 >= 0:
            return f"{self.c0} + {self.c1}*n"
        return f"{self.c0} - {-self.c1}*n"


ZERO = LinExpr(0, 0)
ONE = LinExpr(1, 0)


def parse_linexpr(text: str) -> LinExpr:
    """Parse forms like "n", "-n", "3", "1-2*n", "0 + 1*n"."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty value expression")
    # split into signed terms
    terms = []
    cur = ""
    for i, ch in enumerate(s):
        if ch in "+-" and i > 0 and s[i - 1] not in "+-*":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    c0 = c1 = 0
    for term in terms:
        t = term
        sign = 1
        while t and t[0] in "+-":
            if t[0] == "-":
                sign = -sign
            t = t[1:]
        if not t:
            raise ValueError(f"bad term in value expression {text!r}")
        if t.endswith("n"):
            coeff = t[:-1].rstrip("*")
            c1 += sign * (int(coeff) if coeff else 1)
        else:
            c0 += sign * int(t)
    return LinExpr(c0, c1)


class LaurentPoly:
    """Laurent polynomial in t with LinExpr coefficients; zero terms dropped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        clean = {}
        for e, c in (coeffs or {}).items():
            if not isinstance(c, LinExpr):
                c = LinExpr(c, 0)
            if not c.is_zero():
                clean[e] = c
        self.coeffs = clean

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __repr__(self):
        if not self.coeffs:
            return "LaurentPoly(0)"
        parts = [f"({self.coeffs[e]})*t^{e}" for e in sorted(self.coeffs, reverse=True)]
        return "LaurentPoly(" + " + ".join(parts) + ")"

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict[int, LinExpr] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                k = e1 + e2
                out[k] = out.get(k, ZERO) + c1.times(c2)
        return LaurentPoly(out)

    def at_t_squared(self) -> "LaurentPoly":
        return LaurentPoly({2 * e: c for e, c in self.coeffs.items()})

    def minus_one(self) -> "LaurentPoly":
        out = dict(self.coeffs)
        out[0] = out.get(0, ZERO) - ONE
        return LaurentPoly(out)

    def value_at_one(self) -> LinExpr:
        total = ZERO
        for c in self.coeffs.values():
            total = total + c
        return total

    def divide_by_t_minus_tinv(self) -> "LaurentPoly":
        """Exact division by (t - t^-1); raises if a remainder survives."""
        if not self.coeffs:
            return LaurentPoly({})
        p = dict(self.coeffs)
        floor = min(p)
        q: dict[int, LinExpr] = {}
        while p:
            e = max(p)
            if e < floor:
                raise ValueError("division by (t - t^-1) leaves a remainder")
            c = p.pop(e)
            q[e - 1] = q.get(e - 1, ZERO) + c
            k = e - 2
            r = p.get(k, ZERO) + c
            if r.is_zero():
                p.pop(k, None)
            else:
                p[k] = r
        return LaurentPoly(q)


def alexander_twist(n: int | None = None) -> LaurentPoly:
    """Alexander polynomial of the n-twist knot: n*t - (2n-1) + n*t^-1.

    With no argument the coefficient n stays symbolic.
    """
    if n is None:
        lead = LinExpr(0, 1)
        mid = LinExpr(1, -2)
    else:
        lead = LinExpr(n, 0)
        mid = LinExpr(1 - 2 * n, 0)
    return LaurentPoly({1: lead, 0: mid, -1: lead})


@dataclass(frozen=True)
class Entry:
    cls: tuple[int, ...]
    value: LinExpr
    square: int
    verified: bool = True


@dataclass(frozen=True)
class Ledger:
    label: str
    e: int
    sigma: int
    basis: tuple[str, ...]
    gram: tuple[tuple[int, ...], ...]
    entries: tuple[Entry, ...]  # sorted by class vector

    def entry(self, cls) -> Entry:
        for ent in self.entries:
            if ent.cls == tuple(cls):
                return ent
        raise KeyError(f"no ledger entry for class {tuple(cls)}")

    def has_entry(self, cls) -> bool:
        return any(ent.cls == tuple(cls) for ent in self.entries)


def _sorted_entries(entries) -> tuple[Entry, ...]:
    return tuple(sorted(entries, key=lambda ent: ent.cls))


def _pair(gram, v1, v2) -> int:
    return sum(v1[i] * gram[i][j] * v2[j] for i in range(len(v1)) for j in range(len(v2)))


def dimension_from_square(square: int, e: int, sigma: int) -> Fraction:
    return Fraction(square - 3 * sigma - 2 * e, 4)


def dimension(cls, gram, e: int, sigma: int) -> Fraction:
    """Formal dimension (K^2 - 3*sigma - 2*e)/4, as an exact rational."""
    return dimension_from_square(_pair(gram, cls, cls), e, sigma)


def restrict_to_chain(cls, chain_classes, gram) -> tuple[int, ...]:
    """Pairings of a class with each chain sphere, in chain order."""
    return tuple(_pair(gram, cls, u) for u in chain_classes)


def knot_surgery_ledger(polys, label: str, e: int = 12, sigma: int = -8) -> Ledger:
    """Seed a ledger from fiber-sum knot surgeries along the fiber class T.

    With P(t) the product of the Alexander polynomials evaluated at t^2, the
    relative invariant is (P - 1)/(t - t^-1), computed by exact Laurent
    division; the coefficient of t^j becomes the value at class j*T.  Extreme
    exponents carry the quoted leading values; interior entries are marked
    unverified.
    """
    prod_poly = LaurentPoly({0: ONE})
    for poly in polys:
        if poly.value_at_one() != ONE:
            raise ValueError("knot polynomial does not evaluate to 1 at t = 1")
        prod_poly = prod_poly * poly.at_t_squared()
    q = prod_poly.minus_one().divide_by_t_minus_tinv()
    top = max((abs(e_) for e_ in q.coeffs), default=0)
    entries = [
        Entry(cls=(j,), value=c, square=0, verified=abs(j) == top)
        for j, c in q.coeffs.items()
    ]
    return Ledger(
        label=label,
        e=e,
        sigma=sigma,
        basis=("T",),
        gram=((0,),),
        entries=_sorted_entries(entries),
    )


def blow_up_ledger(ledger: Ledger, count: int, names=None) -> Ledger:
    """Blow up `count` times: each entry K spawns K + sum(a_i * E_i) over all

    sign choices a_i = +-1, keeping its value.  Squares drop by count, so the
    formal dimension of every descendant equals its parent's.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if names is None:
        names = tuple(f"E{len(ledger.basis) + i}" for i in range(count))
    names = tuple(names)
    if len(names) != count:
        raise ValueError(f"expected {count} names, got {len(names)}")
    for nm in names:
        if nm in ledger.basis:
            raise ValueError(f"tracked class {nm!r} already exists")
    old_rank = len(ledger.basis)
    gram = tuple(row + (0,) * count for row in ledger.gram)
    for i in range(count):
        gram += ((0,) * (old_rank + i) + (-1,) + (0,) * (count - i - 1),)
    entries = []
    for ent in ledger.entries:
        for signs in product((1, -1), repeat=count):
            entries.append(
                replace(ent, cls=ent.cls + signs, square=ent.square - count)
            )
    return Ledger(
        label=ledger.label,
        e=ledger.e + count,
        sigma=ledger.sigma - count,
        basis=ledger.basis + names,
        gram=gram,
        entries=_sorted_entries(entries),
    )


@dataclass(frozen=True)
class BlowdownResult:
    ledger: Ledger
    restrictions: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    value_sets: tuple[tuple[tuple[int, ...], tuple[LinExpr, ...]], ...]
    chambered: bool

    def restriction_of(self, cls) -> tuple[int, ...]:
        for c, r in self.restrictions:
            if c == tuple(cls):
                return r
        raise KeyError(f"no surviving class {tuple(cls)}")

    def value_set_of(self, cls) -> tuple[LinExpr, ...]:
        for c, vs in self.value_sets:
            if c == tuple(cls):
                return vs
        raise KeyError(f"no surviving class {tuple(cls)}")


def _survivors(ledger: Ledger, chain, chain_pairings):
    if hirzebruch.identify_cpq(chain) is None:
        raise ValueError(
            f"chain {hirzebruch.chain_to_str(tuple(chain))} is not a C_{{p,q}} plumbing"
        )
    if len(chain_pairings) != len(ledger.basis):
        raise ValueError("need one chain-pairing row per tracked class")
    for row in chain_pairings:
        if len(row) != len(chain):
            raise ValueError("chain-pairing row length does not match the chain")
    kept = []
    for ent in ledger.entries:
        r = tuple(
            sum(c * row[i] for c, row in zip(ent.cls, chain_pairings))
            for i in range(len(chain))
        )
        if hirzebruch.extends_over_ball(tuple(chain), r):
            kept.append((ent, r))
    return kept


def _blowdown_core(ledger: Ledger, chain, chain_pairings, new_label, chambered: bool):
    chain = tuple(chain)
    kept = _survivors(ledger, chain, chain_pairings)
    k = len(chain)
    new_entries = []
    restrictions = []
    value_sets = []
    for ent, r in kept:
        d = dimension_from_square(ent.square, ledger.e, ledger.sigma)
        if d.denominator != 1 or d < 0:
            raise ValueError(
                f"class {ent.cls} has formal dimension {d}; need a nonnegative integer"
            )
        correction = hirzebruch.gram_inverse_form(chain, r)
        new_square = Fraction(ent.square) - correction
        if new_square.denominator != 1:
            raise ValueError(f"extension of {ent.cls} has non-integral square {new_square}")
        new_entries.append(replace(ent, square=int(new_square)))
        restrictions.append((ent.cls, r))
        if chambered:
            value_sets.append((ent.cls, tuple(sorted(chamber_value_set(ent.value, 1)))))
        else:
            value_sets.append((ent.cls, (ent.value,)))
    label = new_label if new_label is not None else f"{ledger.label} (chain blown down)"
    out = Ledger(
        label=label,
        e=ledger.e - k,
        sigma=ledger.sigma + k,
        basis=ledger.basis,
        gram=ledger.gram,
        entries=_sorted_entries(new_entries),
    )
    order = {ent.cls: i for i, ent in enumerate(out.entries)}
    restrictions.sort(key=lambda item: order[item[0]])
    value_sets.sort(key=lambda item: order[item[0]])
    return BlowdownResult(
        ledger=out,
        restrictions=tuple(restrictions),
        value_sets=tuple(value_sets),
        chambered=chambered,
    )


def rational_blowdown_ledger(
    ledger: Ledger, chain, chain_pairings, corrections, new_label: str | None = None
) -> BlowdownResult:
    """Filter a ledger through a rational blow-down, keeping exact values.

    `corrections` must be (True, True): the two recorded vanishing inputs
    (the auxiliary model manifold and the unsurgered background have
    identically zero invariants) that make the difference formula collapse,
    so survivors keep their parent's value unchanged.  Survivors are exactly
    the entries whose chain restriction extends over the rational ball; each
    must have nonnegative integral formal dimension, and the dimension is
    preserved: the new square is the old one minus v^T G^-1 v.
    """
    if tuple(corrections) != (True, True):
        raise ValueError(
            "exact blow-down values need both vanishing inputs asserted: corrections=(True, True)"
        )
    return _blowdown_core(ledger, chain, chain_pairings, new_label, chambered=False)


def chambered_blowdown_ledger(
    ledger: Ledger, chain, chain_pairings, new_label: str | None = None
) -> BlowdownResult:
    """Rational blow-down without exactness inputs: survivors are filtered the

    same way, but each value is only pinned up to one wall crossing, i.e. to
    the set {v-1, v, v+1}.
    """
    return _blowdown_core(ledger, chain, chain_pairings, new_label, chambered=True)


def chamber_value_set(v: LinExpr, crossings: int) -> frozenset[LinExpr]:
    if crossings not in (0, 1):
        raise ValueError("crossings must be 0 or 1")
    if crossings == 0:
        return frozenset({v})
    return frozenset({v.shift(-1), v, v.shift(1)})


def value_profile(value_sets, n: int) -> frozenset[int]:
    """All integer values a manifold's surviving classes can take at concrete n."""
    out = set()
    for _cls, vs in value_sets:
        for v in vs:
            out.add(v.subst(n))
    return frozenset(out)


def distinguishable(profile_a, profile_b) -> bool:
    """Two manifolds are told apart when their possible value sets are disjoint."""
    return not set(profile_a) & set(profile_b)


def substitute(ledger: Ledger, n: int) -> Ledger:
    entries = tuple(
        replace(ent, value=LinExpr(ent.value.subst(n), 0)) for ent in ledger.entries
    )
    return replace(ledger, entries=entries)


def minimality_report(ledger: Ledger) -> bool:
    """True when the ledger pins minimality: exactly two classes +-L with

    nonzero opposite values, and no partition into blow-up pairs {K+E, K-E}
    of equal value with E a square-(-1) direction in the tracked lattice
    (such a partition is what the blow-up formula would force).
    """
    for ent in ledger.entries:
        if ent.value.c1 != 0:
            raise ValueError("minimality needs concrete values; substitute n first")
    if len(ledger.entries) != 2:
        return False
    a, b = ledger.entries
    if b.cls != tuple(-x for x in a.cls) or b.value != -a.value:
        return False
    if a.value.is_zero():
        return False
    return not _blowup_partition_exists(ledger)


def _blowup_partition_exists(ledger: Ledger) -> bool:
    entries = list(ledger.entries)

    def candidate(x: Entry, y: Entry) -> bool:
        if x.value != y.value:
            return False
        diff = [p - q for p, q in zip(x.cls, y.cls)]
        if any(d % 2 for d in diff):
            return False
        half = [d // 2 for d in diff]
        if all(h == 0 for h in half):
            return False
        return _pair(ledger.gram, half, half) == -1

    def match(rest) -> bool:
        if not rest:
            return True
        first, tail = rest[0], rest[1:]
        for i, other in enumerate(tail):
            if candidate(first, other):
                if match(tail[:i] + tail[i + 1 :]):
                    return True
        return False

    return match(entries)


def ledger_report(ledger: Ledger) -> str:
    """Deterministic serialization: one line per entry, classes in

    lexicographic vector order, values as c0 + c1*n.
    """
    lines = [f"ledger {ledger.label}: e={ledger.e} sigma={ledger.sigma} entries={len(ledger.entries)}"]
    for ent in ledger.entries:
        cls = "(" + ",".join(str(c) for c in ent.cls) + ")"
        mark = "" if ent.verified else "  [unverified]"
        lines.append(f"  {cls} -> {ent.value}{mark}")
    return "\n".join(lines)


def class_to_str(cls, basis) -> str:
    """Human form of a class vector, e.g. 3T+E1+E2."""
    parts = []
    for c, name in zip(cls, basis):
        if c == 0:
            continue
        sign = "+" if c > 0 else "-"
        mag = abs(c)
        term = name if mag == 1 else f"{mag}{name}"
        parts.append((sign, term))
    if not parts:
        return "0"
    first_sign, first_term = parts[0]
    out = ("-" if first_sign == "-" else "") + first_term
    for sign, term in parts[1:]:
        out += sign + term
    return out
