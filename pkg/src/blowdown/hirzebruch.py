"""Linear plumbing chains from continued fractions, and their lattice data.

A chain C_{p,q} is the linear plumbing of spheres whose weights are the
negated coefficients of the continued fraction expansion

    p^2 / (pq - 1) = c_1 - 1/(c_2 - 1/(... - 1/c_k)),    all c_i >= 2.

Its boundary is the lens space L(p^2, pq-1), which also bounds a rational
homology ball; replacing the chain by the ball is the generalized rational
blow-down.  This module computes the chains, recognizes them, and presents
the discriminant group (cokernel of the Gram matrix) concretely enough to
decide which restriction vectors extend over the ball.

The extension criterion (characteristic + discriminant image divisible by p)
is calibrated against brute-force coset enumeration on the two smallest
chains; see the acceptance tests.  If it ever disagrees with a filtering
result quoted in a scenario, report the discrepancy -- do not patch it here.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

Chain = tuple[int, ...]


def hj_expand(num: int, den: int) -> tuple[int, ...]:
    """Coefficients (all >= 2) of num/den = c1 - 1/(c2 - 1/(... - 1/ck))."""
    if den < 1 or num <= den:
        raise ValueError(f"need num > den >= 1, got {num}/{den}")
    if math.gcd(num, den) != 1:
        raise ValueError(f"{num} and {den} are not coprime")
    out = []
    while True:
        c = -(-num // den)  # ceiling
        out.append(c)
        num, den = den, c * den - num
        if den == 0:
            return tuple(out)


def cf_value(coeffs) -> Fraction:
    """Evaluate c1 - 1/(c2 - 1/(...)) exactly."""
    if not coeffs:
        raise ValueError("empty coefficient list")
    x = Fraction(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        x = c - 1 / x
    return x


def chain_for_cpq(p: int, q: int) -> Chain:
    if not (p > q > 0):
        raise ValueError(f"need p > q > 0, got p={p}, q={q}")
    if math.gcd(p, q) != 1:
        raise ValueError(f"p={p} and q={q} are not coprime")
    return tuple(-c for c in hj_expand(p * p, p * q - 1))


def identify_cpq(chain: Chain):
    """Recognize a chain as C_{p,q}; returns (p, q) or None.

    The continued fraction of the negated weights is evaluated to num/den;
    num must be a perfect square p^2, p must divide den+1, and the candidate
    must round-trip through chain_for_cpq (a square determinant alone is not
    enough).
    """
    if not chain or any(w > -2 for w in chain):
        return None
    frac = cf_value([-w for w in chain])
    num, den = frac.numerator, frac.denominator
    p = math.isqrt(num)
    if p * p != num:
        return None
    if (den + 1) % p != 0:
        return None
    q = (den + 1) // p
    if not (p > q > 0) or math.gcd(p, q) != 1:
        return None
    if chain_for_cpq(p, q) != tuple(chain):
        return None
    return (p, q)


def chain_to_str(chain: Chain) -> str:
    return "(" + ",".join(str(w) for w in chain) + ")"


def parse_chain(text: str) -> Chain:
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ValueError(f"chain must look like (-9,-2,...), got {text!r}")
    body = s[1:-1].strip()
    if not body:
        raise ValueError("empty chain")
    try:
        return tuple(int(part.strip()) for part in body.split(","))
    except ValueError:
        raise ValueError(f"chain entries must be integers: {text!r}") from None


def gram_matrix(chain: Chain) -> tuple[tuple[int, ...], ...]:
    k = len(chain)
    g = [[0] * k for _ in range(k)]
    for i, w in enumerate(chain):
        g[i][i] = w
        if i + 1 < k:
            g[i][i + 1] = g[i + 1][i] = 1
    return tuple(tuple(row) for row in g)


def gram_det(chain: Chain) -> int:
    # continuant recurrence for a tridiagonal matrix with unit off-diagonal
    dm2, dm1 = 1, chain[0]
    for w in chain[1:]:
        dm2, dm1 = dm1, w * dm1 - dm2
    return dm1


@dataclass(frozen=True)
class ChainLattice:
    weights: Chain
    k: int
    det: int

    @property
    def gram(self) -> list[list[int]]:
        return gram_matrix(self.weights)


def gram(chain: Chain) -> ChainLattice:
    if not chain:
        raise ValueError("empty chain")
    return ChainLattice(weights=tuple(chain), k=len(chain), det=gram_det(chain))


def _smith_left(mat):
    """Diagonalize an integer matrix by row and column operations.

    Returns (diag, U) with U * mat * V = diag(d_1..d_k) for some unimodular V,
    d_i >= 0 and d_i | d_{i+1}.  Only the row transform U is tracked; it is
    what presents the cokernel Z^k / im(mat).
    """
    a = [list(row) for row in mat]
    k = len(a)
    u = [[int(i == j) for j in range(k)] for i in range(k)]

    def add_row(i, j, c):
        a[i] = [x + c * y for x, y in zip(a[i], a[j])]
        u[i] = [x + c * y for x, y in zip(u[i], u[j])]

    def add_col(i, j, c):
        for row in a:
            row[i] += c * row[j]

    for t in range(k):
        while True:
            piv = None
            for i in range(t, k):
                for j in range(t, k):
                    if a[i][j] and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                break
            if piv[0] != t:
                a[t], a[piv[0]] = a[piv[0]], a[t]
                u[t], u[piv[0]] = u[piv[0]], u[t]
            if piv[1] != t:
                for row in a:
                    row[t], row[piv[1]] = row[piv[1]], row[t]
            clean = True
            for i in range(t + 1, k):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, k):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            # pivot divides everything below-right, or pull a bad row up
            bad = None
            for i in range(t + 1, k):
                for j in range(t + 1, k):
                    if a[i][j] % a[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return [a[i][i] for i in range(k)], u


@dataclass(frozen=True)
class DiscriminantData:
    """Cyclic presentation of coker(Gram): order p^2, and coefficients so that

    a value vector v maps to sum(v_i * coeffs_i) mod order.  Normalized so
    coeffs[0] = 1 (the first sphere's dual generates).
    """

    order: int
    coeffs: tuple[int, ...]

    def image(self, v) -> int:
        if len(v) != len(self.coeffs):
            raise ValueError(f"value vector has length {len(v)}, expected {len(self.coeffs)}")
        return sum(x * c for x, c in zip(v, self.coeffs)) % self.order


def discriminant(chain: Chain) -> DiscriminantData:
    # pure in an immutable argument, and hammered by the ledger filters
    # (once per candidate class), so cache the Smith reduction
    return _discriminant_cached(tuple(chain))


@functools.lru_cache(maxsize=None)
def _discriminant_cached(chain: Chain) -> DiscriminantData:
    lat = gram(chain)
    order = abs(lat.det)
    p = math.isqrt(order)
    if p * p != order:
        raise ValueError(f"|det| = {order} is not a perfect square; not a C_{{p,q}} chain")
    diag, u = _smith_left(lat.gram)
    if any(d != 1 for d in diag[:-1]) or diag[-1] != order:
        raise ValueError(f"cokernel {diag} is not cyclic of order {order}")
    coeffs = [c % order for c in u[-1]]
    try:
        unit = pow(coeffs[0], -1, order)
    except ValueError:
        raise ValueError("first coordinate does not generate the discriminant group") from None
    return DiscriminantData(order=order, coeffs=tuple(c * unit % order for c in coeffs))


def canonical_vector(chain: Chain) -> tuple[int, ...]:
    """The restriction of a canonical-type class: v_i = weight_i + 2."""
    return tuple(w + 2 for w in chain)


def extends_over_ball(chain: Chain, v) -> bool:
    """Decide whether a restriction vector extends over the rational ball.

    Requires v characteristic (v_i = weight_i mod 2) and its discriminant
    image to lie in the index-p subgroup of Z_{p^2} -- the image of the
    restriction map from the ball side.
    """
    if len(v) != len(chain):
        raise ValueError(f"value vector has length {len(v)}, expected {len(chain)}")
    if any((x - w) % 2 for x, w in zip(v, chain)):
        return False
    disc = discriminant(chain)
    p = math.isqrt(disc.order)
    return disc.image(v) % p == 0


def gram_solve(chain: Chain, v) -> tuple[Fraction, ...]:
    """Solve G x = v exactly for the tridiagonal Gram matrix (Thomas algorithm)."""
    k = len(chain)
    if len(v) != k:
        raise ValueError("length mismatch")
    diag = [Fraction(w) for w in chain]
    rhs = [Fraction(x) for x in v]
    # forward sweep (off-diagonals are 1; the chain Gram is nondegenerate)
    for i in range(1, k):
        f = 1 / diag[i - 1]
        diag[i] -= f
        rhs[i] -= f * rhs[i - 1]
    x = [Fraction(0)] * k
    x[-1] = rhs[-1] / diag[-1]
    for i in range(k - 2, -1, -1):
        x[i] = (rhs[i] - x[i + 1]) / diag[i]
    return tuple(x)


def gram_inverse_form(chain: Chain, v) -> Fraction:
    """v^T G^{-1} v, exactly.  For the canonical vector this equals -k."""
    x = gram_solve(chain, v)
    return sum(Fraction(a) * b for a, b in zip(v, x))
