"""Exact word arithmetic in the mapping class group of the torus.

The group is identified with SL(2,Z): the right-handed Dehn twists along the
two standard curves map to

    a -> ((1, 1), (0, 1))        b -> ((1, 0), (-1, 1))

and equality of mapping classes is equality of integer matrices.  Words are
stored run-length encoded; products are taken left to right, so a
factorization reads exactly like the notation it came from.  Everything here
is a pure function over immutable values and all integers are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

SL2 = tuple[tuple[int, int], tuple[int, int]]
Letter = tuple[str, int]  # generator tag, nonzero exponent
Word = tuple[Letter, ...]

IDENTITY: SL2 = ((1, 0), (0, 1))


def sl2_mul(m: SL2, n: SL2) -> SL2:
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def sl2_inv(m: SL2) -> SL2:
    # determinant 1, so the adjugate is the inverse
    return ((m[1][1], -m[0][1]), (-m[1][0], m[0][0]))


def sl2_det(m: SL2) -> int:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def _letter_matrix(tag: str, exp: int) -> SL2:
    # closed forms: a^n is unipotent upper, b^n unipotent lower
    if tag == "a":
        return ((1, exp), (0, 1))
    if tag == "b":
        return ((1, 0), (-exp, 1))
    raise ValueError(f"unknown generator {tag!r}")


def normalize(letters) -> Word:
    """Run-length normal form: merge adjacent equal generators, drop exponent 0."""
    out: list[Letter] = []
    for tag, exp in letters:
        if exp == 0:
            continue
        if out and out[-1][0] == tag:
            merged = out[-1][1] + exp
            out.pop()
            if merged:
                out.append((tag, merged))
        else:
            out.append((tag, exp))
    return tuple(out)


def invert_word(w: Word) -> Word:
    return tuple((tag, -exp) for tag, exp in reversed(w))


def concat(*words: Word) -> Word:
    letters: list[Letter] = []
    for w in words:
        letters.extend(w)
    return normalize(letters)


def eval_word(w: Word) -> SL2:
    m = IDENTITY
    for tag, exp in w:
        m = sl2_mul(m, _letter_matrix(tag, exp))
    return m


def words_equal_in_group(w1: Word, w2: Word) -> bool:
    return eval_word(w1) == eval_word(w2)


def parse_word(text: str) -> Word:
    """Parse word syntax: letters a, b, A (=a^-1), B (=b^-1), `^` exponents,
    and parenthesized groups, e.g. "a^7", "(ab)^6", "A^4 b a^4".
    """
    tokens = list(text)
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(tokens) and tokens[pos].isspace():
            pos += 1

    def read_exponent() -> int:
        nonlocal pos
        skip_ws()
        if pos < len(tokens) and tokens[pos] == "^":
            pos += 1
            skip_ws()
            start = pos
            if pos < len(tokens) and tokens[pos] in "+-":
                pos += 1
            while pos < len(tokens) and tokens[pos].isdigit():
                pos += 1
            if pos == start or not tokens[start:pos]:
                raise ValueError(f"expected integer exponent at position {start} in {text!r}")
            digits = "".join(tokens[start:pos])
            if digits in ("+", "-"):
                raise ValueError(f"expected integer exponent at position {start} in {text!r}")
            return int(digits)
        return 1

    def parse_seq(depth: int) -> list[Letter]:
        nonlocal pos
        items: list[Letter] = []
        while True:
            skip_ws()
            if pos >= len(tokens):
                if depth:
                    raise ValueError(f"unbalanced parenthesis in {text!r}")
                break
            ch = tokens[pos]
            if ch == ")":
                if not depth:
                    raise ValueError(f"unbalanced parenthesis at position {pos} in {text!r}")
                break
            if ch == "(":
                pos += 1
                inner = parse_seq(depth + 1)
                skip_ws()
                if pos >= len(tokens) or tokens[pos] != ")":
                    raise ValueError(f"unbalanced parenthesis in {text!r}")
                pos += 1
                exp = read_exponent()
                block = tuple(inner)
                if exp < 0:
                    block, exp = invert_word(block), -exp
                items.extend(block * exp)
            elif ch in "abAB":
                pos += 1
                exp = read_exponent()
                tag = ch.lower()
                if ch.isupper():
                    exp = -exp
                items.append((tag, exp))
            else:
                raise ValueError(f"unexpected character {ch!r} at position {pos} in {text!r}")
        return items

    return normalize(parse_seq(0))


def word_to_str(w: Word) -> str:
    if not w:
        return "1"
    parts = []
    for tag, exp in w:
        letter = tag if exp > 0 else tag.upper()
        e = abs(exp)
        parts.append(letter if e == 1 else f"{letter}^{e}")
    return " ".join(parts)


@dataclass(frozen=True)
class Twist:
    """One group of right-handed Dehn twists: conjugator . cycle^multiplicity . conjugator^-1,

    counted as `multiplicity` separate twists along the image of the core cycle
    under the conjugator.
    """

    cycle: str
    conjugator: Word = ()
    multiplicity: int = 1

    def __post_init__(self):
        if self.cycle not in ("a", "b"):
            raise ValueError(f"twist cycle must be 'a' or 'b', got {self.cycle!r}")
        if self.multiplicity < 1:
            raise ValueError("twist multiplicity must be >= 1")


def expand_twist(t: Twist) -> Word:
    core: Word = ((t.cycle, t.multiplicity),)
    if not t.conjugator:
        return core
    return concat(t.conjugator, core, invert_word(t.conjugator))


def expand_factorization(twists) -> Word:
    return concat(*(expand_twist(t) for t in twists))


def normalize_cycle(u: int, v: int) -> tuple[int, int]:
    """Primitive class up to sign; first nonzero coordinate made positive."""
    from math import gcd

    g = gcd(u, v)
    if g:
        u, v = u // g, v // g
    if u < 0 or (u == 0 and v < 0):
        u, v = -u, -v
    return (u, v)


def vanishing_cycle(t: Twist) -> tuple[int, int]:
    """Image of the core cycle under the conjugator: (1,0) for a, (0,1) for b."""
    m = eval_word(t.conjugator)
    c = (1, 0) if t.cycle == "a" else (0, 1)
    return normalize_cycle(m[0][0] * c[0] + m[0][1] * c[1], m[1][0] * c[0] + m[1][1] * c[1])


@dataclass(frozen=True)
class FibrationReport:
    is_identity: bool
    twist_count: int
    expected_twists: int
    cycles: tuple[tuple[int, int], ...]  # one entry per unit twist
    word: Word = field(repr=False, default=())

    @property
    def passed(self) -> bool:
        return self.is_identity and self.twist_count == self.expected_twists


def verify_fibration(twists, expected_twists: int) -> FibrationReport:
    """Check that a twist factorization can be the monodromy of a fibration:

    the expanded word must evaluate to the identity and the number of unit
    twists must match the expected count of singular fibers.  Failures are
    report fields, not exceptions.
    """
    if expected_twists < 0:
        raise ValueError("expected_twists must be >= 0")
    word = expand_factorization(twists)
    cycles = []
    for t in twists:
        c = vanishing_cycle(t)
        cycles.extend([c] * t.multiplicity)
    return FibrationReport(
        is_identity=eval_word(word) == IDENTITY,
        twist_count=sum(t.multiplicity for t in twists),
        expected_twists=expected_twists,
        cycles=tuple(cycles),
        word=word,
    )


def standard_factorizations() -> dict[str, tuple[Twist, ...]]:
    """The three 12-twist torus fibration factorizations used throughout:

    I7: a^7 b^(a^-4) b^(a^-1) a^2 b     (an I7 fiber and five fishtails)
    I8: a^8 b^(a^-2) b^2 b^(a^2)        (an I8 fiber and four fishtails)
    I6: a^6 b^(a^-3) b^2 (a^(b^-1))^3   (an I6 fiber and six fishtails)
    """
    return {
        "I7": (
            Twist("a", (), 7),
            Twist("b", parse_word("A^4")),
            Twist("b", parse_word("A")),
            Twist("a", (), 2),
            Twist("b"),
        ),
        "I8": (
            Twist("a", (), 8),
            Twist("b", parse_word("A^2")),
            Twist("b", (), 2),
            Twist("b", parse_word("a^2")),
        ),
        "I6": (
            Twist("a", (), 6),
            Twist("b", parse_word("A^3")),
            Twist("b", (), 2),
            Twist("a", parse_word("B"), 3),
        ),
    }


def _conj(inner: str, by: str) -> Word:
    # x^w = w x w^-1
    w = parse_word(by)
    return concat(w, parse_word(inner), invert_word(w))


def relation_suite() -> list[tuple[str, bool]]:
    """Verify the stock of relations the fibration constructions rest on.

    Each item is (display name, holds in the group).  All seven are expected
    to pass; they are rechecked rather than assumed.
    """
    p = parse_word
    cube = p("(a^3b)^3")
    long_word = p("a^3 b a^2 b^2 a^2 b a")
    checks = [
        ("(ab)^6 = 1", p("(ab)^6"), ()),
        ("(a^3b)^3 = 1", cube, ()),
        (
            "(a^3b)^3 = a^7 b^(a^-4) b^(a^-1) a^2 b",
            cube,
            concat(p("a^7"), _conj("b", "A^4"), _conj("b", "A"), p("a^2 b")),
        ),
        ("a^3 b a^2 b^2 a^2 b a = 1", long_word, ()),
        (
            "a^3 b a^2 b^2 a^2 b a = a^8 b^(a^-2) b^2 b^(a^2)",
            long_word,
            concat(p("a^8"), _conj("b", "A^2"), p("b^2"), _conj("b", "a^2")),
        ),
        (
            "(a^3b)^3 = a^6 b^(a^-3) b^2 (a^(b^-1))^3",
            cube,
            concat(p("a^6"), _conj("b", "A^3"), p("b^2"), _conj("a^3", "B")),
        ),
        ("b = a^(ab)", p("b"), _conj("a", "ab")),
    ]
    return [(name, words_equal_in_group(lhs, rhs)) for name, lhs, rhs in checks]
