import itertools
import random

import pytest
import sympy

from qmop.exact import Matrix
from qmop.measurement import MpsFamily, find_unobservable_mps, mps_amplitude
from qmop.mortality import Mortal, bounded_mortality_search, word_product
from qmop.pcp import (
    CORNER,
    PcpInstance,
    check_encoding_correspondence,
    decode_product_word,
    encode_pcp,
    encoded_product_word,
    mortal_word,
    pair_matrix,
    solve_pcp_bounded,
    three_adic,
)

SOLVABLE = PcpInstance(("a",), {"a": "2"}, {"a": "2"})
UNSOLVABLE = PcpInstance(("a",), {"a": "2"}, {"a": "3"})
TWO_LETTER = PcpInstance(("a", "b"), {"a": "23", "b": "2"}, {"a": "2", "b": "32"})


def words_over(alphabet, max_len, min_len=0):
    for n in range(min_len, max_len + 1):
        for w in itertools.product(alphabet, repeat=n):
            yield "".join(w)


def sympy_pair(u, v):
    s = sympy.Matrix([[1, 0, 1], [1, 1, 0], [0, 0, 1]])
    fu = sum(int(c) * 3 ** (len(u) - i - 1) for i, c in enumerate(u))
    fv = sum(int(c) * 3 ** (len(v) - i - 1) for i, c in enumerate(v))
    d = sympy.Matrix([[3 ** len(u), 0, 0], [0, 3 ** len(v), 0], [fu, fv, 1]])
    return s * d * s.inv()


def test_three_adic_examples():
    assert three_adic("1") == 1
    assert three_adic("23") == 9
    assert three_adic("") == 0
    with pytest.raises(ValueError):
        three_adic("4")


def test_three_adic_injective_up_to_length_4():
    words = list(words_over("123", 4, 1))
    assert len(words) == 120
    assert len({three_adic(w) for w in words}) == 120


def test_three_adic_concatenation_law():
    for u in words_over("123", 3):
        for w in words_over("123", 2):
            assert three_adic(u + w) == three_adic(u) * 3 ** len(w) + three_adic(w)


def test_pair_matrix_empty_is_identity():
    assert pair_matrix("", "") == Matrix.identity(3)


def test_pair_matrix_matches_sympy_and_corner_formula():
    rng = random.Random(9)
    for _ in range(50):
        u = "".join(rng.choice("123") for _ in range(rng.randint(0, 5)))
        v = "".join(rng.choice("123") for _ in range(rng.randint(0, 5)))
        f = pair_matrix(u, v)
        assert f.is_integral
        assert f.to_rows() == sympy_pair(u, v).tolist()
        assert f[0, 0] == 3 ** len(u) + three_adic(u) - three_adic(v)
    assert pair_matrix("2", "12")[0, 0] == 0


def test_pair_matrix_homomorphism():
    rng = random.Random(10)
    for _ in range(200):
        u, v, u2, v2 = ("".join(rng.choice("123") for _ in range(rng.randint(0, 5))) for _ in range(4))
        assert pair_matrix(u, v) @ pair_matrix(u2, v2) == pair_matrix(u + u2, v + v2)


def test_corner_zero_iff_v_is_one_u():
    for u in words_over("123", 3):
        for v in words_over("123", 4):
            assert (pair_matrix(u, v)[0, 0] == 0) == (v == "1" + u)


def test_instance_validation():
    with pytest.raises(ValueError):
        PcpInstance(("a",), {"a": "21"}, {"a": "2"})
    with pytest.raises(ValueError):
        PcpInstance(("a",), {"a": ""}, {"a": "2"})
    with pytest.raises(ValueError):
        PcpInstance(("a", "b"), {"a": "2"}, {"a": "2", "b": "3"})


def test_encode_singleton():
    gens = encode_pcp(SOLVABLE).generators
    assert gens == (pair_matrix("2", "2"), pair_matrix("2", "12"), CORNER)
    assert gens[1][0, 0] == 0
    assert encode_pcp(TWO_LETTER).k == 5


def test_corner_idempotent_sandwich():
    rng = random.Random(1)
    for _ in range(30):
        m = Matrix.from_rows([[rng.randint(-9, 9) for _ in range(3)] for _ in range(3)])
        assert CORNER @ m @ CORNER == CORNER.scale(m[0, 0])


def naive_solve(inst, max_len):
    for n in range(1, max_len + 1):
        for w in itertools.product(inst.alphabet, repeat=n):
            if inst.solves(w):
                return w
    return None


def test_solve_examples():
    assert solve_pcp_bounded(SOLVABLE, 3) == ("a",)
    for length in (1, 4, 8):
        assert solve_pcp_bounded(UNSOLVABLE, length) is None
    tricky = PcpInstance(("a", "b"), {"a": "2", "b": "23"}, {"a": "23", "b": "3"})
    assert solve_pcp_bounded(tricky, 8) == naive_solve(tricky, 8)
    assert solve_pcp_bounded(TWO_LETTER, 4) == ("a", "b") == naive_solve(TWO_LETTER, 4)


def test_solve_matches_enumeration_random():
    rng = random.Random(13)
    for _ in range(40):
        alphabet = ("a", "b", "c")[: rng.randint(1, 3)]
        h = {a: "".join(rng.choice("23") for _ in range(rng.randint(1, 3))) for a in alphabet}
        g = {a: "".join(rng.choice("23") for _ in range(rng.randint(1, 3))) for a in alphabet}
        inst = PcpInstance(alphabet, h, g)
        assert solve_pcp_bounded(inst, 5) == naive_solve(inst, 5)


def test_product_word_roundtrip():
    for w in itertools.product("ab", repeat=3):
        gw = encoded_product_word(TWO_LETTER, w)
        assert decode_product_word(TWO_LETTER, gw) == w
        gens = encode_pcp(TWO_LETTER).generators
        h, g = TWO_LETTER.images(w)
        assert word_product(gens, gw) == pair_matrix(h, "1" + g)
    assert decode_product_word(TWO_LETTER, (1, 1)) is None


def test_correspondence_reports():
    report = check_encoding_correspondence(SOLVABLE, 3)
    assert report.ok and ("a",) in report.solutions and report.checked == 3
    report = check_encoding_correspondence(UNSOLVABLE, 6)
    assert report.ok and report.zero_corner_words == () and report.solutions == ()
    report = check_encoding_correspondence(TWO_LETTER, 6)
    assert report.ok and ("a", "b") in report.solutions


def test_mortal_word_is_zero_for_solutions():
    mmp = encode_pcp(TWO_LETTER)
    sol = solve_pcp_bounded(TWO_LETTER, 4)
    assert word_product(mmp.generators, mortal_word(TWO_LETTER, sol)).is_zero()
    assert bounded_mortality_search(encode_pcp(SOLVABLE), 3) == Mortal((3, 2, 3))


def test_mps_finds_pcp_solution():
    fam = MpsFamily(encode_pcp(TWO_LETTER).generators)
    sol = solve_pcp_bounded(TWO_LETTER, 4)
    target = encoded_product_word(TWO_LETTER, sol)
    assert mps_amplitude(fam, target) == 0
    assert target in find_unobservable_mps(fam, len(target)).words
