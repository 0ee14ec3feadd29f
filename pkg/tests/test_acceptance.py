"""Exit criteria. Each test records one PASS/FAIL line, printed at the end of the run."""

import itertools
import random
import time
from fractions import Fraction

from qmop.exact import Matrix, is_nilpotent, nilpotency_index
from qmop.measurement import (
    AllOccur,
    ClassicalDevice,
    ExistsEmptyPort,
    MpsFamily,
    classical_sequence_probability,
    decide_cmop,
    find_empty_ports,
    find_unobservable_mps,
    mps_amplitude,
    sequence_probability,
)
from qmop.mortality import Immortal, MmpInstance, Mortal, bounded_mortality_search, decide_nonneg_mortality, word_product
from qmop.pcp import (
    PcpInstance,
    check_encoding_correspondence,
    encode_pcp,
    encoded_product_word,
    pair_matrix,
    solve_pcp_bounded,
)
from qmop.reduction import build_kraus_from_mmp, compute_probability_gap, map_word_q_to_m, validate_device
from qmop.samples import planted_mortal_mmp, random_classical_device, random_device, random_mmp, random_stochastic

from oracles import brute_force_mortal

SEED = 20260101
RESULTS: list[str] = []

SOLVABLE = PcpInstance(("a",), {"a": "2"}, {"a": "2"})
UNSOLVABLE = PcpInstance(("a",), {"a": "2"}, {"a": "3"})


def record(number: int, name: str, ok: bool, elapsed: float, limit: float | None, detail: str = ""):
    in_time = limit is None or elapsed < limit
    status = "PASS" if ok and in_time else "FAIL"
    budget = f" (limit {limit:.0f}s)" if limit is not None else ""
    RESULTS.append(f"[{status}] criterion {number}: {name} {elapsed:.2f}s{budget} {detail}".rstrip())
    assert ok, detail
    assert in_time, f"took {elapsed:.2f}s, limit {limit}s"


def test_1_channel_completeness():
    rng = random.Random(SEED)
    start = time.perf_counter()
    failures = 0
    for _ in range(100):
        cert = build_kraus_from_mmp(random_mmp(rng, lo=-5, hi=5))
        if not validate_device(cert.device) or cert.device.completeness_sum() != Matrix.identity(15):
            failures += 1
    record(1, "channel completeness", failures == 0, time.perf_counter() - start, 10,
           f"{100 - failures}/100 exact")


def test_2_reduction_correspondence():
    rng = random.Random(SEED + 2)
    start = time.perf_counter()
    problems = []
    backward_words = 0
    for i in range(20):
        inst = planted_mortal_mmp(rng)
        verdict = bounded_mortality_search(inst, 4)
        if not isinstance(verdict, Mortal) or len(verdict.witness) > 4:
            problems.append(f"instance {i}: no witness <= 4")
            continue
        dev = build_kraus_from_mmp(inst).device
        prod = word_product(dev.kraus, verdict.witness)
        index = nilpotency_index(prod)
        if not prod.block(0, 3, 0, 3).is_zero() or not is_nilpotent(prod) or index is None or index > 15:
            problems.append(f"instance {i}: forward direction")
        report = find_empty_ports(dev, 4)
        if not report.words:
            problems.append(f"instance {i}: no empty port up to depth 4")
        for w in report.words:
            backward_words += 1
            if not word_product(inst.generators, map_word_q_to_m(w)).is_zero():
                problems.append(f"instance {i}: backward word {w}")
    record(2, "reduction correspondence", not problems, time.perf_counter() - start, 30,
           f"{backward_words} empty-port words checked" + (f"; {problems[:3]}" if problems else ""))


def all_01_2x2():
    for bits in itertools.product((0, 1), repeat=4):
        yield [list(bits[:2]), list(bits[2:])]


def test_3_nonneg_decider_vs_brute_force():
    start = time.perf_counter()
    mats = list(all_01_2x2())
    disagreements = []
    count = 0
    for a, b in itertools.product(mats, repeat=2):
        count += 1
        verdict = decide_nonneg_mortality(MmpInstance((Matrix.from_rows(a), Matrix.from_rows(b))))
        expected = brute_force_mortal([a, b], 16)
        want = Immortal() if expected is None else Mortal(expected)
        if verdict != want:
            disagreements.append((a, b))
    record(3, "non-negative decider vs brute force", not disagreements, time.perf_counter() - start, 60,
           f"{count} instances, {len(disagreements)} disagreements")


def test_4_probability_normalization():
    start = time.perf_counter()
    dev = build_kraus_from_mmp(MmpInstance((Matrix.identity(3),) * 8)).device
    total = sum(sequence_probability(dev, w) for w in itertools.product(range(1, 10), repeat=3))
    record(4, "probability normalization", total == 1, time.perf_counter() - start, 20, f"sum = {total}")


def test_5_probability_gap():
    rng = random.Random(SEED + 5)
    start = time.perf_counter()
    violations = 0
    zeros = 0
    checked = 0
    for _ in range(10):
        d, k = rng.randint(2, 4), rng.randint(2, 3)
        dev = random_device(rng, d, k, zero_rate=0.5)
        assert validate_device(dev)
        delta, _ = compute_probability_gap(dev)
        for n in range(1, 5):
            bound = delta ** n
            for w in itertools.product(range(1, k + 1), repeat=n):
                p = sequence_probability(dev, w)
                checked += 1
                zeros += p == 0
                if p != 0 and p < bound:
                    violations += 1
    record(5, "probability gap", violations == 0, time.perf_counter() - start, None,
           f"{checked} words, {zeros} exact zeros, {violations} violations")


def test_6_pcp_encoding():
    rng = random.Random(SEED + 6)
    start = time.perf_counter()
    hom_fail = 0
    integral_fail = 0
    for _ in range(200):
        u, v, u2, v2 = ("".join(rng.choice("123") for _ in range(rng.randint(0, 5))) for _ in range(4))
        f1, f2, f12 = pair_matrix(u, v), pair_matrix(u2, v2), pair_matrix(u + u2, v + v2)
        hom_fail += f1 @ f2 != f12
        integral_fail += not (f1.is_integral and f2.is_integral and f12.is_integral)
    solvable = check_encoding_correspondence(SOLVABLE, 3)
    unsolvable = check_encoding_correspondence(UNSOLVABLE, 6)
    mortal = bounded_mortality_search(encode_pcp(SOLVABLE), 3)
    mortal_ok = isinstance(mortal, Mortal) and len(mortal.witness) <= 3 and mortal.witness == (3, 2, 3)
    ok = (hom_fail == 0 and integral_fail == 0 and solvable.ok and ("a",) in solvable.solutions
          and unsolvable.ok and not unsolvable.zero_corner_words and mortal_ok)
    record(6, "PCP encoding", ok, time.perf_counter() - start, 10,
           f"hom {200 - hom_fail}/200, mismatches {len(solvable.mismatches)}+{len(unsolvable.mismatches)}, "
           f"witness {getattr(mortal, 'witness', None)}")


def test_7_cmop_end_to_end():
    rng = random.Random(SEED + 7)
    start = time.perf_counter()
    problems = []
    verdicts = []
    uniform = [Fraction(1, 3)] * 3
    for i in range(20):
        cdev = random_classical_device(rng, 3, 2, zero_rate=0.6)
        verdict = decide_cmop(cdev)
        verdicts.append(type(verdict).__name__)
        expected = brute_force_mortal([q.to_rows() for q in cdev.parts], 64, early_exit=True)
        want = AllOccur() if expected is None else ExistsEmptyPort(expected)
        if verdict != want:
            problems.append(f"device {i}: {verdict} vs {want}")
        if isinstance(verdict, ExistsEmptyPort) and classical_sequence_probability(cdev, verdict.witness, uniform) != 0:
            problems.append(f"device {i}: witness has positive probability")
    for _ in range(20):
        if decide_cmop(ClassicalDevice((random_stochastic(rng, 3),))) != AllOccur():
            problems.append("stochastic K=1 device reported an empty port")
    record(7, "CMOP end-to-end", not problems, time.perf_counter() - start, None,
           f"{verdicts.count('ExistsEmptyPort')} with empty port, {verdicts.count('AllOccur')} all-occur"
           + (f"; {problems[:3]}" if problems else ""))


def test_8_mps_search():
    start = time.perf_counter()
    solution = solve_pcp_bounded(SOLVABLE, 4)
    fam = MpsFamily(encode_pcp(SOLVABLE).generators)
    target = encoded_product_word(SOLVABLE, solution)
    found = find_unobservable_mps(fam, len(target)).words
    ok = solution == ("a",) and target in found and mps_amplitude(fam, target) == 0
    ok = ok and all(mps_amplitude(fam, w) == 0 for w in found)
    record(8, "MPS search", ok, time.perf_counter() - start, None, f"solution {solution} -> word {target}, found {found}")
