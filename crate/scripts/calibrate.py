"""Independent brute-force calibration for the statistical acceptance checks.

Re-implements GF(4) arithmetic, Reed-Solomon RS[4,2], random binary codes and
random concatenation from scratch (no shared code with the Rust crates) and
prints the frequencies used to pin the thresholds in the acceptance suite.
"""
import itertools
import math
import random

# GF(4) with x^2 + x + 1
def gf4_mul(a, b):
    r = 0
    for i in range(2):
        if (b >> i) & 1:
            r ^= a << i
    if r & 0b100:
        r ^= 0b111
    return r


def h2(x):
    if x <= 0 or x >= 1:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def h2_inv(y):
    lo, hi = 0.0, 0.5
    for _ in range(200):
        mid = (lo + hi) / 2
        if h2(mid) < y:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def rs42_codebook():
    pts = [0, 1, 2, 3]
    book = []
    for m0, m1 in itertools.product(range(4), repeat=2):
        book.append(tuple(m0 ^ gf4_mul(m1, p) for p in pts))
    return book


def rs42_worst_list(alpha_violations, ell):
    book = rs42_codebook()
    subsets = [frozenset(s) for s in itertools.combinations(range(4), ell)]
    worst = 0
    for S in itertools.product(subsets, repeat=4):
        cnt = 0
        for c in book:
            v = sum(1 for i in range(4) if c[i] not in S[i])
            if v <= alpha_violations:
                cnt += 1
        worst = max(worst, cnt)
    return worst


def rank_gf2(rows, ncols):
    rows = list(rows)
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(rows)):
            if (rows[r] >> col) & 1:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and (rows[r] >> col) & 1:
                rows[r] ^= rows[rank]
        rank += 1
    return rank


def random_code_distance(n, k, rng):
    # columns of the n x k generator, stored as k n-bit codewords
    while True:
        gens = [rng.getrandbits(n) for _ in range(k)]
        if rank_gf2(gens, n) == k:
            break
    best = n
    for mask in range(1, 1 << k):
        w = 0
        for j in range(k):
            if (mask >> j) & 1:
                w ^= gens[j]
        best = min(best, bin(w).count("1"))
    return best


def thommesen_distance(rng):
    # outer RS[4,2]/GF(4); per-coordinate random binary 4x2 inner generators
    inners = [[rng.getrandbits(2) for _ in range(4)] for _ in range(4)]
    best = 16
    for cw in rs42_codebook():
        if cw == (0, 0, 0, 0):
            continue
        w = 0
        for blk, sym in enumerate(cw):
            for row in inners[blk]:
                w += bin(row & sym).count("1") & 1
        best = min(best, w)
    return best


if __name__ == "__main__":
    print("RS[4,2] worst list size, 1 violation, ell=2:", rs42_worst_list(1, 2))
    print("RS[4,2] worst list size, 0 violations, ell=2:", rs42_worst_list(0, 2))
    print("RS[4,2] worst list size, 1 violation, ell=1:", rs42_worst_list(1, 1))

    target = h2_inv(1 - 4 / 14) - 0.1
    need = math.ceil(target * 14 - 1e-12)
    rng = random.Random(20261016)
    trials = 200000
    hits = sum(random_code_distance(14, 4, rng) >= need for _ in range(trials))
    p = hits / trials
    print(f"GV [14,4]: target rel {target:.6f} -> d >= {need}; p = {p:.5f}")
    for z in (3.0, 4.0):
        print(f"  p - {z} sigma(100) = {p - z * math.sqrt(p * (1 - p) / 100):.4f}")

    target = h2_inv(1 - 0.25) - 0.1
    need = math.ceil(target * 16 - 1e-12)
    hits = 0
    dist_hist = {}
    for _ in range(trials):
        d = thommesen_distance(rng)
        dist_hist[d] = dist_hist.get(d, 0) + 1
        hits += d >= need
    p = hits / trials
    print(f"Thommesen: target rel {target:.6f} -> d >= {need}; p = {p:.5f}")
    print("  histogram", sorted(dist_hist.items()))
    for z in (3.0, 4.0):
        print(f"  p - {z} sigma(200) = {p - z * math.sqrt(p * (1 - p) / 200):.4f}")
