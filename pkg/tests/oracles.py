"""Reference implementations written independently of the package code paths."""

from itertools import permutations
from math import factorial


def cd_mul(a, b):
    """Recursive Cayley-Dickson product on coefficient lists of length 2^k."""
    n = len(a)
    if n == 1:
        return [a[0] * b[0]]
    h = n // 2
    p, q, r, s = a[:h], a[h:], b[:h], b[h:]
    left = _sub(cd_mul(p, r), cd_mul(cd_conj(s), q))
    right = _add(cd_mul(s, p), cd_mul(q, cd_conj(r)))
    return left + right


def cd_conj(a):
    return [a[0]] + [-c for c in a[1:]]


def _add(a, b):
    return [x + y for x, y in zip(a, b)]


def _sub(a, b):
    return [x - y for x, y in zip(a, b)]


def blade_product(a, b):
    """Product of two basis blades of R_{0,m}, given as sorted index tuples.

    Returns (sign, blade) by bubble-sorting the concatenated word and cancelling
    squares with e_i^2 = -1.
    """
    word = list(a) + list(b)
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(word) - 1):
            if word[i] > word[i + 1]:
                word[i], word[i + 1] = word[i + 1], word[i]
                sign = -sign
                changed = True
    out = []
    for g in word:
        if out and out[-1] == g:
            out.pop()
            sign = -sign
        else:
            out.append(g)
    return sign, tuple(out)


def fueter_oracle(z, k):
    """(1/|k|!) times the sum of right-nested products over the distinct orderings of the letters."""
    letters = [ell for ell, kl in enumerate(k) for _ in range(kl)]
    total = None
    for perm in sorted(set(permutations(letters))):
        prod = z[perm[-1]]
        for ell in reversed(perm[:-1]):
            prod = z[ell] * prod
        total = prod if total is None else total + prod
    return total / factorial(len(letters))
