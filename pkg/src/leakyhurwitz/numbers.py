"""Public Hurwitz-number API.

Connected numbers come from the commutation engine; disconnected
numbers assemble connected blocks over all ways to split the labeled
parts, with the identical insertions distributed by counts.  One-part
numbers additionally have a closed product-of-sigmas form and, in genus
zero, a fully closed polynomial; torus-corrected comparison numbers
replace each insertion by its two-term correction.  A small
line-oriented cache makes repeated CLI queries cheap.
"""
from __future__ import annotations

import itertools
import json
import math
import os
import threading
import time
from typing import NamedTuple

from .series import (
    Q,
    sigma_ratio_series,
    sigma_series,
    zvars_form,
)
from .fock import (
    alpha_op,
    connected_hurwitz,
    disconnected_vev_series,
    insertion_op,
)


def canonical_partition(parts):
    parts = tuple(sorted((int(p) for p in parts), reverse=True))
    if any(p <= 0 for p in parts):
        raise ValueError("partition parts must be positive")
    return parts


def aut_factor(parts):
    """Order of the automorphism group: product of multiplicity factorials."""
    out = 1
    run = 1
    parts = tuple(sorted(parts))
    for i, p in enumerate(parts):
        if i and p == parts[i - 1]:
            run += 1
            out *= run
        else:
            run = 1
    return out


class HurwitzQuery(NamedTuple):
    mu: tuple
    nu: tuple
    k: int
    r: int
    s: int
    connected: bool = True


def make_query(mu, nu, k, r, s, connected=True):
    mu = canonical_partition(mu)
    nu = canonical_partition(nu)
    if r < 1:
        raise ValueError("need r >= 1")
    if s < 0:
        raise ValueError("need s >= 0")
    return HurwitzQuery(mu, nu, int(k), int(r), int(s), bool(connected))


def genus_of(q):
    """Genus from the ramification count: (r*s + 2 - m - n)/2.

    May be half-integral; such queries evaluate to zero by parity.
    """
    return Q(q.r * q.s + 2 - len(q.mu) - len(q.nu), 2)


def is_balanced(q):
    return sum(q.mu) == sum(q.nu) + q.s * q.k


class HurwitzResult(NamedTuple):
    value: object
    query: HurwitzQuery
    method: str
    ms: float


# -- connected numbers with a small memo --------------------------------

_CONN_CACHE = {}


def connected_cached(mu, nu, k, r, s):
    key = (mu, nu, k, r, s)
    hit = _CONN_CACHE.get(key)
    if hit is None:
        hit = connected_hurwitz(mu, nu, k, r, s)
        _CONN_CACHE[key] = hit
    return hit


def clear_number_caches():
    _CONN_CACHE.clear()


# -- disconnected assembly ----------------------------------------------

def _count_multiplicities(parts):
    vals = []
    counts = []
    for p in parts:
        if vals and vals[-1] == p:
            counts[-1] += 1
        else:
            vals.append(p)
            counts.append(1)
    return vals, counts


def _submultisets(parts):
    """All submultisets of a descending tuple, with selection counts.

    Yields (subset_tuple, ways) where ways is the number of distinct
    choices of labeled positions realizing the subset.
    """
    vals, counts = _count_multiplicities(parts)
    picks = [range(c + 1) for c in counts]
    for take in itertools.product(*picks):
        sub = []
        ways = 1
        for v, c, t in zip(vals, counts, take):
            sub.extend([v] * t)
            ways *= math.comb(c, t)
        yield tuple(sub), ways


def _remove_submultiset(parts, sub):
    out = list(parts)
    for p in sub:
        out.remove(p)
    return tuple(out)


def disconnected_hurwitz(mu, nu, k, r, s):
    """Disconnected number: sum over splits of the labeled parts into
    blocks, insertions distributed among blocks by counts.

    Blocks holding neither a mu- nor a nu-part vanish and are skipped;
    the fully empty input at s=0 counts the empty cover once.
    """
    mu = canonical_partition(mu)
    nu = canonical_partition(nu)
    if r < 1 or s < 0:
        raise ValueError("need r >= 1 and s >= 0")
    if sum(mu) != sum(nu) + s * k:
        return Q(0)
    memo = {}

    def rec(rem_mu, rem_nu, rem_s):
        if not rem_mu and not rem_nu:
            return Q(1) if rem_s == 0 else Q(0)
        key = (rem_mu, rem_nu, rem_s)
        hit = memo.get(key)
        if hit is not None:
            return hit
        # anchor the largest remaining mu part (nu part if mu is spent)
        if rem_mu:
            anchor, pool_mu = rem_mu[0], rem_mu[1:]
            total = Q(0)
            for sub_mu, ways_mu in _submultisets(pool_mu):
                block_mu = (anchor,) + sub_mu
                rest_mu = _remove_submultiset(pool_mu, sub_mu)
                for sub_nu, ways_nu in _submultisets(rem_nu):
                    need = sum(block_mu) - sum(sub_nu)
                    rest_nu = _remove_submultiset(rem_nu, sub_nu)
                    for j in range(rem_s + 1):
                        if need != j * k:
                            continue
                        piece = connected_cached(block_mu, sub_nu, k, r, j)
                        if piece == 0:
                            continue
                        total += (Q(ways_mu * ways_nu * math.comb(rem_s, j))
                                  * piece * rec(rest_mu, rest_nu, rem_s - j))
        else:
            anchor, pool_nu = rem_nu[0], rem_nu[1:]
            total = Q(0)
            for sub_nu, ways_nu in _submultisets(pool_nu):
                block_nu = (anchor,) + sub_nu
                rest_nu = _remove_submultiset(pool_nu, sub_nu)
                need = -sum(block_nu)
                for j in range(rem_s + 1):
                    if need != j * k:
                        continue
                    piece = connected_cached((), block_nu, k, r, j)
                    if piece == 0:
                        continue
                    total += (Q(ways_nu * math.comb(rem_s, j))
                              * piece * rec((), rest_nu, rem_s - j))
        memo[key] = total
        return total

    return rec(mu, nu, s)


# -- one-part closed forms ----------------------------------------------

def one_part_connected_series(d, nu, k, r, s):
    """Connected one-part number from the closed product of sigmas.

    Valid for k > 0.  The central 1/sigma(z_[s]) is folded into the
    first nu factor as an exact ratio of unit series.
    """
    if k <= 0:
        raise ValueError("the closed one-part product needs k > 0")
    nu = canonical_partition(nu)
    if not nu:
        raise ValueError("nu must be nonempty")
    d = int(d)
    if d <= 0:
        raise ValueError("d must be positive")
    if d != sum(nu) + s * k:
        return Q(0)
    if s == 0:
        return Q(1, d) if nu == (d,) else Q(0)
    caps = (r + 1,) * s
    # ratio sigma(nu_0 z_[s]) / sigma(z_[s])
    total = sigma_ratio_series(nu[0], range(s), caps)
    for part in nu[1:]:
        total = total * sigma_series(zvars_form(part, range(s), s), caps)
    for p in range(1, s + 1):
        # linear form k*(z_1+..+z_{p-1}) + (d-(p-1)k)*z_p, 1-indexed
        form = [0] * s
        for q_ in range(p - 1):
            form[q_] = k
        form[p - 1] = d - (p - 1) * k
        total = total * sigma_series(tuple(form), caps)
    denom = Q(d)
    for part in nu:
        denom *= part
    return total.coefficient((r + 1,) * s) / denom


def one_part_closed_genus0(d, m, k):
    """Genus-zero one-part closed form ((m-1)!/2^(m-2)) prod (2d - p k)."""
    if m < 2:
        raise ValueError("need at least two nu parts")
    value = Q(math.factorial(m - 1), 2 ** (m - 2))
    for p in range(1, m - 1):
        value *= (2 * d - p * k)
    return value


# -- torus-corrected comparison numbers ----------------------------------

def cmr_leaky_r1(mu, nu, k, s, aut=False):
    """Torus-corrected numbers at r=1.

    Each insertion is the square-extracted generating operator minus
    c_k = (k^2-1)/24 times a plain boson of the same energy.  Expanding
    the product over the s slots picks, per slot, either the z^2 or the
    z^0 coefficient; the slots do not commute, so every 0/2 pattern is
    extracted separately rather than collapsed binomially.  With
    aut=True the result also divides by |Aut mu| |Aut nu|.
    """
    mu = canonical_partition(mu)
    nu = canonical_partition(nu)
    if s < 0:
        raise ValueError("need s >= 0")
    if sum(mu) != sum(nu) + s * k:
        return Q(0)
    caps = (2,) * s
    ops = [alpha_op(p) for p in mu]
    ops += [insertion_op(-k, v) for v in range(s)]
    ops += [alpha_op(-p) for p in nu]
    c_k = Q(k * k - 1, 24)
    total = Q(0)
    if ops:
        series = disconnected_vev_series(ops, caps)
        for pattern in itertools.product((2, 0), repeat=s):
            zeros = pattern.count(0)
            if zeros and c_k == 0:
                continue
            total += (-c_k) ** zeros * series.coefficient(pattern)
    elif s == 0:
        total = Q(1)
    denom = Q(1)
    for p in mu + nu:
        denom *= p
    if aut:
        denom *= aut_factor(mu) * aut_factor(nu)
    return total / denom


# -- cache ---------------------------------------------------------------

class HurwitzCache:
    """Write-through cache of evaluated queries.

    Records are newline-delimited JSON objects with decimal-string
    numerator and denominator.  Lookups also try the swapped query
    (nu, mu, -k), which has the same value.  Readers take no lock on
    the in-memory dict beyond the GIL; writers serialize on a lock.
    """

    def __init__(self, path=None):
        self._path = path
        self._mem = {}
        self._lock = threading.Lock()
        if path and os.path.exists(path):
            with open(path, "r", encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    rec = json.loads(line)
                    key = (tuple(rec["mu"]), tuple(rec["nu"]), rec["k"],
                           rec["r"], rec["s"], rec["connected"])
                    self._mem[key] = Q(int(rec["num"])) / Q(int(rec["den"]))

    @staticmethod
    def _key(q):
        return (q.mu, q.nu, q.k, q.r, q.s, q.connected)

    @staticmethod
    def _dual_key(q):
        return (q.nu, q.mu, -q.k, q.r, q.s, q.connected)

    def lookup(self, q):
        hit = self._mem.get(self._key(q))
        if hit is None:
            hit = self._mem.get(self._dual_key(q))
        return hit

    def store(self, q, value):
        with self._lock:
            self._mem[self._key(q)] = value
            if self._path:
                num = value.numerator
                den = value.denominator
                rec = {
                    "mu": list(q.mu), "nu": list(q.nu), "k": q.k,
                    "r": q.r, "s": q.s, "connected": q.connected,
                    "num": str(num), "den": str(den),
                }
                with open(self._path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps(rec, sort_keys=True) + "\n")

    def __len__(self):
        return len(self._mem)


def evaluate(q, cache=None):
    """Evaluate a query, consulting and filling the cache if given."""
    start = time.perf_counter()
    value = cache.lookup(q) if cache is not None else None
    method = "cache"
    if value is None:
        if q.connected:
            value = connected_hurwitz(q.mu, q.nu, q.k, q.r, q.s)
            method = "engine"
        else:
            value = disconnected_hurwitz(q.mu, q.nu, q.k, q.r, q.s)
            method = "inclusion-exclusion"
        if cache is not None:
            cache.store(q, value)
    ms = (time.perf_counter() - start) * 1000.0
    return HurwitzResult(value, q, method, ms)
