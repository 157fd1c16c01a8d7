"""Seeded finite-field Monte Carlo over splitting types, and the built-in
Fermat cone-line suites.

A trial draws the n-1 restricted partials of a hypersurface along a fixed
line uniformly at random over GF(p); the splitting type depends on the
tuple alone, so tallying types estimates stratum codimensions as
-log_p(frequency). Draws whose tuple fails the consistency validation
correspond to hypersurfaces singular somewhere along the line; they are
redrawn from the continuing stream (the conditional measure on the
smooth-along-the-line locus) and counted in the report.

Sharding contract: trials are split into per-worker chunks whose streams
are seeded by (seed, worker index); merged tallies equal a sequential run
of the same chunks, so worker count never changes the result.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from . import core
from .errors import ConsistencyError, DomainError
from .exactalg import GF, MultiPoly, _is_prime
from .normal import Line, adapt_coordinates
from .strata import SplittingType, enumerate_types
from .tangent import tangent_dims


@dataclass
class SamplingReport:
    n: int
    d: int
    p: int
    trials: int
    seed: int
    workers: int
    counts: dict                  # SplittingType -> int
    rejected: int                 # singular draws that were redrawn
    backend: str = dc_field(default="", compare=False)

    def frequency(self, t: SplittingType) -> Fraction:
        return Fraction(self.counts.get(t, 0), self.trials)

    def codim_estimate(self, t: SplittingType):
        """Point estimate -log_p(frequency) plus a two-sigma Wilson interval.

        Returns (estimate, low, high); the estimate and the high end are
        None for unobserved types (frequency zero has infinite estimate).
        """
        c = self.counts.get(t, 0)
        lo_f, hi_f = _wilson(c, self.trials)
        logp = math.log(self.p)

        def to_codim(freq):
            if freq <= 0:
                return None
            return -math.log(freq) / logp

        return to_codim(c / self.trials), to_codim(hi_f), to_codim(lo_f)

    def to_json(self):
        rows = []
        for t in sorted(self.counts, key=lambda s: s.partial_sums(), reverse=True):
            est, lo, hi = self.codim_estimate(t)
            rows.append({
                "type": list(t.entries),
                "u": t.expected_codim,
                "count": self.counts[t],
                "frequency": str(self.frequency(t)),
                "codim_estimate": est,
                "codim_interval": [lo, hi],
            })
        return {"n": self.n, "d": self.d, "p": self.p, "trials": self.trials,
                "seed": self.seed, "workers": self.workers,
                "rejected": self.rejected, "counts": rows}

    def to_csv(self):
        lines = ["type,count"]
        for t in sorted(self.counts, key=lambda s: s.partial_sums(), reverse=True):
            lines.append(f'"{t.label()}",{self.counts[t]}')
        return "\n".join(lines) + "\n"


def _wilson(count: int, total: int, z: float = 2.0):
    """Wilson score interval for a binomial proportion."""
    if total == 0:
        return 0.0, 1.0
    phat = count / total
    z2 = z * z
    denom = 1 + z2 / total
    center = (phat + z2 / (2 * total)) / denom
    half = z * math.sqrt(phat * (1 - phat) / total + z2 / (4 * total * total)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _run_shard(args):
    n, d, p, chunk, seed, shard_index = args
    rng = np.random.default_rng(np.random.SeedSequence([seed, shard_index]))
    width = (n - 1) * d
    counts = {}
    rejected = 0
    remaining = chunk
    while remaining > 0:
        coeffs = rng.integers(0, p, size=(remaining, width), dtype=np.int64)
        mults = core.batch_multiplicities(coeffs, n, d, p)
        bad = mults[:, 0] < 0
        good = np.asarray(mults[~bad], dtype=np.int64)
        if good.shape[0]:
            uniq, cnt = np.unique(good, axis=0, return_counts=True)
            for row, c in zip(uniq, cnt):
                key = tuple(int(v) for v in row)
                counts[key] = counts.get(key, 0) + int(c)
        nbad = int(bad.sum())
        rejected += nbad
        remaining = nbad
    return counts, rejected


def _mults_to_type(mult_key, n, d):
    entries = []
    for k in range(d - 1, -1, -1):
        entries.extend([1 - k] * mult_key[k])
    return SplittingType(tuple(entries), n, d)


def sample_types(n: int, d: int, p: int, trials: int, seed: int = 0,
                 workers: int = 1) -> SamplingReport:
    """Tally splitting types of uniformly random restricted-partial tuples.

    Deterministic given (n, d, p, trials, seed, workers); the worker count
    only affects how trials are partitioned into derived substreams, and
    any partition processed sequentially gives the same tally as the
    parallel run.
    """
    if not _is_prime(p):
        raise DomainError(f"{p} is not prime")
    if p <= d:
        raise DomainError(f"need p > d, got p={p}, d={d}")
    if trials < 1:
        raise DomainError("need at least one trial")
    if workers < 1:
        raise DomainError("need at least one worker")
    base, extra = divmod(trials, workers)
    shards = [(n, d, p, base + (1 if i < extra else 0), seed, i)
              for i in range(workers) if base + (1 if i < extra else 0) > 0]
    if workers == 1 or len(shards) == 1:
        results = [_run_shard(s) for s in shards]
    else:
        try:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_run_shard, shards))
        except (OSError, PermissionError):   # restricted environments
            results = [_run_shard(s) for s in shards]
    counts, rejected = {}, 0
    for shard_counts, shard_rejected in results:
        rejected += shard_rejected
        for key, c in shard_counts.items():
            counts[key] = counts.get(key, 0) + c
    typed = {_mults_to_type(key, n, d): c for key, c in counts.items()}
    return SamplingReport(n=n, d=d, p=p, trials=trials, seed=seed,
                          workers=workers, counts=typed, rejected=rejected,
                          backend=core.BACKEND)


# ----------------------------------------------------------------------
# Fermat cone-line suites
# ----------------------------------------------------------------------


@dataclass
class FermatLineReport:
    a: int
    b: int
    splitting: SplittingType
    dim_TF: int
    dim_TFa: int

    def to_json(self):
        return {"a": self.a, "b": self.b,
                "splitting": list(self.splitting.entries),
                "dim_TF": self.dim_TF, "dim_TFa": self.dim_TFa}


@dataclass
class FermatReport:
    n: int
    d: int
    p: int
    zeta: int
    pairs: list
    lines: list
    expected_type: SplittingType

    def to_json(self):
        return {"n": self.n, "d": self.d, "p": self.p, "zeta": self.zeta,
                "expected_type": list(self.expected_type.entries),
                "pairs": [list(pr) for pr in self.pairs],
                "lines": [ln.to_json() for ln in self.lines]}


def fermat_constants(d: int, p: int):
    """Smallest root of -1 of order d and all (a, b) with a^d + b^d + 1 = 0.

    Raises when GF(p) has no d-th root of -1 or no root pairs; the caller
    then picks another prime.
    """
    zeta = next((z for z in range(1, p) if pow(z, d, p) == p - 1), None)
    if zeta is None:
        raise DomainError(f"no d-th root of -1 in GF({p})")
    powers = [pow(a, d, p) for a in range(p)]
    pairs = [(a, b) for a in range(p) for b in range(p)
             if (powers[a] + powers[b] + 1) % p == 0]
    if not pairs:
        raise DomainError(f"no solutions of a^{d} + b^{d} + 1 = 0 in GF({p})")
    return zeta, pairs


def find_fermat_prime(d: int, start: int = 17) -> int:
    """Smallest prime from `start` upward admitting the needed constants."""
    p = max(start, d + 2)
    while True:
        if _is_prime(p):
            try:
                fermat_constants(d, p)
                return p
            except DomainError:
                pass
        p += 1


def fermat_suite(n: int, d: int, p: int | None = None) -> FermatReport:
    """Cone lines on the degree-d Fermat hypersurface in dimension n.

    Builds the line through [1, 0, a, b, 0, ..., 0] and [0, 1, 0, ..., 0, z]
    for every root pair (a, b) and the found root z of -1 (both points lie
    on a cone over a lower-dimensional Fermat hypersurface), then asserts
    the splitting type (2-d, 1, ..., 1), the tangent dimension
    2n - 6 + max(0, 3 - d), and for quartic threefolds the dichotomy that
    the stratum tangent space is a line exactly when both a and b are
    nonzero. Raises ConsistencyError if any assertion fails.
    """
    if n < 4:
        raise DomainError("cone-line construction needs ambient dimension >= 4")
    if p is None:
        p = find_fermat_prime(d)
    if not _is_prime(p):
        raise DomainError(f"{p} is not prime")
    if p <= d:
        raise DomainError(f"need p > d, got p={p}")
    F = GF(p)
    zeta, pairs = fermat_constants(d, p)
    expected = SplittingType((2 - d,) + (1,) * (n - 3), n, d)
    expected_tf = 2 * n - 6 + max(0, 3 - d)

    monomials = " + ".join(f"x{i}^{d}" for i in range(n + 1))
    f = MultiPoly.parse(monomials, F)

    lines = []
    for a, b in pairs:
        p0 = [1, 0, a, b] + [0] * (n - 3)
        p1 = [0, 1] + [0] * (n - 2) + [zeta]
        line = Line(F, n, [[F.from_int(v) for v in p0],
                           [F.from_int(v) for v in p1]])
        rep = tangent_dims(f, line)
        if rep.splitting != expected:
            raise ConsistencyError(
                f"cone line ({a},{b}) has type {rep.splitting.label()}, "
                f"expected {expected.label()}")
        if rep.dim_TF != expected_tf:
            raise ConsistencyError(
                f"cone line ({a},{b}) has dim_TF {rep.dim_TF}, "
                f"expected {expected_tf}")
        if (n, d) == (4, 4):
            want = 1 if (a % p) and (b % p) else rep.dim_TF
            if rep.dim_TFa != want:
                raise ConsistencyError(
                    f"cone line ({a},{b}) has dim_TFa {rep.dim_TFa}, "
                    f"expected {want}")
        lines.append(FermatLineReport(a=a, b=b, splitting=rep.splitting,
                                      dim_TF=rep.dim_TF, dim_TFa=rep.dim_TFa))
    return FermatReport(n=n, d=d, p=p, zeta=zeta, pairs=pairs, lines=lines,
                        expected_type=expected)
