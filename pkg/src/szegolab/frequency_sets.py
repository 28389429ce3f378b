"""Removed-frequency sets: power-law and interval-block generators plus
sparsity/counting diagnostics.

A set here is always a finite increasing list of positive frequencies
together with generator metadata; analytic tail estimates attached to the
generator are what turn finite partial sums into certified verdicts.
"""

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FrequencySet",
    "SparsityReport",
    "ConditionBReport",
    "gen_power_set",
    "gen_interval_blocks",
    "sqrt_sum_diagnostic",
    "condition_B_check",
    "thin_to_condition_B",
    "complement_in_range",
    "primes_upto",
]


def primes_upto(n):
    """Primes <= n by sieve, as a python list."""
    if n < 2:
        return []
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, int(n ** 0.5) + 1):
        if mask[p]:
            mask[p * p:: p] = False
    return [int(p) for p in np.nonzero(mask)[0]]


@dataclass(frozen=True)
class FrequencySet:
    """Finite increasing set of positive frequencies with provenance."""

    elements: tuple
    generator: str = "explicit"
    count_limit: int = 0
    # generator parameters, populated by the constructors below
    rho: float | None = None

    def __post_init__(self):
        elems = tuple(float(e) for e in self.elements)
        if any(e <= 0 for e in elems):
            raise ValueError("all frequencies must be positive")
        if any(b <= a for a, b in zip(elems, elems[1:])):
            raise ValueError("frequencies must be strictly increasing")
        object.__setattr__(self, "elements", elems)

    def __len__(self):
        return len(self.elements)

    @property
    def array(self):
        return np.asarray(self.elements, dtype=np.float64)

    @property
    def gap(self):
        """Uniform discreteness gap; inf for a singleton."""
        if len(self.elements) < 2:
            return math.inf
        return min(b - a for a, b in zip(self.elements, self.elements[1:]))

    def sqrt_sum_tail(self):
        """Analytic bound on sum of gamma^(-1/2) past the generated range.

        Available for power generators with rho > 2 (integral comparison);
        None means no certified tail.
        """
        if self.rho is not None and self.rho > 2:
            k = self.count_limit
            return k ** (1.0 - self.rho / 2.0) / (self.rho / 2.0 - 1.0)
        return None

    def to_text(self):
        lines = [f"# generator: {self.generator}"]
        lines += [repr(e) for e in self.elements]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        generator = "explicit"
        elems = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "generator:" in line:
                    generator = line.split("generator:", 1)[1].strip()
                continue
            elems.append(float(line))
        return cls(tuple(elems), generator=generator, count_limit=len(elems))


@dataclass
class SparsityReport:
    """Partial sums of gamma^(-1/2) with an optional certified tail."""

    partial_sqrt_sums: list
    tail_bound: float | None
    verdict: str
    note: str = ""


@dataclass
class ConditionBReport:
    points: list = field(default_factory=list)  # (x, count, bound, ok)
    passed: bool = True


def gen_power_set(rho, count):
    """{floor(k^rho) : 1 <= k <= count}, duplicates removed."""
    if rho <= 1:
        raise ValueError("rho must exceed 1 for a uniformly discrete set")
    if count < 1:
        raise ValueError("count must be positive")
    vals = sorted({math.floor(k ** rho) for k in range(1, count + 1)})
    return FrequencySet(tuple(float(v) for v in vals),
                        generator=f"power(rho={rho}, count={count})",
                        count_limit=count, rho=float(rho))


def gen_interval_blocks(block_starts, block_lengths):
    """Union of integer intervals [s_m, s_m + L_m]; blocks must be disjoint."""
    if len(block_starts) != len(block_lengths):
        raise ValueError("starts and lengths must have equal length")
    blocks = sorted(zip(block_starts, block_lengths))
    elems = []
    prev_end = -math.inf
    for s, length in blocks:
        if s <= prev_end:
            raise ValueError(f"block starting at {s} overlaps its predecessor")
        elems.extend(range(int(s), int(s) + int(length) + 1))
        prev_end = s + length
    spec = ",".join(f"[{int(s)}+{int(l)}]" for s, l in blocks)
    return FrequencySet(tuple(float(e) for e in elems),
                        generator=f"blocks({spec})", count_limit=len(elems))


def sqrt_sum_diagnostic(fset):
    """Partial sums of 1/sqrt(gamma) with a verdict.

    For power(rho) generators the verdict is certified: an integral tail
    bound for rho > 2, a harmonic/integral minorant for rho <= 2.
    Explicit sets get 'undetermined' (finite data cannot decide).
    """
    arr = fset.array
    if arr.size == 0:
        raise ValueError("empty frequency set")
    sums = np.cumsum(1.0 / np.sqrt(arr))
    checkpoints = sorted(set(
        [2 ** i for i in range(int(math.log2(arr.size)) + 1) if 2 ** i <= arr.size]
        + [arr.size]))
    partial = [(int(k), float(sums[k - 1])) for k in checkpoints]

    tail = fset.sqrt_sum_tail()
    if tail is not None:
        return SparsityReport(partial, tail, "converges",
                              note="integral comparison tail bound")
    if fset.rho is not None and fset.rho <= 2:
        # floor(k^rho) <= k^rho, so 1/sqrt(floor(k^rho)) >= k^(-rho/2) and
        # the minorant sum k^(-rho/2) diverges for rho <= 2.
        return SparsityReport(partial, None, "diverges",
                              note="integral minorant k^(-rho/2), rho <= 2")
    if "prime-thinned" in fset.generator:
        return SparsityReport(partial, None, "diverges",
                              note="sum over 1/p diverges (Mertens)")
    return SparsityReport(partial, None, "undetermined",
                          note="no analytic tail attached")


def condition_B_check(fset, C, x_grid):
    """Compare the counting function with C*sqrt(x)/log(x) pointwise."""
    if C <= 0:
        raise ValueError("C must be positive")
    arr = fset.array
    report = ConditionBReport()
    for x in x_grid:
        if x <= math.e:
            raise ValueError(f"grid point {x} must exceed e")
        count = int(np.count_nonzero(arr <= x))
        bound = C * math.sqrt(x) / math.log(x)
        ok = count <= bound
        report.points.append((float(x), count, bound, ok))
        report.passed = report.passed and ok
    return report


def thin_to_condition_B(fset, C):
    """Prime-index subset of a power(rho<=2) set; no-op for rho > 2.

    Keeping floor(k^rho) for prime k makes the counting function grow like
    pi(x^(1/rho)) ~ rho*x^(1/rho)/log(x), which for rho <= 2 sits under
    C*sqrt(x)/log(x) on the generated range while sum 1/sqrt(floor(k^rho))
    over prime k still diverges (for rho = 2 it is sum 1/p, Mertens).
    """
    if fset.rho is None:
        raise ValueError("thinning requires a power-generated set")
    if fset.rho > 2:
        out = FrequencySet(fset.elements,
                           generator=fset.generator + " (no-op: rho>2 already sparse)",
                           count_limit=fset.count_limit, rho=fset.rho)
        return out
    keep = {math.floor(p ** fset.rho) for p in primes_upto(fset.count_limit)}
    elems = tuple(e for e in fset.elements if e in keep)
    return FrequencySet(
        elems,
        generator=f"prime-thinned {fset.generator}",
        count_limit=len(elems))


def complement_in_range(fset, N):
    """Sorted integers in [1, N] not in the set."""
    if N < 1:
        raise ValueError("N must be >= 1")
    removed = {int(e) for e in fset.elements if float(e).is_integer()}
    return [n for n in range(1, N + 1) if n not in removed]
