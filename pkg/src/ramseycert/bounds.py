"""Closed-form bound arithmetic and the replayable certification pipeline.

The lower-bound engine: pick a prime power q with t | q - 1 in a window sized
by (m, t), take the multiplicative construction's parameters (n = q(q-1)/t,
d = q - 1, lambda = sqrt(q)), and check the two steps that turn the spectral
inequality into r_k(K_{2,t}; K_m) > n — a threshold clique order m' <= m
(step 1) and a negative log left-hand side of the product-of-terms inequality
(step 2).  Everything an auditor needs to replay the arithmetic is recorded in
the certificate; ``replay_certificate`` re-derives each check with 50-digit
mpmath arithmetic.

Inequality evaluation is in log space throughout (the raw terms overflow
doubles at realistic m); when a log-LHS lands within 1e-6 of zero the sign is
re-decided in extended precision before it is trusted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import ceil, floor, log, sqrt

import mpmath

from .fields import is_prime

TOOL_NAME = "ramseycert"

_REPLAY_DPS = 50
_SIGN_GUARD = 1e-6


def _tool_version() -> str:
    from . import __version__
    return __version__


@dataclass(frozen=True)
class BoundQuery:
    """A Ramsey query r_k(K_{2,t}; K_m): k bipartite colors, one clique color."""

    k: int
    t: int
    m: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.t < 2:
            raise ValueError("t must be >= 2")
        if self.m < 3:
            raise ValueError("m must be >= 3")

    def to_dict(self) -> dict:
        return {"k": self.k, "t": self.t, "m": self.m}


# -- closed-form bounds -----------------------------------------------------------


def simple_lower(query: BoundQuery) -> int:
    """(m-1)(t+1): the blow-up colouring bound.  Strict: r > this value."""
    return (query.m - 1) * (query.t + 1)


def kst_upper(n: int | float, t: int) -> tuple[float, float]:
    """Extremal edge bounds for K_{2,t+1}-free n-vertex graphs:
    (refined, relaxed) = (0.5*sqrt(t-1)*n^1.5 + n/2, sqrt(t)*n^1.5)."""
    if not 2 <= t <= n:
        raise ValueError("need 2 <= t <= n")
    refined = 0.5 * sqrt(t - 1) * n**1.5 + n / 2
    relaxed = sqrt(t) * n**1.5
    return refined, relaxed


def aks_alpha_lower(n: float, d: float, s_triangles: float, c: float) -> float:
    """(c*n/d) * (log d - 0.5*log(s/n)): independence bound from triangle sparsity."""
    if d <= 1 or s_triangles <= 0 or c <= 0 or n <= 0:
        raise ValueError("need n > 0, d > 1, s_triangles > 0, c > 0")
    return (c * n / d) * (log(d) - 0.5 * log(s_triangles / n))


def aks_alpha_lower_corollary(n: float, d: float, f: float, c: float) -> float:
    """(c*n/(2d)) * log f: the form for neighborhoods spanning <= d^2/f edges."""
    if d <= 1 or f <= 0 or c <= 0 or n <= 0:
        raise ValueError("need n > 0, d > 1, f > 0, c > 0")
    return (c * n / (2 * d)) * log(f)


def prop1_upper(query: BoundQuery, c1: float) -> float:
    """c2 * m^2 t / log^2 m with c2 = 256 k^2 / c1^2 (c1 from the caller;
    it descends from an unspecified absolute constant and has no default)."""
    if not 0 < c1 <= 1:
        raise ValueError("c1 must lie in (0, 1]")
    c2 = 256.0 * query.k**2 / c1**2
    return c2 * query.m**2 * query.t / log(query.m) ** 2


# -- prime powers -----------------------------------------------------------------


def is_prime_power(n: int) -> tuple[int, int] | None:
    """(p, a) with n = p^a, or None."""
    if n < 2:
        return None
    for a in range(n.bit_length(), 0, -1):
        r = round(n ** (1.0 / a))
        for cand in (r - 1, r, r + 1):
            if cand >= 2 and cand**a == n and is_prime(cand):
                return cand, a
    return None


def find_prime_power(t: int, congruence: str, lo: int, hi: int) -> int | None:
    """Largest prime power q in [lo, hi] with q = 1 (mod t) for congruence
    "one", or q a power of t's prime divisible by t for congruence "zero"."""
    if t < 2:
        raise ValueError("t must be >= 2")
    if lo > hi:
        return None
    lo = max(lo, 2)
    if congruence == "one":
        q = hi - (hi - 1) % t
        while q >= lo:
            if q >= 2 and is_prime_power(q):
                return q
            q -= t
        return None
    if congruence == "zero":
        pp = is_prime_power(t)
        if pp is None:
            return None
        p = pp[0]
        best = None
        q = 1
        while q <= hi // p:
            q *= p
            if lo <= q <= hi and q % t == 0:
                best = q
        return best
    raise ValueError("congruence must be 'one' or 'zero'")


# -- the spectral-inequality left-hand side ----------------------------------------


def alon_rodl_log_lhs(n: float, d: float, lam: float, k: int, m: float) -> float:
    """Natural log of the product bounding the failure probability:
    (2kn log n / d) log(e m d^2 / (4 lam n log n)) + k m log(2 e lam n / (m d))
    + m (k-1) log(m / n).  Negative certifies the inequality.

    The underlying theorem also assumes m >= (2n/d) log n; callers report that
    hypothesis, this function only evaluates the expression.
    """
    if min(n, d, lam, k, m) <= 0:
        raise ValueError("all parameters must be positive")
    ln_n = log(n)
    term1 = (2 * k * n * ln_n / d) * log(math.e * m * d * d / (4 * lam * n * ln_n))
    term2 = k * m * log(2 * math.e * lam * n / (m * d))
    term3 = m * (k - 1) * log(m / n)
    return term1 + term2 + term3


def alon_rodl_log_lhs_mp(n, d, lam, k, m) -> mpmath.mpf:
    """The same expression in extended precision (independent evaluation path)."""
    with mpmath.workdps(_REPLAY_DPS):
        n, d, lam, m = mpmath.mpf(n), mpmath.mpf(d), mpmath.mpf(lam), mpmath.mpf(m)
        ln_n = mpmath.log(n)
        term1 = (2 * k * n * ln_n / d) * mpmath.log(mpmath.e * m * d * d / (4 * lam * n * ln_n))
        term2 = k * m * mpmath.log(2 * mpmath.e * lam * n / (m * d))
        term3 = m * (k - 1) * mpmath.log(m / n)
        return term1 + term2 + term3


def theorem5_hypothesis(n: float, d: float, m: float) -> tuple[float, bool]:
    """The clique-order hypothesis (2n/d) log n of the spectral inequality."""
    required = (2 * n / d) * log(n)
    return required, m >= required


def appendix_exponent(k: int):
    """The symbolic exponent on (nt) after the d = sqrt(nt), lam = (nt)^(1/4),
    m = 2k sqrt(n/t) log n substitutions: 1/4 + k/4 - (k-1)/2, as a Fraction.
    Non-positive iff k >= 3."""
    from fractions import Fraction
    return Fraction(1, 4) + Fraction(k, 4) - Fraction(k - 1, 2)


# -- certificates -----------------------------------------------------------------


class HypothesisViolation(ValueError):
    """The query fails the recipe's entry hypothesis; no certificate is issued."""


@dataclass(frozen=True)
class Certificate:
    """Replayable record of one certification attempt (success or not).

    certified_n is present iff the prime-power search succeeded, step 1 held
    (m >= m'), and the log-LHS was negative; ``failure`` names the first
    failing stage otherwise.
    """

    query: BoundQuery
    variant: str  # "k2" | "k3plus"
    s: int
    L: int
    window_lo: int
    window_hi: int
    q: int | None
    n: int | None
    d: int | None
    m_prime: float | None
    step1_ok: bool
    ineq_log_lhs: float | None
    ineq_ok: bool
    certified_n: int | None
    achieved_ratio: float | None
    theorem5_required: float | None
    theorem5_ok: bool | None
    failure: str | None

    def to_dict(self) -> dict:
        return {
            "query": self.query.to_dict(),
            "variant": self.variant,
            "s": self.s,
            "L": self.L,
            "window": {"lo": self.window_lo, "hi": self.window_hi},
            "q": self.q,
            "n": self.n,
            "d": self.d,
            "lambda": {"sqrtq_of": self.q} if self.q is not None else None,
            "m_prime": self.m_prime,
            "step1_ok": self.step1_ok,
            "ineq_log_lhs": self.ineq_log_lhs,
            "ineq_ok": self.ineq_ok,
            "certified_n": self.certified_n,
            "achieved_ratio": self.achieved_ratio,
            "theorem5_hypothesis": {
                "required_m": self.theorem5_required,
                "ok": self.theorem5_ok,
            },
            "failure": self.failure,
            "tool_version": _tool_version(),
        }


def certify(query: BoundQuery, variant: str | None = None) -> Certificate:
    """Run the two-step pipeline for a query and record every intermediate.

    variant "k2" (k = 2: s = 2, L = 8, entry hypothesis m >= 128 log^2 t,
    threshold m' = (n/d) log^2 n) or "k3plus" (k >= 3: s = 1, L = 4k,
    hypothesis m >= 16 k log t, m' = 2k (n/d) log n).  Chosen from query.k
    when not given.  A failed stage still yields a certificate (with
    ``failure`` set); only a violated entry hypothesis refuses outright.
    """
    k, t, m = query.k, query.t, query.m
    if variant is None:
        variant = "k2" if k == 2 else "k3plus"
    if variant == "k2":
        if k != 2:
            raise ValueError("variant k2 requires k = 2")
        if m < 128 * log(t) ** 2:
            raise HypothesisViolation(
                f"m = {m} < 128 log^2 t = {128 * log(t) ** 2:.3f}")
        s, L = 2, 8
    elif variant == "k3plus":
        if k < 3:
            raise ValueError("variant k3plus requires k >= 3")
        if m < 16 * k * log(t):
            raise HypothesisViolation(
                f"m = {m} < 16 k log t = {16 * k * log(t):.3f}")
        s, L = 1, 4 * k
    else:
        raise ValueError("variant must be 'k2' or 'k3plus'")

    ell = m / (L * log(m * t) ** s)
    hi = floor(ell * t)
    lo = ceil(ell * t / 2)
    q = find_prime_power(t, "one", lo, hi) if hi >= lo else None
    ratio = None
    if q is None:
        return Certificate(
            query=query, variant=variant, s=s, L=L, window_lo=lo, window_hi=hi,
            q=None, n=None, d=None, m_prime=None, step1_ok=False,
            ineq_log_lhs=None, ineq_ok=False, certified_n=None,
            achieved_ratio=None, theorem5_required=None, theorem5_ok=None,
            failure="no-prime-power-in-window",
        )

    n = q * (q - 1) // t
    d = q - 1
    lam = sqrt(q)
    if variant == "k2":
        m_prime = (n / d) * log(n) ** 2
    else:
        m_prime = 2 * k * (n / d) * log(n)
    step1_ok = m >= m_prime
    log_lhs = alon_rodl_log_lhs(n, d, lam, k, m_prime)
    if abs(log_lhs) < _SIGN_GUARD:
        with mpmath.workdps(_REPLAY_DPS):
            log_lhs = float(alon_rodl_log_lhs_mp(n, d, mpmath.sqrt(q), k, m_prime))
    ineq_ok = log_lhs < 0
    required, t5_ok = theorem5_hypothesis(n, d, m_prime)
    ratio = n * log(m * t) ** (2 * s) / (m * m * t)
    ok = step1_ok and ineq_ok
    failure = None if ok else ("step1" if not step1_ok else "inequality")
    return Certificate(
        query=query, variant=variant, s=s, L=L, window_lo=lo, window_hi=hi,
        q=q, n=n, d=d, m_prime=m_prime, step1_ok=step1_ok,
        ineq_log_lhs=log_lhs, ineq_ok=ineq_ok,
        certified_n=n if ok else None, achieved_ratio=ratio,
        theorem5_required=required, theorem5_ok=t5_ok, failure=failure,
    )


def replay_certificate(cert: dict) -> dict:
    """Re-derive every recorded check of a certificate dict in 50-digit
    arithmetic; each check reports (recorded, replayed, ok), plus overall ok.

    Relative tolerance 1e-9 on real-valued quantities; integer and boolean
    fields must match exactly.
    """
    checks: dict[str, dict] = {}

    def add(name: str, recorded, replayed, ok: bool) -> None:
        checks[name] = {"recorded": recorded, "replayed": replayed, "ok": bool(ok)}

    def close(a, b) -> bool:
        a, b = float(a), float(b)
        if a == b:
            return True
        return abs(a - b) <= 1e-9 * max(abs(a), abs(b))

    k = cert["query"]["k"]
    t = cert["query"]["t"]
    m = cert["query"]["m"]
    variant = cert["variant"]
    s, L = cert["s"], cert["L"]
    add("recipe-constants", (s, L), (2, 8) if variant == "k2" else (1, 4 * k),
        (s, L) == ((2, 8) if variant == "k2" else (1, 4 * k)))

    with mpmath.workdps(_REPLAY_DPS):
        ell = mpmath.mpf(m) / (L * mpmath.log(mpmath.mpf(m) * t) ** s)
        hi = int(mpmath.floor(ell * t))
        lo = int(mpmath.ceil(ell * t / 2))
    add("window", (cert["window"]["lo"], cert["window"]["hi"]), (lo, hi),
        (cert["window"]["lo"], cert["window"]["hi"]) == (lo, hi))

    q = cert.get("q")
    if q is None:
        ok_all = all(c["ok"] for c in checks.values()) and cert["certified_n"] is None
        return {"ok": bool(ok_all), "checks": checks}

    add("q-congruence", q % t, 1, q % t == 1)
    pp = is_prime_power(q)
    add("q-prime-power", q, pp, pp is not None)
    n = q * (q - 1) // t
    add("n-formula", cert["n"], n, cert["n"] == n)
    add("d-formula", cert["d"], q - 1, cert["d"] == q - 1)
    with mpmath.workdps(_REPLAY_DPS):
        nn = mpmath.mpf(n)
        if variant == "k2":
            m_prime = (nn / (q - 1)) * mpmath.log(nn) ** 2
        else:
            m_prime = 2 * k * (nn / (q - 1)) * mpmath.log(nn)
        add("m-prime", cert["m_prime"], float(m_prime), close(cert["m_prime"], m_prime))
        add("step1", cert["step1_ok"], bool(m >= m_prime), cert["step1_ok"] == (m >= m_prime))
        log_lhs = alon_rodl_log_lhs_mp(n, q - 1, mpmath.sqrt(q), k, m_prime)
        add("ineq-log-lhs", cert["ineq_log_lhs"], float(log_lhs),
            close(cert["ineq_log_lhs"], log_lhs))
        add("ineq-sign", cert["ineq_ok"], bool(log_lhs < 0), cert["ineq_ok"] == (log_lhs < 0))
        ratio = float(nn * mpmath.log(mpmath.mpf(m) * t) ** (2 * s) / (mpmath.mpf(m) ** 2 * t))
        add("achieved-ratio", cert["achieved_ratio"], ratio, close(cert["achieved_ratio"], ratio))
    expect_certified = cert["step1_ok"] and cert["ineq_ok"]
    add("certified-n", cert["certified_n"], n if expect_certified else None,
        cert["certified_n"] == (n if expect_certified else None))
    ok_all = all(c["ok"] for c in checks.values())
    return {"ok": bool(ok_all), "checks": checks}


def bounds_table(ks, ts, ms, c1: float = 1.0) -> list[dict]:
    """One row per (k, t, m): the simple bound, the random-recipe scale
    m^2 t / log^2(mt), the certified n when the pipeline succeeds, and the
    upper bound with caller-supplied c1."""
    rows = []
    for k in ks:
        for t in ts:
            for m in ms:
                query = BoundQuery(k=k, t=t, m=m)
                row = {
                    "k": k, "t": t, "m": m,
                    "simple_lower": simple_lower(query),
                    "random_recipe_scale": m * m * t / log(m * t) ** 2,
                    "prop1_upper": prop1_upper(query, c1),
                    "certified_n": None,
                    "certify_failure": None,
                }
                if k >= 2:
                    try:
                        cert = certify(query)
                        row["certified_n"] = cert.certified_n
                        row["certify_failure"] = cert.failure
                    except HypothesisViolation as exc:
                        row["certify_failure"] = f"hypothesis: {exc}"
                else:
                    row["certify_failure"] = "k below recipe range"
                rows.append(row)
    return rows
