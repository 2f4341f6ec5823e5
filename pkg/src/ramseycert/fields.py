"""Arithmetic in GF(p^a) with int-encoded elements, plus subgroup/coset machinery.

An element is an int in 0..q-1 whose base-p digits (little-endian) are the
coefficients of a polynomial of degree < a over GF(p); 0 and 1 are the additive
and multiplicative identities in every field.  The reducing modulus is monic of
degree a and chosen so that the monomial x is a *primitive* element: among
moduli x^a + tail ordered by the tail's encoding, we take the first that is
irreducible and gives x multiplicative order q-1.  The canonical generator is
then the reduction of x itself (for a = 1 the modulus is x + k and x reduces to
-k, so we take the first k making -k primitive mod p).  Pinning primitivity
into the modulus keeps downstream constructions that exponentiate the generator
(powers, quadratic residues, multiplicative subgroups) canonical.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache

MAX_Q = 1 << 20


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all 64-bit inputs (and beyond 3e24)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for base in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division; n stays small (< 2^20) here."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# -- polynomial helpers on little-endian coefficient tuples over GF(p) --------


def _encode(coeffs: tuple[int, ...], p: int) -> int:
    v = 0
    for c in reversed(coeffs):
        v = v * p + c
    return v


def _decode(v: int, p: int, length: int) -> tuple[int, ...]:
    out = []
    for _ in range(length):
        out.append(v % p)
        v //= p
    return tuple(out)


def _poly_mulmod(u: tuple[int, ...], v: tuple[int, ...], tail: tuple[int, ...], p: int) -> tuple[int, ...]:
    """(u * v) mod (x^a + tail), all operands little-endian of length a."""
    a = len(tail)
    prod = [0] * (2 * a - 1)
    for i, ui in enumerate(u):
        if ui:
            for j, vj in enumerate(v):
                prod[i + j] = (prod[i + j] + ui * vj) % p
    # reduce: x^k = -tail * x^(k-a) for k from high down to a
    for k in range(2 * a - 2, a - 1, -1):
        c = prod[k]
        if c:
            prod[k] = 0
            for j, tj in enumerate(tail):
                prod[k - a + j] = (prod[k - a + j] - c * tj) % p
    return tuple(prod[:a])


def _poly_is_irreducible(tail: tuple[int, ...], p: int) -> bool:
    """Is x^a + tail irreducible over GF(p)?  Via gcd-free Rabin test:
    x^(p^a) == x mod f, and x^(p^(a/r)) - x coprime to f for prime r | a."""
    a = len(tail)
    if a == 1:
        return True

    def frob_iter(times: int) -> tuple[int, ...]:
        # x^(p^times) mod f by repeated p-th powering of x
        cur = tuple(1 if i == 1 else 0 for i in range(a))
        for _ in range(times):
            nxt = tuple(1 if i == 0 else 0 for i in range(a))  # build cur^p
            base, e = cur, p
            while e:
                if e & 1:
                    nxt = _poly_mulmod(nxt, base, tail, p)
                base = _poly_mulmod(base, base, tail, p)
                e >>= 1
            cur = nxt
        return cur

    x = tuple(1 if i == 1 else 0 for i in range(a))
    if frob_iter(a) != x:
        return False
    for r in factorize(a):
        h = frob_iter(a // r)
        # gcd(h - x, f) must be 1; since f has no roots structure shortcut,
        # do a real poly gcd over GF(p).
        diff = tuple((h[i] - x[i]) % p for i in range(a))
        if _poly_gcd_is_nonconst(diff, tail, p):
            return False
    return True


def _poly_gcd_is_nonconst(g: tuple[int, ...], tail: tuple[int, ...], p: int) -> bool:
    """gcd(g, x^a + tail) has positive degree?  g given little-endian, len a."""
    a = len(tail)
    f = list(tail) + [1]
    gg = list(g)
    while len(gg) and gg[-1] == 0:
        gg.pop()
    u, v = f, gg
    while v:
        # u mod v
        inv_lead = pow(v[-1], -1, p)
        u = u[:]
        while len(u) >= len(v):
            c = u[-1] * inv_lead % p
            if c:
                off = len(u) - len(v)
                for i, vi in enumerate(v):
                    u[off + i] = (u[off + i] - c * vi) % p
            u.pop()
            while u and u[-1] == 0:
                u.pop()
        u, v = v, u
    return len(u) > 1


def _multiplicative_order(elem: tuple[int, ...], tail: tuple[int, ...], p: int, q: int) -> int:
    """Order of elem in GF(q)^* (elem as coefficient tuple, field as modulus)."""
    order = q - 1
    one = tuple(1 if i == 0 else 0 for i in range(len(tail)))

    def pw(e: int) -> tuple[int, ...]:
        r, b = one, elem
        while e:
            if e & 1:
                r = _poly_mulmod(r, b, tail, p)
            b = _poly_mulmod(b, b, tail, p)
            e >>= 1
        return r

    for r in factorize(q - 1):
        while order % r == 0 and pw(order // r) == one:
            order //= r
    return order


@dataclass(frozen=True)
class Field:
    """GF(p^a) with element encoding 0..q-1 and precomputed discrete logs.

    ``modulus`` is the full little-endian coefficient tuple (length a+1, leading
    coefficient 1).  ``generator`` is the reduction of the monomial x and is
    primitive by construction.  ``exp[i] = generator^i`` for 0 <= i < q-1 and
    ``log[exp[i]] = i`` (log[0] = -1 sentinel, never a valid exponent).
    """

    p: int
    a: int
    q: int
    modulus: tuple[int, ...]
    generator: int
    exp: tuple[int, ...] = dc_field(repr=False)
    log: tuple[int, ...] = dc_field(repr=False)

    # -- ring ops -------------------------------------------------------------

    def add(self, x: int, y: int) -> int:
        if self.p == 2:
            return x ^ y
        if self.a == 1:
            return (x + y) % self.p
        p, out, mul = self.p, 0, 1
        for _ in range(self.a):
            out += ((x + y) % p) * mul
            x //= p
            y //= p
            mul *= p
        return out

    def neg(self, x: int) -> int:
        if self.p == 2:
            return x
        if self.a == 1:
            return (-x) % self.p
        p, out, mul = self.p, 0, 1
        for _ in range(self.a):
            out += ((-x) % p) * mul
            x //= p
            mul *= p
        return out

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return self.exp[(self.log[x] + self.log[y]) % (self.q - 1)]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return self.exp[(-self.log[x]) % (self.q - 1)]

    def power(self, x: int, e: int) -> int:
        if x == 0:
            if e < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 0 if e else 1
        return self.exp[self.log[x] * e % (self.q - 1)]

    def trace(self, x: int) -> int:
        """Absolute trace GF(q) -> GF(p): x + x^p + ... + x^(p^(a-1))."""
        acc, cur = 0, x
        for _ in range(self.a):
            acc = self.add(acc, cur)
            cur = self.power(cur, self.p)
        assert acc < self.p, "trace landed outside the prime subfield"
        return acc

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)


def field_ops(field: Field, op: str, x: int, y: int | None = None) -> int:
    """Dispatch a named field operation; the CLI and quick scripts use this."""
    unary = {"neg": field.neg, "inv": field.inv, "trace": field.trace}
    binary = {"add": field.add, "sub": field.sub, "mul": field.mul, "pow": field.power}
    if op in unary:
        return unary[op](x)
    if op in binary:
        if y is None:
            raise ValueError(f"operation {op!r} needs two operands")
        return binary[op](x, y)
    raise ValueError(f"unknown field operation {op!r}")


@lru_cache(maxsize=None)
def make_field(p: int, a: int) -> Field:
    """Construct GF(p^a), selecting the primitive-monomial modulus."""
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if a < 1:
        raise ValueError("a must be >= 1")
    q = p**a
    if q > MAX_Q:
        raise ValueError(f"q = {q} exceeds the desk-scale limit {MAX_Q}")

    if a == 1:
        for k in range(1, p):
            g = (-k) % p
            if _multiplicative_order((g,), (k,), p, p) == p - 1:
                modulus = (k, 1)
                generator = g
                break
        else:  # pragma: no cover - a primitive root always exists
            raise AssertionError("no primitive root found")
        exp_list = [1]
        for _ in range(p - 2):
            exp_list.append(exp_list[-1] * generator % p)
    else:
        x_tuple = tuple(1 if i == 1 else 0 for i in range(a))
        for enc in range(1, q):
            tail = _decode(enc, p, a)
            if not _poly_is_irreducible(tail, p):
                continue
            if _multiplicative_order(x_tuple, tail, p, q) == q - 1:
                break
        else:  # pragma: no cover - primitive polynomials always exist
            raise AssertionError("no primitive-monomial modulus found")
        modulus = tail + (1,)
        generator = p  # the encoding of the monomial x
        exp_list = [1]
        acc = tuple(1 if i == 0 else 0 for i in range(a))
        for _ in range(q - 2):
            acc = _poly_mulmod(acc, x_tuple, tail, p)
            exp_list.append(_encode(acc, p))

    log_list = [-1] * q
    for i, v in enumerate(exp_list):
        assert log_list[v] == -1, "generator is not primitive"
        log_list[v] = i
    return Field(p=p, a=a, q=q, modulus=modulus, generator=generator,
                 exp=tuple(exp_list), log=tuple(log_list))


# -- subgroups and cosets ------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    """A subgroup H of (GF(q), +) or (GF(q)^*, ·) with its coset table.

    ``coset_id[e]`` maps every element of the ambient group to the index of its
    coset; coset ids are assigned by ascending minimum representative, and
    ``reps[cid]`` is that minimum.  Additive H of order p^b is the GF(p)-span
    of the reduced monomials x^1..x^b; multiplicative H of order t is the group
    generated by g^((q-1)/t).
    """

    field: Field
    kind: str  # "additive" | "multiplicative"
    order: int
    elements: frozenset[int]
    coset_id: tuple[int, ...]
    reps: tuple[int, ...]

    @property
    def num_cosets(self) -> int:
        return len(self.reps)

    def coset_of(self, e: int) -> int:
        cid = self.coset_id[e]
        if cid < 0:
            raise ValueError(f"{e} is not in the ambient group of this {self.kind} subgroup")
        return cid


def _span_additive(field: Field, b: int) -> set[int]:
    """GF(p)-span of the reduced monomials x, x^2, ..., x^b."""
    # field.p encodes the monomial x when a >= 2; for a == 1 x reduces to g.
    x_elt = field.generator if field.a == 1 else field.p
    basis = [field.power(x_elt, i) for i in range(1, b + 1)]
    span = {0}
    for v in basis:
        new = set()
        for s in span:
            cur = s
            for _ in range(field.p - 1):
                cur = field.add(cur, v)
                new.add(cur)
        span |= new
    return span


def subgroup(field: Field, kind: str, order: int) -> Subgroup:
    """Build the canonical subgroup of the given order with its coset table."""
    q, p = field.q, field.p
    if kind == "additive":
        # order must be p^b
        b = 0
        o = order
        while o > 1 and o % p == 0:
            o //= p
            b += 1
        if o != 1 or order > q:
            raise ValueError(f"additive subgroup order {order} is not a power of p = {p} dividing q")
        elems = _span_additive(field, b)
        if len(elems) != order:
            raise AssertionError("monomial span has unexpected size")
        ambient: range = field.elements()
        combine = field.add
    elif kind == "multiplicative":
        if order < 1 or (q - 1) % order != 0:
            raise ValueError(f"multiplicative subgroup order {order} does not divide q - 1 = {q - 1}")
        h = field.power(field.generator, (q - 1) // order)
        elems = {1}
        cur = 1
        for _ in range(order - 1):
            cur = field.mul(cur, h)
            elems.add(cur)
        if len(elems) != order:
            raise AssertionError("generated subgroup has unexpected size")
        ambient = field.units()
        combine = field.mul
    else:
        raise ValueError(f"unknown subgroup kind {kind!r}")

    if order <= 2048:  # closure is cheap to certify exhaustively at desk scale
        for ei in elems:
            for ej in elems:
                assert combine(ei, ej) in elems, "subgroup not closed"

    coset_id = [-1] * q
    reps = []
    for e in ambient:
        if coset_id[e] == -1:
            cid = len(reps)
            reps.append(e)  # ascending scan => first unseen element is the min rep
            for h in elems:
                coset_id[combine(e, h)] = cid
    assert len(reps) * order == len(ambient)
    return Subgroup(field=field, kind=kind, order=order, elements=frozenset(elems),
                    coset_id=tuple(coset_id), reps=tuple(reps))
