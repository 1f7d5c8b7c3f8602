# import dependencies
import math
import time
import typing
from dataclasses import dataclass, field as dc_field

import mpmath
import pandas as pd
from tqdm import tqdm

from ..utils import errors
from ..utils.constants import DEF_MAX_FACTORIAL_DEGREE, DEF_PRECISION, DEF_PRECISION_CAP
from ..utils.funcs import int_to_json, log, parse_int
from ..utils.load import Caps
from .divample import DivisionAmpleSet, density_witness, norm_bound_witness
from .ecurve import (
    EllipticCurve,
    divisibility_multiplier,
    lemma_ec3_multiple,
    weak_denominator_of_multiple,
)
from .ideals import weak_num_denom
from .nfcore import (
    FieldElement,
    NumberField,
    certified_abs_le,
    divides,
    embeddings_abs,
    is_rational_integer,
)


@dataclass
class VerdictTrace:
    """Everything evaluated while checking a witness.

    `conditions` maps 1..4 to the outcome of each condition of the definition; None marks
    a condition skipped by the ξ = 0 special case. The descent fields stay None unless all
    four conditions hold.
    """

    conditions: dict[int, typing.Optional[bool]]
    lattice: int
    q: typing.Optional[int] = None
    wd_divides_power: typing.Optional[bool] = None
    u_divides: typing.Optional[bool] = None
    u_tilde: typing.Optional[int] = None
    norm_bound: typing.Optional[bool] = None
    bound: typing.Optional[bool] = None
    bound_limit: typing.Optional[str] = None
    enclosures: list[str] = dc_field(default_factory=list)
    descent: typing.Optional[bool] = None
    special: typing.Optional[str] = None
    verdict: bool = False

    @property
    def all_conditions(self) -> bool:
        return all(v is not False for v in self.conditions.values())

    def to_dict(self) -> dict[str, typing.Any]:
        return {
            "conditions": {str(k): v for k, v in self.conditions.items()},
            "lattice": self.lattice,
            "q": self.q,
            "wd_divides_power": self.wd_divides_power,
            "u_divides": self.u_divides,
            "u_tilde": None if self.u_tilde is None else int_to_json(self.u_tilde),
            "norm_bound": self.norm_bound,
            "bound": self.bound,
            "bound_limit": self.bound_limit,
            "enclosures": list(self.enclosures),
            "descent": self.descent,
            "special": self.special,
            "verdict": self.verdict,
        }


@dataclass
class Witness:
    """A triple (m, n, u) offered for ξ, with the trace of its last verification."""

    xi: FieldElement
    m: int
    n: int
    u: FieldElement
    special: typing.Optional[str] = None
    trace: typing.Optional[VerdictTrace] = None

    @property
    def q(self) -> typing.Optional[int]:
        return self.n // self.m if self.m and self.n % self.m == 0 else None

    def to_json(self) -> dict[str, typing.Any]:
        return {
            "field": self.xi.field.label,
            "xi": self.xi.to_json(),
            "m": int_to_json(self.m),
            "n": int_to_json(self.n),
            "u": self.u.to_json(),
            "special": self.special,
            "trace": None if self.trace is None else self.trace.to_dict(),
        }

    @classmethod
    def from_json(cls, document: dict[str, typing.Any], field: NumberField) -> "Witness":
        """
        Rebuild a witness written by :meth:`to_json`. The trace is not restored; verify again.

        Raises
        ------
        FieldMismatch
            The document belongs to another field.
        ConfigParse
            A required key is missing or malformed.
        """
        try:
            if document["field"] != field.label:
                raise errors.FieldMismatch(
                    f"witness for {document['field']} read with field {field.label}"
                )
            return cls(
                xi=field.element(document["xi"]),
                m=parse_int(document["m"]),
                n=parse_int(document["n"]),
                u=field.element(document["u"]),
                special=document.get("special"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise errors.ConfigParse(f"malformed witness document: {exc}")


@dataclass
class IntegralityVerdict:
    """Either IntegerCertified with a witness, or NoWitnessWithinCaps with the caps used.

    NoWitnessWithinCaps is never a proof that ξ is not a rational integer.
    """

    kind: str
    xi: FieldElement
    caps: Caps
    witness: typing.Optional[Witness] = None
    reason: str = ""

    @property
    def certified(self) -> bool:
        return self.kind == "IntegerCertified"

    def to_dict(self) -> dict[str, typing.Any]:
        return {
            "kind": self.kind,
            "xi": self.xi.to_json(),
            "caps": self.caps.to_dict(),
            "witness": None if self.witness is None else self.witness.to_json(),
            "reason": self.reason,
        }


def _factorial(n_deg: int) -> int:
    if n_deg > DEF_MAX_FACTORIAL_DEGREE:
        raise errors.FactorialOverflow(
            f"degree {n_deg} > {DEF_MAX_FACTORIAL_DEGREE}: {n_deg}! exponents are out of reach"  # noqa E501
        )
    return math.factorial(n_deg)


def dl_product(xi: FieldElement, ell: int, n_deg: int) -> FieldElement:
    """
    The product 2^(n!+1) · ∏_{i=0}^{n!-1} (ξ^(ℓ·n!) + i)^(n!) of condition (2).

    Raises
    ------
    ZeroXi
        ξ = 0; the product vanishes.
    FactorialOverflow
        n_deg > DEF_MAX_FACTORIAL_DEGREE.
    """
    if xi.is_zero():
        raise errors.ZeroXi("the product vanishes at ξ = 0")
    nf = _factorial(n_deg)
    power = xi ** (ell * nf)
    product = xi.field(2 ** (nf + 1))
    for i in range(nf):
        product = product * (power + i) ** nf
    return product


def dl_condition(xi: FieldElement, u: FieldElement, ell: int, n_deg: int) -> bool:
    """Whether the condition-(2) product divides u in O_K."""
    assert not u.is_zero(), "[LOG] AssertionError: u must be nonzero"
    return divides(dl_product(xi, ell, n_deg), u)


def dl_bound(
    xi: FieldElement,
    u: FieldElement,
    ell: int,
    n_deg: int,
    precision: int = DEF_PRECISION,
    cap: int = DEF_PRECISION_CAP,
) -> bool:
    """
    Certified |σ(ξ)| <= ½·|N(u)|^(1/(ℓ·n!)) for every embedding σ.

    Decided as |σ(ξ)|^(2k) <= N(u)²/4^k with k = ℓ·n!, so no root is ever taken.

    Raises
    ------
    PrecisionExhausted
        An embedding stayed undecided at `cap`.
    """
    assert not u.is_zero(), "[LOG] AssertionError: u must be nonzero"
    if xi.is_zero():
        return True
    k = ell * _factorial(n_deg)
    norm_u = u.norm
    return all(certified_abs_le(xi, norm_u * norm_u / 4**k, precision, cap, power=k))


def dl_descent(
    xi: FieldElement,
    q: int,
    u_tilde: int,
    precision: int = DEF_PRECISION,
    cap: int = DEF_PRECISION_CAP,
) -> bool:
    """
    Whether ũ | (ξ - q) in O_K and |σ(ξ)| <= ½·|ũ|^(n/n!) for every σ.

    Both together force ξ ∈ Z.

    Raises
    ------
    LemmaViolation
        Both hypotheses hold but ξ is not a rational integer.
    """
    assert u_tilde != 0, "[LOG] AssertionError: ũ must be nonzero"
    field = xi.field
    if not divides(field(u_tilde), xi - q):
        return False
    if not dl_bound(xi, field(abs(u_tilde)), 1, field.degree, precision, cap):
        return False
    if not is_rational_integer(xi):
        raise errors.LemmaViolation(
            f"ξ = {xi} passes the descent hypotheses with q = {q}, ũ = {u_tilde}"
        )
    return True


def witness_lattice(curve: EllipticCurve, caps: Caps) -> int:
    """Step r·T of the index lattice the witnesses of `curve` live on."""
    return divisibility_multiplier(curve, caps.scan_cap) * (curve.torsion_order or 1)


def _condition_four(
    curve: EllipticCurve, xi: FieldElement, m: int, n: int, wd_m: FieldElement
) -> bool:
    point_m = curve.scalar_multiple(m)
    point_n = curve.scalar_multiple(n)
    if point_m.x is None or point_m.y is None or point_n.x is None or point_n.y is None:
        return False
    if point_m.x.is_zero() or point_n.y.is_zero():
        return False
    zeta = point_n.x * point_m.y / (point_n.y * point_m.x) - xi
    if zeta.is_zero():
        return True
    wn_zeta, _ = weak_num_denom(zeta)
    return divides(wd_m, wn_zeta)


def replay_descent(
    trace: VerdictTrace,
    xi: FieldElement,
    witness: Witness,
    curve: EllipticCurve,
    divample: DivisionAmpleSet,
    caps: Caps,
) -> VerdictTrace:
    """
    Re-derive ξ ∈ Z from a witness satisfying all four conditions.

    | q = n/m and wd(x_m) | (ξ - q)^h, checked exactly.
    | u | (ξ - q), checked exactly rather than inferred from condition (3).
    | ũ from the norm-bound property of A, the bound |σ(ξ)| <= ½|N(u)|^(1/ℓn!).
    | Lemma: ũ | (ξ - q) and the bound with N(ũ) = |ũ|^n give ξ ∈ Z.

    The trace is filled in place and returned.
    """
    K = xi.field
    h = K.class_number
    q = witness.n // witness.m
    trace.q = q
    difference = xi - q
    wd_m = weak_denominator_of_multiple(curve, witness.m)
    trace.wd_divides_power = divides(wd_m, difference**h)
    trace.u_divides = divides(witness.u, difference)
    u_tilde, trace.norm_bound = norm_bound_witness(witness.u, divample)
    trace.u_tilde = u_tilde
    trace.bound = dl_bound(
        xi, witness.u, divample.ell, K.degree, caps.precision, caps.precision_cap
    )
    trace.enclosures = [str(b.interval) for b in embeddings_abs(xi, caps.precision)]
    k = divample.ell * _factorial(K.degree)
    with mpmath.workdps(20):
        limit = mpmath.root(mpmath.mpf(abs(witness.u.norm.numerator)), k) / 2
        trace.bound_limit = mpmath.nstr(limit, 12)
    chain = trace.wd_divides_power and trace.u_divides and trace.norm_bound and trace.bound
    trace.descent = bool(chain) and dl_descent(
        xi, q, u_tilde, caps.precision, caps.precision_cap
    )
    return trace


def verify_witness(
    xi: FieldElement,
    witness: Witness,
    curve: EllipticCurve,
    divample: DivisionAmpleSet,
    caps: typing.Optional[Caps] = None,
) -> VerdictTrace:
    """
    Evaluate conditions (1)-(4) of the definition exactly and replay the descent.

    | (1) m | n, both on the lattice rT·Z.
    | (2) the product of :func:`dl_product` divides u.
    | (3) u^h | wd(x_m).
    | (4) wd(x_m) | wn(x_n·y_m/(y_n·x_m) - ξ).

    Parameters
    ----------
    xi : FieldElement
        The candidate ξ ∈ O_K.
    witness : Witness
        The triple (m, n, u).
    curve : EllipticCurve
        The rank-one curve over K.
    divample : DivisionAmpleSet
        The set A the element u comes from.
    caps : Caps, optional
        Caps of the run, by default Caps()

    Returns
    -------
    VerdictTrace
        The trace; its verdict is true only when all conditions hold and the descent
        concludes ξ ∈ Z.
    """
    caps = caps if caps is not None else Caps()
    K = xi.field
    assert curve.field == K and divample.field == K, "[LOG] AssertionError: ξ, E and A must share the field K"  # noqa E501
    h = K.class_number
    lattice = witness_lattice(curve, caps)
    m, n = witness.m, witness.n
    on_lattice = m % lattice == 0 and n % lattice == 0
    cond1 = m != 0 and n % m == 0 and on_lattice
    if xi.is_zero():
        trace = VerdictTrace({1: cond1 and m == n, 2: None, 3: None, 4: None}, lattice)
        trace.special = "xi_zero"
        trace.q = 1 if cond1 else None
        trace.verdict = bool(trace.conditions[1])
        witness.trace = trace
        return trace
    if max(abs(m), abs(n)) > caps.max_index:
        raise errors.CapExceeded(f"witness indices ({m}, {n}) exceed max_index {caps.max_index}")  # noqa E501
    cond2 = not witness.u.is_zero() and dl_condition(xi, witness.u, divample.ell, K.degree)  # noqa E501
    conditions: dict[int, typing.Optional[bool]] = {1: cond1, 2: cond2, 3: False, 4: False}
    if m != 0 and not witness.u.is_zero():
        wd_m = weak_denominator_of_multiple(curve, m)
        conditions[3] = divides(witness.u**h, wd_m)
        if n != 0:
            conditions[4] = _condition_four(curve, xi, m, n, wd_m)
    trace = VerdictTrace(conditions, lattice)
    if all(conditions.values()):
        replay_descent(trace, xi, witness, curve, divample, caps)
        trace.verdict = bool(trace.descent)
    witness.trace = trace
    return trace


def _shares_model(curve: EllipticCurve, divample: DivisionAmpleSet) -> bool:
    """Whether E is the rational curve of A read over K, so x_n agree on both."""
    base = divample.curve
    if base is None:
        return False
    values = list(curve.a) + [curve.generator.x, curve.generator.y]
    base_values = list(base.a) + [base.generator.x, base.generator.y]
    return all(
        v is not None and w is not None and v.is_rational() and v.rational_value() == w.rational_value()  # noqa E501
        for v, w in zip(values, base_values)
    )


def _condition_three_index(
    curve: EllipticCurve,
    divample: DivisionAmpleSet,
    u: FieldElement,
    index: int,
    lattice: int,
    caps: Caps,
) -> int:
    """Least m on the lattice with u^h | wd(x_m)."""
    h = curve.field.class_number
    target = u**h
    if _shares_model(curve, divample):
        base = math.lcm(index, lattice)
        for t in range(1, caps.search_cap + 1):
            m = base * t
            if m > caps.max_index:
                break
            if divides(target, weak_denominator_of_multiple(curve, m)):
                return m
        raise errors.CapExceeded(f"no m <= {caps.max_index} with u^{h} | wd(x_m)")
    return lemma_ec3_multiple(curve, target, r=lattice, sharpen=True, order_cap=caps.order_cap)  # noqa E501


def _zero_witness(
    xi: FieldElement, curve: EllipticCurve, divample: DivisionAmpleSet, caps: Caps
) -> Witness:
    lattice = witness_lattice(curve, caps)
    _, u = next(divample.elements(1))
    return Witness(xi, lattice, lattice, u, special="xi_zero")


def _fallback_search(
    xi: FieldElement, curve: EllipticCurve, divample: DivisionAmpleSet, caps: Caps
) -> typing.Optional[Witness]:
    """Exhaust small m, n on the lattice and the first elements of A."""
    K = xi.field
    lattice = witness_lattice(curve, caps)
    candidates = [
        u
        for _, u in divample.elements(caps.fallback_elements)
        if dl_condition(xi, u, divample.ell, K.degree)
    ]
    for u in candidates:
        for i in range(1, caps.fallback_indices + 1):
            m = i * lattice
            for k in range(-caps.fallback_indices, caps.fallback_indices + 1):
                n = m * k
                if k == 0 or abs(n) > caps.max_index:
                    continue
                witness = Witness(xi, m, n, u)
                if verify_witness(xi, witness, curve, divample, caps).all_conditions:
                    return witness
    return None


def find_witness(
    xi: FieldElement,
    curve: EllipticCurve,
    divample: DivisionAmpleSet,
    caps: typing.Optional[Caps] = None,
) -> typing.Optional[Witness]:
    """
    Build (m, n, u) for ξ the constructive way, or search a bounded box otherwise.

    For ξ ∈ Z: u is a density witness of the condition-(2) product, m the least lattice
    index with u^h | wd(x_m), and n = m·ξ. Other ξ go through the bounded fallback.

    Parameters
    ----------
    xi : FieldElement
        An element of O_K.
    curve : EllipticCurve
        The rank-one curve over K.
    divample : DivisionAmpleSet
        The set A of K.
    caps : Caps, optional
        Caps of the run, by default Caps()

    Returns
    -------
    Witness or None
        A witness whose trace passes all four conditions, or None.

    Raises
    ------
    NotIntegral
        ξ is not in O_K.
    CapExceeded
        The constructive indices exceed the caps.
    """
    caps = caps if caps is not None else Caps()
    if not xi.is_integral():
        raise errors.NotIntegral(f"ξ = {xi} is not in O_K")
    if xi.is_zero():
        witness = _zero_witness(xi, curve, divample, caps)
        verify_witness(xi, witness, curve, divample, caps)
        return witness
    if not is_rational_integer(xi):
        return _fallback_search(xi, curve, divample, caps)
    K = xi.field
    start_time = time.perf_counter()
    product = dl_product(xi, divample.ell, K.degree)
    u, index = density_witness(divample, product, caps.max_index)
    lattice = witness_lattice(curve, caps)
    m = _condition_three_index(curve, divample, u, index, lattice, caps)
    n = m * int(xi.rational_value())
    if max(m, abs(n)) > caps.max_index:
        raise errors.CapExceeded(f"n = {n} exceeds max_index {caps.max_index}")
    witness = Witness(xi, m, n, u)
    trace = verify_witness(xi, witness, curve, divample, caps)
    end_time = time.perf_counter()
    log(f"Witness (m, n) = ({m}, {n}) for ξ = {xi} in {end_time - start_time:.4f} seconds")  # noqa E501
    if not trace.all_conditions:
        raise errors.LemmaViolation(f"the constructed witness for ξ = {xi} fails a condition")  # noqa E501
    return witness


def integrality_verdict(
    xi: FieldElement,
    curve: EllipticCurve,
    divample: DivisionAmpleSet,
    caps: typing.Optional[Caps] = None,
) -> IntegralityVerdict:
    """
    IntegerCertified with a replayed descent, or NoWitnessWithinCaps.

    Raises
    ------
    NotIntegral
        ξ is not in O_K.
    LemmaViolation
        A witness passes all four conditions but the descent does not conclude ξ ∈ Z.
    """
    caps = caps if caps is not None else Caps()
    try:
        witness = find_witness(xi, curve, divample, caps)
    except errors.CapExceeded as exc:
        return IntegralityVerdict("NoWitnessWithinCaps", xi, caps, reason=str(exc))
    if witness is None:
        return IntegralityVerdict(
            "NoWitnessWithinCaps", xi, caps, reason="bounded search found no witness"
        )
    trace = witness.trace
    assert trace is not None
    if not trace.verdict:
        raise errors.LemmaViolation(f"descent failed on a verified witness for ξ = {xi}")
    return IntegralityVerdict("IntegerCertified", xi, caps, witness)


def brute_force_probe(
    curve: EllipticCurve,
    divample: DivisionAmpleSet,
    box: int = 3,
    caps: typing.Optional[Caps] = None,
) -> pd.DataFrame:
    """
    Run :func:`integrality_verdict` on every ξ = a + b·θ with |a|, |b| <= box.

    Returns
    -------
    pandas.DataFrame
        Columns a, b, xi, kind, is_integer, sound; `sound` is false only for a certificate
        issued to a non-integer.
    """
    caps = caps if caps is not None else Caps()
    K = curve.field
    assert K.degree == 2, "[LOG] AssertionError: the probe box is two-dimensional"
    rows = []
    grid = [(a, b) for a in range(-box, box + 1) for b in range(-box, box + 1)]
    for a, b in tqdm(grid, desc="Soundness probe", unit="xi"):
        xi = K.element([a, b])
        verdict = integrality_verdict(xi, curve, divample, caps)
        rows.append(
            {"a": a, "b": b, "xi": str(xi), "kind": verdict.kind, "is_integer": b == 0, "sound": b == 0 or not verdict.certified}  # noqa E501
        )
    return pd.DataFrame(rows)


def uncertified_integers(probe: pd.DataFrame) -> list[int]:
    """Rational integers of a :func:`brute_force_probe` box left without a certificate."""
    integers = probe[probe["is_integer"] & (probe["kind"] != "IntegerCertified")]
    return sorted(int(a) for a in integers["a"])


def descent_grid(
    field: NumberField,
    box: int = 10,
    u_max: int = 7,
    precision: int = DEF_PRECISION,
) -> pd.DataFrame:
    """
    Every ξ = a + b·θ with |a|, |b| <= box meeting the descent hypotheses for some
    |q| <= box and 1 <= |ũ| <= u_max. Each must be a rational integer.
    """
    assert field.degree == 2, "[LOG] AssertionError: the grid is two-dimensional"
    rows = []
    for a in tqdm(range(-box, box + 1), desc="Descent grid", unit="row"):
        for b in range(-box, box + 1):
            xi = field.element([a, b])
            for q in range(-box, box + 1):
                for u_tilde in [s * k for k in range(1, u_max + 1) for s in (1, -1)]:
                    if dl_descent(xi, q, u_tilde, precision):
                        rows.append(
                            {"a": a, "b": b, "q": q, "u_tilde": u_tilde, "is_integer": is_rational_integer(xi)}  # noqa E501
                        )
    return pd.DataFrame(rows, columns=["a", "b", "q", "u_tilde", "is_integer"])
