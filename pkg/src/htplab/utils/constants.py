from typing import Union, Any

DEF_CONFIG_RESOURCE: str = "workbench.json"
"""
Name of the default configuration shipped in ``htplab/data``. \
It is read with :func:`~htplab.utils.load.read_config` when no ``--config`` is given.
"""

DEF_PRECISION: int = 64
"""
Default working precision (bits) used to isolate the roots of a minimal polynomial.
"""

DEF_MIN_PRECISION: int = 32
"""
Lowest precision accepted by :func:`~htplab.arithmetic.nfcore.embeddings_abs`.
"""

DEF_PRECISION_CAP: int = 4096
"""
Precision (bits) at which certified comparisons stop doubling and give up.
"""

DEF_MAX_IRREDUCIBLE_DEGREE: int = 8
"""
Largest minimal-polynomial degree whose irreducibility is checked.
"""

DEF_MAX_FACTORIAL_DEGREE: int = 4
"""
Largest field degree for which the n!-exponents of the divisibility condition are evaluated.
"""

DEF_GENERATOR_CAP: int = 12
"""
Default half-width of the coefficient box searched for ideal generators.
"""

DEF_GENERATOR_BATCH: int = 200_000
"""
Largest number of box candidates handed to numpy at once during generator search.
"""

DEF_TORSION_CAP: int = 16
"""
Largest torsion bound accepted before the division-polynomial search is attempted.
"""

DEF_TORSION_GOOD_PRIMES: int = 3
"""
Minimal number of good odd primes whose point counts bound the torsion.
"""

DEF_TORSION_PRIME_LIMIT: int = 200
"""
Rational primes above this bound are never used for torsion bounds.
"""

DEF_TORSION_RESIDUE_CAP: int = 400
"""
Residue fields larger than this are skipped when counting points.
"""

DEF_LADDER_THRESHOLD: int = 48
"""
Multiples above this index are computed from division values instead of chord-tangent steps.
"""

DEF_MAX_INDEX: int = 5000
"""
Default cap on the absolute value of any multiple index nP that gets evaluated.
"""

DEF_SCAN_CAP: int = 20
"""
Default last index of the primitive-divisor scan.
"""

DEF_TRACKED_PRIMES: list[int] = [2, 3, 5, 7]
"""
Rational primes whose prime ideals appear in the valuation table of an EDS record.
"""

DEF_ORDER_CAP: int = 10_000
"""
Cap on the order search of a reduced point.
"""

DEF_SEARCH_CAP: int = 40
"""
Default cap on the multiplier searches of the witness construction.
"""

DEF_FALLBACK_INDICES: int = 6
"""
Number of lattice indices tried by the bounded fallback witness search.
"""

DEF_FALLBACK_ELEMENTS: int = 6
"""
Number of set elements tried by the bounded fallback witness search.
"""

DEF_OUTPUT_FORMAT: str = "text"
"""
Default report format, one of ``text``, ``json``, ``csv``.
"""

DEF_OUTPUT_FORMATS: list[str] = ["text", "json", "csv"]
"""
Accepted report formats.
"""

DEF_EXIT_OK: int = 0
"""
Exit code for success or a certified result.
"""

DEF_EXIT_ERROR: int = 1
"""
Exit code for errors.
"""

DEF_EXIT_NO_WITNESS: int = 2
"""
Exit code for a bounded-search negative.
"""

DEF_CAPS: dict[str, Union[int, Any]] = {
    "max_index": DEF_MAX_INDEX,
    "scan_cap": DEF_SCAN_CAP,
    "search_cap": DEF_SEARCH_CAP,
    "generator_cap": DEF_GENERATOR_CAP,
    "precision": DEF_PRECISION,
    "precision_cap": DEF_PRECISION_CAP,
    "torsion_cap": DEF_TORSION_CAP,
    "order_cap": DEF_ORDER_CAP,
}
"""
Default values of the ``caps`` block of a workbench configuration.
"""
