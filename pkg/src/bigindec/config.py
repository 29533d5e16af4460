"""Run-wide configuration defaults and environment overrides."""

import os

# Default coefficient prime.  Large enough that the trace-form radical
# criterion (valid for p > dim A) covers every desk-scale algebra.
DEFAULT_PRIME = 32003

# Default upper bound for the truncation-exponent search in the pipeline.
DEFAULT_N_MAX = 12

# Default seed for every randomized (but reproducible) search.
DEFAULT_SEED = 20260810

# Full associativity validation of a finite-dimensional algebra is cubic in
# its dimension; above this cutoff a seeded sample of triples is checked.
ALGEBRA_VALIDATE_CUTOFF = 48
ALGEBRA_VALIDATE_SAMPLES = 4096

# Work cap for determinantal (Fitting ideal) enumeration: number of minor
# evaluations, counting memoization hits once.
DEFAULT_MINOR_WORK_CAP = 200_000


def default_prime():
    value = os.environ.get("BIGINDEC_PRIME")
    if value is None:
        return DEFAULT_PRIME
    return int(value)


def default_seed():
    value = os.environ.get("BIGINDEC_SEED")
    if value is None:
        return DEFAULT_SEED
    return int(value)
