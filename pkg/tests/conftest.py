"""Shared helpers for the test suite."""
from fractions import Fraction

from cocheck import BasisLabel, FormalTensor, FormalVector


def lab(family, index, parity=0):
    return BasisLabel(family, index, parity)


def vec(*pairs):
    """vec((label, coeff), ...) or vec(label) for a unit vector."""
    if len(pairs) == 1 and isinstance(pairs[0], BasisLabel):
        return FormalVector.unit(pairs[0])
    return FormalVector(pairs)


def ten(*pairs):
    """ten(((l1, l2), coeff), ...) builds an arity-2 tensor."""
    return FormalTensor(2, pairs)


def half():
    return Fraction(1, 2)
