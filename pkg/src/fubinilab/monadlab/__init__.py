"""Monads on finite universes: distributions, double dualization, strengths and adjunctions."""
from .commutative import (
    FubiniVerdict,
    check_commutative,
    fubini_pair,
    kock_enrichment,
    tdoubleprime,
    tprime,
)
from .monads import (
    DistributionMonad,
    DoubleDualizationMonad,
    MonadInstance,
    MonadMorphism,
    distribution_monad,
    double_dualization_monad,
    is_reflexive,
)
