"""Finite relations lab: Frobenius monoids, FEM algebras, Kleisli daggers, chains."""

from .chains import (
    ChainData, Polynomial, adamek_approximant, check_ambilimit_laws,
    check_initial_algebra_approx, pfn_chain,
)
from .groupoid import FiniteGroupoid, InvalidGroupoid, all_small_groupoids
from .monoid import (
    AND_MONOID, RelAlgebra, RelMonoid, check_fem, check_frobenius, free_algebra,
    groupoid_to_frobenius, kleisli_compose, kleisli_dagger, search_em_not_fem,
)
from .relation import Relation

__all__ = [
    "AND_MONOID", "ChainData", "FiniteGroupoid", "InvalidGroupoid", "Polynomial",
    "RelAlgebra", "RelMonoid", "Relation", "adamek_approximant", "all_small_groupoids",
    "check_ambilimit_laws", "check_fem", "check_frobenius", "check_initial_algebra_approx",
    "free_algebra", "groupoid_to_frobenius", "kleisli_compose", "kleisli_dagger",
    "pfn_chain", "search_em_not_fem",
]
