from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterator, List, Tuple

from pydantic import BaseModel

from shared.settings import settings
from modules.algebra.models import Monomial, MonomialOrder, MultiPoly


@dataclass
class GroebnerStats:
    """Counters collected while completing a basis"""
    spairs_processed: int = 0
    reductions_to_zero: int = 0
    pairs_pruned: int = 0
    max_coefficient_bits: int = 0
    total_coefficient_bits: int = 0
    basis_size: int = 0
    elapsed_seconds: float = 0.0
    strategy: str = "direct"

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class GroebnerBudget:
    """Resource caps for one basis computation"""
    max_spairs: int
    max_coefficient_bits: int

    @classmethod
    def default(cls) -> "GroebnerBudget":
        return cls(
            max_spairs=settings.budget_spairs,
            max_coefficient_bits=settings.budget_coefficient_bits
        )

    def scaled(self, multiplier: int) -> "GroebnerBudget":
        return GroebnerBudget(self.max_spairs * multiplier, self.max_coefficient_bits * multiplier)


@dataclass(frozen=True)
class GroebnerBasis:
    generators: Tuple[MultiPoly, ...]
    order: MonomialOrder
    variables: Tuple[str, ...]
    stats: GroebnerStats = field(default_factory=GroebnerStats, compare=False)

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self) -> Iterator[MultiPoly]:
        return iter(self.generators)

    def leading_monomials(self) -> List[Monomial]:
        return [g.leading_monomial(self.order) for g in self.generators]

    def render_text(self) -> str:
        """One generator per line"""
        return "\n".join(g.render() for g in self.generators)

    def to_json(self) -> Dict[str, Any]:
        return BasisResponse(
            order=self.order.value,
            variables=list(self.variables),
            generators=[[BasisTerm(**t) for t in g.to_json()] for g in self.generators],
            stats=self.stats.to_dict()
        ).model_dump()


class BasisTerm(BaseModel):
    exponents: List[int]
    coefficient: str


class BasisResponse(BaseModel):
    order: str
    variables: List[str]
    generators: List[List[BasisTerm]]
    stats: Dict[str, Any]
