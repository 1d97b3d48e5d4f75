from abc import ABC, abstractmethod
from typing import List, Sequence

import numpy as np

from .. import datatypes


def rank(bids: Sequence[float], rng: np.random.Generator) -> List[int]:
    """Agent indices by descending bid, ties broken by one uniform permutation drawn from ``rng``."""
    bids = np.asarray(bids, dtype=float)
    tie_break = rng.permutation(len(bids))
    return np.lexsort((tie_break, -bids)).tolist()


def clearing_bid(bids: Sequence[float], order: Sequence[int], m: int) -> float:
    """The (m+1)th highest bid, or 0 when nobody is left out."""
    if len(order) <= m:
        return 0.0
    return float(bids[order[m]])


class BaseMechanism(ABC):
    """A two-period mechanism: period-0 allocation and two part payments from an economy."""
    name: str = ''

    @property
    def penalty(self):
        """Fixed penalty of the mechanism, if it has one."""
        return None

    @abstractmethod
    def run(
        self,
        economy: datatypes.Economy,
        rng: np.random.Generator,
    ) -> datatypes.MechanismOutcome:

        raise NotImplementedError(
            'The run method must be implemented by subclasses.'
        )

    def __repr__(self) -> str:
        if self.penalty is None:
            return f"{type(self).__name__}()"
        return f"{type(self).__name__}(penalty={self.penalty:g})"
