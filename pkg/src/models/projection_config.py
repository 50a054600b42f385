"""
ProjectionConfig dataclass for projection matrix construction
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional


class WeightMode(Enum):
    """How the nonzero values of the node block are chosen"""
    CONSTANT = "constant"
    DEGREE = "degree"


class Normalization(Enum):
    """Normalization applied to (P, P transpose)"""
    NONE = "none"
    ROW_ROW = "row-row"
    COL_COL = "col-col"
    ROW_COL = "row-col"
    COL_ROW = "col-row"

    @property
    def forward_side(self) -> Optional[str]:
        """'row', 'col' or None for the P side"""
        if self is Normalization.NONE:
            return None
        return self.value.split("-")[0]

    @property
    def reverse_side(self) -> Optional[str]:
        """'row', 'col' or None for the P transpose side"""
        if self is Normalization.NONE:
            return None
        return self.value.split("-")[1]


@dataclass(frozen=True)
class ProjectionConfig:
    """
    Settings for building the projection matrix.

    Attributes:
        pv_weight: Positive weight c placed on the node block
        pv_weight_mode: Constant c, or d(v)*c per node
        normalization: Normalization variant for (P, P transpose)
        permutation: Optional bijection sigma; row i of the node block has its
            nonzero at column sigma[i]. None means identity.
        hops: Number of compound applications for same-stage placements
    """
    pv_weight: float = 1.0
    pv_weight_mode: WeightMode = WeightMode.CONSTANT
    normalization: Normalization = Normalization.ROW_ROW
    permutation: Optional[tuple[int, ...]] = None
    hops: int = 1

    def validate(self, num_nodes: Optional[int] = None) -> tuple[bool, Optional[str]]:
        """
        Validate the projection settings.

        Args:
            num_nodes: When given, the permutation is also checked against it

        Returns:
            A tuple of (is_valid, error_message).
        """
        if not isinstance(self.pv_weight, (int, float)) or not self.pv_weight > 0:
            return False, "pv_weight must be a positive number"

        if not isinstance(self.hops, int) or self.hops < 1:
            return False, "hops must be a positive integer"

        if self.permutation is not None:
            if sorted(self.permutation) != list(range(len(self.permutation))):
                return False, "permutation must be a bijection on node indices"
            if num_nodes is not None and len(self.permutation) != num_nodes:
                return False, (
                    f"permutation has length {len(self.permutation)} "
                    f"but the hypergraph has {num_nodes} nodes"
                )

        return True, None

    @classmethod
    def from_dict(cls, data: dict) -> 'ProjectionConfig':
        """
        Create a ProjectionConfig from a dictionary.

        Args:
            data: Dictionary with the keys produced by to_dict

        Returns:
            ProjectionConfig instance
        """
        permutation = data.get('permutation')
        return cls(
            pv_weight=float(data.get('pv_weight', 1.0)),
            pv_weight_mode=WeightMode(data.get('pv_weight_mode', 'constant')),
            normalization=Normalization(data.get('normalization', 'row-row')),
            permutation=tuple(permutation) if permutation is not None else None,
            hops=int(data.get('hops', 1)),
        )

    def to_dict(self) -> dict:
        return {
            'pv_weight': self.pv_weight,
            'pv_weight_mode': self.pv_weight_mode.value,
            'normalization': self.normalization.value,
            'permutation': list(self.permutation) if self.permutation is not None else None,
            'hops': self.hops,
        }
