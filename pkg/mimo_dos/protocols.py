# mimo_dos/protocols.py
from enum import Enum


class ProtocolKind(Enum):
    """The three scheduling protocols."""

    TG_CSIT = "TG-CSIT"
    TG_CSIR = "TG-CSIR"
    SG_CSIT = "SG-CSIT"

    @property
    def two_group(self) -> bool:
        return self is not ProtocolKind.SG_CSIT

    @property
    def uses_csit(self) -> bool:
        return self is not ProtocolKind.TG_CSIR

    @classmethod
    def parse(cls, text: str) -> "ProtocolKind":
        key = text.strip().upper().replace("_", "-")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"Unknown protocol: {text}")


class CsirMode(Enum):
    """Where CSIR rate statistics come from."""

    PAPER = "paper"        # printed closed forms, inverse-CDF sampling
    PHYSICAL = "physical"  # sampled channel vectors, MRC / OC combining


class DecisionRule(Enum):
    """Decision rule in state {1,1}."""

    APPROX_SUM = "approx_sum"  # compare the two-link sum rate only
    EXACT_MAX = "exact_max"    # best of both single links and the two-link sum
