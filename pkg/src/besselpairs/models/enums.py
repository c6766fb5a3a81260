from enum import Enum


class PotentialKind(str, Enum):
    CONSTANT = "Constant"
    POWER = "Power"
    POWER_WEIGHTED = "PowerWeighted"
    ITERATED_LOG = "IteratedLog"
    XLOG = "XLog"
    SCALED = "Scaled"
    SUM = "Sum"
    PRODUCT = "Product"


class CriterionClass(str, Enum):
    """Verdict of the integral criterion against the 1/4 threshold.

    SUFFICIENT_BELOW_QUARTER only guarantees a positive solution on some
    small ball (0, rho), not necessarily on the whole (0, R).
    """
    SUFFICIENT_BELOW_QUARTER = "SufficientBelowQuarter"
    NECESSARY_FAIL_ABOVE_QUARTER = "NecessaryFailAboveQuarter"
    INCONCLUSIVE = "Inconclusive"


class HigherOrderVariant(str, Enum):
    HO1 = "HO1"
    HO2 = "HO2"
    HO3 = "HO3"
    HO4 = "HO4"


class Suite(str, Enum):
    CLASSICAL = "classical"
    CASE_TABLE = "appendixB"
    RELLICH = "rellich"
    WEIGHTS = "weights"


class Verb(str, Enum):
    PAIR_CHECK = "pair-check"
    WEIGHT = "weight"
    CONSTANT = "constant"
    VERIFY = "verify"
    TABLE = "table"
    STUDY = "study"


class OutputFormat(str, Enum):
    HUMAN = "human"
    JSON = "json"
    CSV = "csv"
