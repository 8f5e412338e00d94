import enum


class SearchMode(str, enum.Enum):
    EXHAUSTIVE = "exhaustive"
    SAMPLED = "sampled"


class AdversaryKind(str, enum.Enum):
    NONE = "none"
    OBLIVIOUS_EXHAUSTIVE = "oblivious-exhaustive"
    Z_AWARE_GREEDY = "z-aware-greedy"
    RANDOM = "random"


class CodeFamily(str, enum.Enum):
    LINEAR = "linear"
    COSET = "coset"
    PSEUDOLINEAR = "pseudolinear"
    KWISE = "kwise"
    IID = "iid"


class Subcommand(str, enum.Enum):
    FIG1_DATA = "fig1-data"
    LEAKAGE_EXACT = "leakage-exact"
    ATTACK_LINEAR = "attack-linear"
    COSET_ATTACK = "coset-attack"
    KWISE_CHECK = "kwise-check"
    SOFTCOVER_RUN = "softcover-run"
    RELIABILITY_SIM = "reliability-sim"
    THEOREM2_RUN = "theorem2-run"
