"""Design-space exploration for read-port sharing in a centralized
physical register file: scheme representation, port arbitration, exact
two-level logic minimization, gate-depth estimation, scheme construction
from utilization profiles, and Monte-Carlo conflict-rate simulation."""

from .arbitration import (
    ArbitrationOutcome,
    GrantMatrix,
    RequestVectors,
    arbitrate,
    conflict_function,
    conflict_truth_table,
    grant_function,
    support_closure,
    truth_table,
)
from .construct import (
    ConstructError,
    DEFAULT_PROFILE,
    MaskPlan,
    UtilizationProfile,
    assign_masks,
    build_scheme,
    mask_occupancy,
    parse_profile,
    select_masks,
    serialize_profile,
)
from .depth import (
    CriticalPathReport,
    ElementReport,
    ThresholdVerdict,
    element_depth,
    scheme_critical_path,
    threshold_compare,
    tree_depth,
)
from .fixtures import FIXTURE_NAMES, all_fixtures, load_fixture
from .minimize import (
    BooleanFunction,
    CoverForm,
    FormKind,
    Implicant,
    MinimizeError,
    minimum_cnf,
    minimum_cover,
    pla_dump,
    pla_load,
    prime_implicants,
)
from .scheme import (
    Classification,
    MachineConfig,
    Mask,
    OperandSlot,
    SchemeError,
    SchemeMatrix,
    SlotKind,
    classify_scheme,
    extract_masks,
    format_mask,
    mask_ports,
    parse_scheme,
    serialize_scheme,
    validate_scheme,
)
from .simulate import (
    ConflictReport,
    SchemeComparison,
    SimConfig,
    analytic_conflict_bound,
    compare_schemes,
    simulate,
)

__version__ = "0.1.0"
