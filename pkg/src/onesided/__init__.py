"""Exact decision procedures for one-sided approximation in subgroups of R^n."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BudgetExhausted,
    InputError,
    NoWitnessExists,
    OneSidedError,
)
from .scalar_field import FieldContext, Scalar, make_context, rational_context  # noqa: E402
from .kronecker_density import SubgroupSpec, classify_line_group, property_a  # noqa: E402
from .face_geometry import TracePoint, smallest_face, z_set_empty, z_set_of_kernel  # noqa: E402
from .property_b_engine import decide, build_failure_certificate, verify_failure_certificate  # noqa: E402
from .witness_lab import construct_witness, transport_witness, verify_witness  # noqa: E402
from .ordered_group_layer import (  # noqa: E402
    OrderedGroupSpec,
    SubgroupInG,
    check_convex_sufficient,
    check_pure,
    critical_refinable,
    unperforation_verdict,
)
