"""Finite-rank operators, singular values and infinite-operator models."""

from .finite_rank import FiniteRankOp
from .growth import coefficient_decay_check, det_coefficients, order_bound, order_estimate
from .models import (
    ComposeBound,
    ConvergenceTable,
    DiagonalModel,
    EntrySpec,
    KernelModel,
    Limit,
    SequenceSpec,
    compose_schatten_bound,
    composition_exponent,
    composition_norms,
    eigenvalue_lr_norm,
    enumeration_indices,
    fredholm_det_limit,
    model_from_json,
    trace_limit,
)
from .svd import (
    WeylCheck,
    lp_norm,
    schatten_norm,
    singular_values,
    trace_norm,
    trace_norm_submultiplicative,
    weyl_check,
)
